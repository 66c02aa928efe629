//! Finite group builders in the signature `{mul/2, inv/1, e/0}`, the group
//! axiom check, and the subgroup-theoretic oracles (center, normal closures,
//! relative commutator subgroups) used to validate the abstract engine.

use std::sync::Arc;
use std::sync::OnceLock;

use crate::algebra::{AlgebraError, FiniteAlgebra, OpSymbol, Signature};
use crate::congruence::{Congruence, UnionFind};
use crate::hom::Homomorphism;

/// The shared group signature.
pub fn group_signature() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| {
        Arc::new(Signature::new(vec![
            OpSymbol::new("mul", 2),
            OpSymbol::new("inv", 1),
            OpSymbol::new("e", 0),
        ]))
    })
    .clone()
}

/// Indices of the group operations in [`group_signature`].
pub const GROUP_MUL: usize = 0;
pub const GROUP_INV: usize = 1;
pub const GROUP_E: usize = 2;

/// Whether the algebra has the group signature shape (by symbol and arity).
pub fn has_group_signature(alg: &FiniteAlgebra) -> bool {
    let sig = alg.signature();
    sig.len() == 3
        && sig.ops()[0] == OpSymbol::new("mul", 2)
        && sig.ops()[1] == OpSymbol::new("inv", 1)
        && sig.ops()[2] == OpSymbol::new("e", 0)
}

/// Builds a group from a multiplication table, deriving inverses and checking
/// the axioms exhaustively.
pub fn group_from_mul_table(name: &str, mul: Vec<usize>) -> Result<Arc<FiniteAlgebra>, AlgebraError> {
    let n = (mul.len() as f64).sqrt().round() as usize;
    if n * n != mul.len() {
        return Err(AlgebraError::MapLength { expected: n * n, actual: mul.len() });
    }
    // Locate the two-sided identity.
    let e = (0..n)
        .find(|&e| (0..n).all(|x| mul[e * n + x] == x && mul[x * n + e] == x))
        .ok_or(AlgebraError::Invalid(Default::default()))?;
    let mut inv = vec![usize::MAX; n];
    for x in 0..n {
        inv[x] = (0..n)
            .find(|&y| mul[x * n + y] == e && mul[y * n + x] == e)
            .ok_or(AlgebraError::Invalid(Default::default()))?;
    }
    let alg = Arc::new(FiniteAlgebra::from_usize_tables(
        name,
        n,
        group_signature(),
        vec![mul, inv, vec![e]],
    )?);
    let violations = group_axiom_violations(&alg);
    if violations.is_empty() {
        Ok(alg)
    } else {
        Err(AlgebraError::Invalid(Default::default()))
    }
}

/// Exhaustive group axiom check; returns human-readable violations.
pub fn group_axiom_violations(alg: &FiniteAlgebra) -> Vec<String> {
    let mut out = Vec::new();
    if !has_group_signature(alg) {
        out.push("signature is not {mul/2, inv/1, e/0}".to_string());
        return out;
    }
    let n = alg.size();
    let e = alg.constant(GROUP_E);
    for x in 0..n {
        if alg.apply2(GROUP_MUL, e, x) != x || alg.apply2(GROUP_MUL, x, e) != x {
            out.push(format!("e is not an identity at {}", x));
        }
        let ix = alg.apply1(GROUP_INV, x);
        if alg.apply2(GROUP_MUL, x, ix) != e || alg.apply2(GROUP_MUL, ix, x) != e {
            out.push(format!("inv fails at {}", x));
        }
    }
    'outer: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let xy_z = alg.apply2(GROUP_MUL, alg.apply2(GROUP_MUL, x, y), z);
                let x_yz = alg.apply2(GROUP_MUL, x, alg.apply2(GROUP_MUL, y, z));
                if xy_z != x_yz {
                    out.push(format!("associativity fails at ({}, {}, {})", x, y, z));
                    break 'outer;
                }
            }
        }
    }
    out
}

pub fn is_group(alg: &FiniteAlgebra) -> bool {
    group_axiom_violations(alg).is_empty()
}

pub fn cyclic_group(k: usize) -> Arc<FiniteAlgebra> {
    assert!(k >= 1);
    let mut mul = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            mul.push((i + j) % k);
        }
    }
    let name = if k == 1 { "1".to_string() } else { format!("z{}", k) };
    group_from_mul_table(&name, mul).expect("cyclic tables satisfy the group axioms")
}

/// Dihedral group of order `2k`: rotations `r^i` are indices `0..k`,
/// reflections `r^i s` are `k..2k`.
pub fn dihedral_group(k: usize) -> Arc<FiniteAlgebra> {
    assert!(k >= 1);
    let n = 2 * k;
    let idx = |i: usize, j: usize| i + k * j;
    let mut mul = vec![0usize; n * n];
    for a in 0..k {
        for b in 0..2 {
            for c in 0..k {
                for d in 0..2 {
                    // (r^a s^b)(r^c s^d) = r^(a + (-1)^b c) s^(b+d)
                    let rot = if b == 0 { (a + c) % k } else { (a + k - c % k) % k };
                    mul[idx(a, b) * n + idx(c, d)] = idx(rot, (b + d) % 2);
                }
            }
        }
    }
    group_from_mul_table(&format!("d{}", k), mul).expect("dihedral tables satisfy the group axioms")
}

/// Generalized quaternion (dicyclic) group of order `4m`: elements `a^i b^j`
/// with `a` of order `2m`, `b^2 = a^m`, `b a b^-1 = a^-1`. Index `i + 2m*j`.
pub fn quaternion_group(m: usize) -> Arc<FiniteAlgebra> {
    assert!(m >= 1);
    let half = 2 * m;
    let n = 4 * m;
    let idx = |i: usize, j: usize| i + half * j;
    let mut mul = vec![0usize; n * n];
    for i in 0..half {
        for j in 0..2 {
            for k in 0..half {
                for l in 0..2 {
                    let cell = if j == 0 {
                        idx((i + k) % half, l)
                    } else if l == 0 {
                        idx((i + half - k % half) % half, 1)
                    } else {
                        idx((i + half - k % half + m) % half, 0)
                    };
                    mul[idx(i, j) * n + idx(k, l)] = cell;
                }
            }
        }
    }
    let name = format!("q{}", n);
    group_from_mul_table(&name, mul).expect("dicyclic tables satisfy the group axioms")
}

/// Symmetric group on `k` letters; elements are the permutations of `0..k`
/// in lexicographic order, multiplication is composition (left acts last).
pub fn symmetric_group(k: usize) -> Arc<FiniteAlgebra> {
    assert!(k >= 1);
    let perms = permutations(k);
    let n = perms.len();
    let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    let mut mul = vec![0usize; n * n];
    let mut buf = vec![0usize; k];
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            for x in 0..k {
                buf[x] = p[q[x]];
            }
            mul[i * n + j] = index_of(&buf);
        }
    }
    group_from_mul_table(&format!("s{}", k), mul).expect("permutation tables satisfy the group axioms")
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    fn rec(current: &mut Vec<usize>, pos: usize, out: &mut Vec<Vec<usize>>) {
        let k = current.len();
        if pos == k {
            out.push(current.clone());
            return;
        }
        for i in pos..k {
            current.swap(pos, i);
            rec(current, pos + 1, out);
            current.swap(pos, i);
        }
    }
    rec(&mut current, 0, &mut out);
    out.sort();
    out
}

pub fn direct_product_group(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Arc<FiniteAlgebra> {
    Arc::new(FiniteAlgebra::direct_product(a, b).expect("group signatures match"))
}

/// The center `{z : zg = gz for all g}` as a sorted element subset.
pub fn center(g: &FiniteAlgebra) -> Result<Vec<usize>, AlgebraError> {
    require_group(g)?;
    let n = g.size();
    Ok((0..n)
        .filter(|&z| (0..n).all(|x| g.apply2(GROUP_MUL, z, x) == g.apply2(GROUP_MUL, x, z)))
        .collect())
}

fn require_group(g: &FiniteAlgebra) -> Result<(), AlgebraError> {
    if is_group(g) {
        Ok(())
    } else {
        Err(AlgebraError::Invalid(Default::default()))
    }
}

/// Closure of a subset under multiplication and inverse, always containing
/// the identity.
pub fn subgroup_generated(g: &FiniteAlgebra, seeds: &[usize]) -> Vec<usize> {
    let n = g.size();
    let mut member = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let e = g.constant(GROUP_E);
    member[e] = true;
    stack.push(e);
    for &s in seeds {
        if !member[s] {
            member[s] = true;
            stack.push(s);
        }
    }
    while let Some(x) = stack.pop() {
        let ix = g.apply1(GROUP_INV, x);
        if !member[ix] {
            member[ix] = true;
            stack.push(ix);
        }
        for y in 0..n {
            if member[y] {
                for z in [g.apply2(GROUP_MUL, x, y), g.apply2(GROUP_MUL, y, x)] {
                    if !member[z] {
                        member[z] = true;
                        stack.push(z);
                    }
                }
            }
        }
    }
    (0..n).filter(|&x| member[x]).collect()
}

/// Smallest normal subgroup containing the seeds: subgroup closure
/// interleaved with conjugation closure.
pub fn normal_closure(g: &FiniteAlgebra, seeds: &[usize]) -> Vec<usize> {
    let n = g.size();
    let mut member = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let e = g.constant(GROUP_E);
    member[e] = true;
    for &s in seeds {
        if !member[s] {
            member[s] = true;
            stack.push(s);
        }
    }
    while let Some(x) = stack.pop() {
        let ix = g.apply1(GROUP_INV, x);
        if !member[ix] {
            member[ix] = true;
            stack.push(ix);
        }
        for y in 0..n {
            // Conjugates by everything, products with current members.
            let iy = g.apply1(GROUP_INV, y);
            let conj = g.apply2(GROUP_MUL, g.apply2(GROUP_MUL, iy, x), y);
            if !member[conj] {
                member[conj] = true;
                stack.push(conj);
            }
            if member[y] {
                let prod = g.apply2(GROUP_MUL, x, y);
                if !member[prod] {
                    member[prod] = true;
                    stack.push(prod);
                }
            }
        }
    }
    (0..n).filter(|&x| member[x]).collect()
}

/// A small generating set for a subgroup given by its member list, found
/// greedily: add the least element outside the closure of the current
/// generators, then re-close by right multiplication. Each round at least
/// doubles the closure, so the result has at most log2 |H| generators.
pub fn generating_set(g: &FiniteAlgebra, members: &[usize]) -> Vec<usize> {
    let n = g.size();
    let e = g.constant(GROUP_E);
    let mut in_closure = vec![false; n];
    in_closure[e] = true;
    let mut closed = vec![e];
    let mut gens: Vec<usize> = Vec::new();
    loop {
        let next = members.iter().copied().find(|&m| !in_closure[m]);
        let Some(new_gen) = next else { break };
        gens.push(new_gen);
        if !in_closure[new_gen] {
            in_closure[new_gen] = true;
            closed.push(new_gen);
        }
        // Orbit of the current closure under right multiplication by all
        // generators; in a finite group this closure is the subgroup.
        let mut cursor = 0;
        while cursor < closed.len() {
            let x = closed[cursor];
            cursor += 1;
            for &gen in &gens {
                let y = g.apply2(GROUP_MUL, x, gen);
                if !in_closure[y] {
                    in_closure[y] = true;
                    closed.push(y);
                }
            }
        }
    }
    gens
}

pub fn is_subgroup(g: &FiniteAlgebra, subset: &[usize]) -> bool {
    let member = membership(g.size(), subset);
    if !member[g.constant(GROUP_E)] {
        return false;
    }
    for &x in subset {
        if !member[g.apply1(GROUP_INV, x)] {
            return false;
        }
        for &y in subset {
            if !member[g.apply2(GROUP_MUL, x, y)] {
                return false;
            }
        }
    }
    true
}

pub fn is_normal_subgroup(g: &FiniteAlgebra, subset: &[usize]) -> bool {
    if !is_subgroup(g, subset) {
        return false;
    }
    let member = membership(g.size(), subset);
    for &x in subset {
        for y in 0..g.size() {
            let iy = g.apply1(GROUP_INV, y);
            if !member[g.apply2(GROUP_MUL, g.apply2(GROUP_MUL, iy, x), y)] {
                return false;
            }
        }
    }
    true
}

fn membership(n: usize, subset: &[usize]) -> Vec<bool> {
    let mut member = vec![false; n];
    for &x in subset {
        member[x] = true;
    }
    member
}

/// `[K, G]`: the normal closure of all commutators `k^-1 g^-1 k g` with
/// `k ∈ K`, by exhaustive generation. `K` must be a normal subgroup.
pub fn relative_commutator_subgroup(
    g: &FiniteAlgebra,
    k_subset: &[usize],
) -> Result<Vec<usize>, AlgebraError> {
    require_group(g)?;
    if !is_normal_subgroup(g, k_subset) {
        return Err(AlgebraError::Invalid(Default::default()));
    }
    let mut seeds = Vec::new();
    for &k in k_subset {
        for x in 0..g.size() {
            seeds.push(commutator_element(g, k, x));
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    Ok(normal_closure(g, &seeds))
}

/// `x^-1 y^-1 x y`.
pub fn commutator_element(g: &FiniteAlgebra, x: usize, y: usize) -> usize {
    let ix = g.apply1(GROUP_INV, x);
    let iy = g.apply1(GROUP_INV, y);
    g.apply2(GROUP_MUL, g.apply2(GROUP_MUL, g.apply2(GROUP_MUL, ix, iy), x), y)
}

/// `[G, G]` by exhaustive commutator generation.
pub fn derived_subgroup(g: &FiniteAlgebra) -> Result<Vec<usize>, AlgebraError> {
    let all: Vec<usize> = (0..g.size()).collect();
    relative_commutator_subgroup(g, &all)
}

/// Elements mapped to the identity of the target.
pub fn kernel_subset(f: &Homomorphism) -> Vec<usize> {
    let e = f.target().constant(GROUP_E);
    (0..f.source().size()).filter(|&x| f.apply(x) == e).collect()
}

/// The coset partition of a normal subgroup, as a congruence.
pub fn coset_congruence(
    g: &Arc<FiniteAlgebra>,
    normal: &[usize],
) -> Result<Congruence, AlgebraError> {
    if !is_normal_subgroup(g, normal) {
        return Err(AlgebraError::Invalid(Default::default()));
    }
    let n = g.size();
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        for &s in normal {
            uf.union(x as u32, g.apply2(GROUP_MUL, x, s) as u32);
        }
    }
    let (blocks, _) = uf.canonical_blocks();
    let assignment: Vec<usize> = blocks.iter().map(|&b| b as usize).collect();
    Congruence::from_assignment(g.clone(), &assignment)
}

/// The classical centrality criterion: the kernel is contained in the center.
pub fn group_central_oracle(f: &Homomorphism) -> Result<bool, AlgebraError> {
    require_group(f.source())?;
    require_group(f.target())?;
    if !f.is_surjective() {
        return Err(AlgebraError::NotSurjective);
    }
    let z = center(f.source())?;
    let member = membership(f.source().size(), &z);
    Ok(kernel_subset(f).iter().all(|&k| member[k]))
}

/// The classical triviality criterion: the restriction of `f` to the derived
/// subgroups `[A, A] -> [B, B]` is an isomorphism (here: a bijection between
/// the subsets, which suffices since it is the restriction of a homomorphism).
pub fn group_trivial_oracle(f: &Homomorphism) -> Result<bool, AlgebraError> {
    require_group(f.source())?;
    require_group(f.target())?;
    if !f.is_surjective() {
        return Err(AlgebraError::NotSurjective);
    }
    let da = derived_subgroup(f.source())?;
    let db = derived_subgroup(f.target())?;
    if da.len() != db.len() {
        return Ok(false);
    }
    let mut image: Vec<usize> = da.iter().map(|&x| f.apply(x)).collect();
    image.sort_unstable();
    image.dedup();
    Ok(image == db)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_pass_the_axiom_check() {
        for g in [
            cyclic_group(1),
            cyclic_group(7),
            dihedral_group(4),
            quaternion_group(2),
            symmetric_group(3),
            direct_product_group(&cyclic_group(2), &cyclic_group(4)),
        ] {
            assert!(is_group(&g), "axioms fail for {}", g.name());
        }
    }

    #[test]
    fn center_of_abelian_group_is_everything() {
        let z6 = cyclic_group(6);
        assert_eq!(center(&z6).unwrap(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn center_of_s3_is_trivial() {
        let s3 = symmetric_group(3);
        assert_eq!(center(&s3).unwrap(), vec![s3.constant(GROUP_E)]);
    }

    #[test]
    fn center_of_q8_has_two_elements() {
        let q8 = quaternion_group(2);
        let z = center(&q8).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z.contains(&q8.constant(GROUP_E)));
    }

    #[test]
    fn relative_commutator_of_trivial_subgroup_is_trivial() {
        let s3 = symmetric_group(3);
        let e = s3.constant(GROUP_E);
        assert_eq!(relative_commutator_subgroup(&s3, &[e]).unwrap(), vec![e]);
    }

    #[test]
    fn derived_subgroup_of_s3_is_a3() {
        let s3 = symmetric_group(3);
        let derived = derived_subgroup(&s3).unwrap();
        assert_eq!(derived.len(), 3);
    }

    #[test]
    fn commutator_of_rotations_with_d4_is_the_half_turn() {
        let d4 = dihedral_group(4);
        // Rotations are indices 0..4; <r^2> = {0, 2}.
        let rotations: Vec<usize> = (0..4).collect();
        let result = relative_commutator_subgroup(&d4, &rotations).unwrap();
        assert_eq!(result, vec![0, 2]);
    }

    #[test]
    fn central_oracle_examples() {
        let q8 = quaternion_group(2);
        let z = center(&q8).unwrap();
        let theta = coset_congruence(&q8, &z).unwrap();
        let (_q, proj) = crate::congruence::quotient_by_congruence(&q8, &theta).unwrap();
        assert!(group_central_oracle(&proj).unwrap());

        let s3 = symmetric_group(3);
        let a3 = derived_subgroup(&s3).unwrap();
        let theta = coset_congruence(&s3, &a3).unwrap();
        let (_q, sign) = crate::congruence::quotient_by_congruence(&s3, &theta).unwrap();
        assert!(!group_central_oracle(&sign).unwrap());

        let id = Homomorphism::identity(&s3);
        assert!(group_central_oracle(&id).unwrap());
    }

    #[test]
    fn symmetric_group_sizes() {
        assert_eq!(symmetric_group(3).size(), 6);
        assert_eq!(symmetric_group(4).size(), 24);
    }
}
