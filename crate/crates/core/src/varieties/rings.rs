//! Finite commutative rings with unit in the signature
//! `{add/2, neg/1, zero/0, mul/2, one/0}`, and the reflection onto the
//! subvariety of Boolean rings (every element idempotent).

use std::sync::Arc;
use std::sync::OnceLock;

use crate::algebra::{AlgebraError, FiniteAlgebra, OpSymbol, Signature};
use crate::congruence::congruence_generated;
use crate::congruence::quotient_by_congruence;
use crate::hom::Homomorphism;

pub fn ring_signature() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| {
        Arc::new(Signature::new(vec![
            OpSymbol::new("add", 2),
            OpSymbol::new("neg", 1),
            OpSymbol::new("zero", 0),
            OpSymbol::new("mul", 2),
            OpSymbol::new("one", 0),
        ]))
    })
    .clone()
}

pub const RING_ADD: usize = 0;
pub const RING_NEG: usize = 1;
pub const RING_ZERO: usize = 2;
pub const RING_MUL: usize = 3;
pub const RING_ONE: usize = 4;

pub fn has_ring_signature(alg: &FiniteAlgebra) -> bool {
    alg.signature() == &ring_signature()
}

/// Exhaustive commutative-ring-with-unit axiom check.
pub fn ring_axiom_violations(alg: &FiniteAlgebra) -> Vec<String> {
    let mut out = Vec::new();
    if !has_ring_signature(alg) {
        out.push("signature is not {add/2, neg/1, zero/0, mul/2, one/0}".to_string());
        return out;
    }
    let n = alg.size();
    let zero = alg.constant(RING_ZERO);
    let one = alg.constant(RING_ONE);
    for x in 0..n {
        if alg.apply2(RING_ADD, zero, x) != x {
            out.push(format!("0 is not an additive identity at {}", x));
        }
        if alg.apply2(RING_ADD, x, alg.apply1(RING_NEG, x)) != zero {
            out.push(format!("negation fails at {}", x));
        }
        if alg.apply2(RING_MUL, one, x) != x || alg.apply2(RING_MUL, x, one) != x {
            out.push(format!("1 is not a multiplicative identity at {}", x));
        }
        for y in 0..n {
            if alg.apply2(RING_ADD, x, y) != alg.apply2(RING_ADD, y, x) {
                out.push(format!("addition is not commutative at ({}, {})", x, y));
            }
            if alg.apply2(RING_MUL, x, y) != alg.apply2(RING_MUL, y, x) {
                out.push(format!("multiplication is not commutative at ({}, {})", x, y));
            }
        }
    }
    'assoc: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let add_l = alg.apply2(RING_ADD, alg.apply2(RING_ADD, x, y), z);
                let add_r = alg.apply2(RING_ADD, x, alg.apply2(RING_ADD, y, z));
                let mul_l = alg.apply2(RING_MUL, alg.apply2(RING_MUL, x, y), z);
                let mul_r = alg.apply2(RING_MUL, x, alg.apply2(RING_MUL, y, z));
                let dist_l = alg.apply2(RING_MUL, x, alg.apply2(RING_ADD, y, z));
                let dist_r =
                    alg.apply2(RING_ADD, alg.apply2(RING_MUL, x, y), alg.apply2(RING_MUL, x, z));
                if add_l != add_r || mul_l != mul_r || dist_l != dist_r {
                    out.push(format!("associativity or distributivity fails at ({}, {}, {})", x, y, z));
                    break 'assoc;
                }
            }
        }
    }
    out
}

pub fn is_ring(alg: &FiniteAlgebra) -> bool {
    ring_axiom_violations(alg).is_empty()
}

/// Builds a ring from explicit addition and multiplication tables, locating
/// the constants and deriving negation, then checking the axioms.
pub fn ring_from_tables(
    name: &str,
    add: Vec<usize>,
    mul: Vec<usize>,
) -> Result<Arc<FiniteAlgebra>, AlgebraError> {
    let n = (add.len() as f64).sqrt().round() as usize;
    if n * n != add.len() || mul.len() != add.len() {
        return Err(AlgebraError::MapLength { expected: n * n, actual: mul.len() });
    }
    let zero = (0..n)
        .find(|&z| (0..n).all(|x| add[z * n + x] == x))
        .ok_or(AlgebraError::Invalid(Default::default()))?;
    let one = (0..n)
        .find(|&o| (0..n).all(|x| mul[o * n + x] == x && mul[x * n + o] == x))
        .ok_or(AlgebraError::Invalid(Default::default()))?;
    let mut neg = vec![usize::MAX; n];
    for x in 0..n {
        neg[x] = (0..n)
            .find(|&y| add[x * n + y] == zero)
            .ok_or(AlgebraError::Invalid(Default::default()))?;
    }
    let alg = Arc::new(FiniteAlgebra::from_usize_tables(
        name,
        n,
        ring_signature(),
        vec![add, neg, vec![zero], mul, vec![one]],
    )?);
    if ring_axiom_violations(&alg).is_empty() {
        Ok(alg)
    } else {
        Err(AlgebraError::Invalid(Default::default()))
    }
}

/// The ring of integers mod `k`.
pub fn cyclic_ring(k: usize) -> Arc<FiniteAlgebra> {
    assert!(k >= 1);
    let mut add = Vec::with_capacity(k * k);
    let mut mul = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            add.push((i + j) % k);
            mul.push((i * j) % k);
        }
    }
    let neg = (0..k).map(|i| (k - i) % k).collect();
    let one = if k == 1 { 0 } else { 1 };
    let alg = Arc::new(
        FiniteAlgebra::from_usize_tables(
            &format!("rz{}", k),
            k,
            ring_signature(),
            vec![add, neg, vec![0], mul, vec![one]],
        )
        .expect("modular tables are valid"),
    );
    debug_assert!(is_ring(&alg));
    alg
}

/// The field with four elements: `{0, 1, t, t+1}` with `t^2 = t + 1`.
pub fn field_four() -> Arc<FiniteAlgebra> {
    let add: Vec<usize> = (0..4)
        .flat_map(|i| (0..4).map(move |j| i ^ j))
        .collect();
    let mul_of = |a: usize, b: usize| -> usize {
        match (a, b) {
            (0, _) | (_, 0) => 0,
            (1, x) | (x, 1) => x,
            (2, 2) => 3,
            (2, 3) | (3, 2) => 1,
            (3, 3) => 2,
            _ => unreachable!(),
        }
    };
    let mul: Vec<usize> = (0..4).flat_map(|i| (0..4).map(move |j| mul_of(i, j))).collect();
    let neg = vec![0, 1, 2, 3];
    let alg = Arc::new(
        FiniteAlgebra::from_usize_tables("f4", 4, ring_signature(), vec![add, neg, vec![0], mul, vec![1]])
            .expect("field tables are valid"),
    );
    debug_assert!(is_ring(&alg));
    alg
}

pub fn direct_product_ring(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Arc<FiniteAlgebra> {
    let alg = Arc::new(FiniteAlgebra::direct_product(a, b).expect("ring signatures match"));
    debug_assert!(is_ring(&alg));
    alg
}

/// Reflection onto Boolean rings: quotient by the congruence generated by
/// `{(a^2, a) : a}`. The output satisfies `a^2 = a` everywhere.
pub fn boolean_reflection(
    ring: &Arc<FiniteAlgebra>,
) -> Result<(Arc<FiniteAlgebra>, Homomorphism), AlgebraError> {
    if !is_ring(ring) {
        return Err(AlgebraError::Invalid(Default::default()));
    }
    let pairs: Vec<(usize, usize)> =
        (0..ring.size()).map(|a| (ring.apply2(RING_MUL, a, a), a)).collect();
    let theta = congruence_generated(ring, &pairs)?;
    let (q, unit) = quotient_by_congruence(ring, &theta)?;
    debug_assert!(is_boolean_ring(&q));
    Ok((q, unit))
}

/// Whether every element is multiplicatively idempotent.
pub fn is_boolean_ring(alg: &FiniteAlgebra) -> bool {
    is_ring(alg) && (0..alg.size()).all(|a| alg.apply2(RING_MUL, a, a) == a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::is_isomorphic;

    #[test]
    fn explicit_tables_build_a_ring() {
        let k = 3usize;
        let add: Vec<usize> = (0..k).flat_map(|i| (0..k).map(move |j| (i + j) % k)).collect();
        let mul: Vec<usize> = (0..k).flat_map(|i| (0..k).map(move |j| (i * j) % k)).collect();
        let r = ring_from_tables("explicit_z3", add, mul).unwrap();
        assert!(is_ring(&r));
        // A broken multiplication table is rejected.
        let add: Vec<usize> = (0..k).flat_map(|i| (0..k).map(move |j| (i + j) % k)).collect();
        let mut bad = add.clone();
        bad[4] = 0;
        assert!(ring_from_tables("broken", add, bad).is_err());
    }

    #[test]
    fn builders_pass_the_axiom_check() {
        for r in [cyclic_ring(1), cyclic_ring(12), field_four(),
                  direct_product_ring(&cyclic_ring(2), &cyclic_ring(2))] {
            assert!(is_ring(&r), "axioms fail for {}", r.name());
        }
    }

    #[test]
    fn z2_is_already_boolean() {
        let r = cyclic_ring(2);
        let (q, unit) = boolean_reflection(&r).unwrap();
        assert!(unit.is_bijective());
        assert!(is_isomorphic(&q, &r).unwrap());
    }

    #[test]
    fn boolean_reflection_of_z6_is_z2() {
        let r = cyclic_ring(6);
        let (q, unit) = boolean_reflection(&r).unwrap();
        assert_eq!(q.size(), 2);
        assert!(unit.is_surjective());
        // The collapsing ideal is {0, 2, 4}.
        assert_eq!(
            (0..6).filter(|&x| unit.apply(x) == unit.apply(0)).collect::<Vec<_>>(),
            vec![0, 2, 4]
        );
    }

    #[test]
    fn boolean_reflection_of_z4_is_z2() {
        let r = cyclic_ring(4);
        let (q, unit) = boolean_reflection(&r).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(
            (0..4).filter(|&x| unit.apply(x) == unit.apply(0)).collect::<Vec<_>>(),
            vec![0, 2]
        );
    }

    #[test]
    fn f4_reflects_onto_the_trivial_ring() {
        // GF(4) is simple and not Boolean, so its only Boolean quotient is 0.
        let (q, _) = boolean_reflection(&field_four()).unwrap();
        assert_eq!(q.size(), 1);
    }
}
