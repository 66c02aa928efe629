//! Homomorphisms between finite algebras, with exhaustive preservation
//! checks. Surjective homomorphisms form the extension class over which the
//! covering hierarchy is built; surjectivity is a derived predicate here,
//! never an invariant.

use std::sync::Arc;

use crate::algebra::{same_algebra, AlgebraError, FiniteAlgebra};

/// A map between carriers; shape (length, range, shared signature) is checked
/// at construction, the homomorphism property by [`check_homomorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    map: Vec<u32>,
}

impl Homomorphism {
    pub fn new(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        map: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        if source.signature() != target.signature() {
            return Err(AlgebraError::SignatureMismatch);
        }
        if map.len() != source.size() {
            return Err(AlgebraError::MapLength { expected: source.size(), actual: map.len() });
        }
        for (position, &value) in map.iter().enumerate() {
            if value >= target.size() {
                return Err(AlgebraError::MapValueOutOfRange {
                    position,
                    value,
                    size: target.size(),
                });
            }
        }
        Ok(Homomorphism { source, target, map: map.into_iter().map(|x| x as u32).collect() })
    }

    pub fn identity(alg: &Arc<FiniteAlgebra>) -> Self {
        Homomorphism {
            source: alg.clone(),
            target: alg.clone(),
            map: (0..alg.size() as u32).collect(),
        }
    }

    /// The unique map to the one-element algebra over the same signature.
    pub fn to_terminal(alg: &Arc<FiniteAlgebra>) -> Self {
        let one = FiniteAlgebra::terminal(alg.signature().clone());
        Homomorphism { source: alg.clone(), target: one, map: vec![0; alg.size()] }
    }

    pub fn source(&self) -> &Arc<FiniteAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    /// `other ∘ self`, defined when targets and sources line up.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism, AlgebraError> {
        if !same_algebra(&self.target, &other.source) {
            return Err(AlgebraError::TargetMismatch);
        }
        Ok(Homomorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&x| other.map[x as usize]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &v in &self.map {
            hit[v as usize] = true;
        }
        hit.iter().all(|&h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &v in &self.map {
            if hit[v as usize] {
                return false;
            }
            hit[v as usize] = true;
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<Homomorphism, AlgebraError> {
        if !self.is_bijective() {
            return Err(AlgebraError::NotSurjective);
        }
        let mut inv = vec![0u32; self.target.size()];
        for (x, &v) in self.map.iter().enumerate() {
            inv[v as usize] = x as u32;
        }
        Ok(Homomorphism { source: self.target.clone(), target: self.source.clone(), map: inv })
    }

    /// Image of the whole source, as a sorted element subset of the target.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.target.size()];
        for &v in &self.map {
            hit[v as usize] = true;
        }
        (0..self.target.size()).filter(|&i| hit[i]).collect()
    }
}

/// Exhaustively checks that `f` preserves every operation on every tuple.
pub fn check_homomorphism(f: &Homomorphism) -> Result<bool, AlgebraError> {
    let src = f.source();
    let tgt = f.target();
    if src.signature() != tgt.signature() {
        return Err(AlgebraError::SignatureMismatch);
    }
    let n = src.size();
    for (op, sym) in src.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let count = n.pow(k as u32);
        let mut tuple = vec![0usize; k];
        let mut imgs = vec![0usize; k];
        for idx in 0..count {
            let mut rest = idx;
            for pos in (0..k).rev() {
                tuple[pos] = rest % n;
                rest /= n;
            }
            for pos in 0..k {
                imgs[pos] = f.apply(tuple[pos]);
            }
            if f.apply(src.apply(op, &tuple)) != tgt.apply(op, &imgs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Enumerates every homomorphism `a -> b` by backtracking with closure
/// propagation: constants are forced first, and whenever all inputs of a
/// tuple are decided the output is derived rather than guessed. Output order
/// is deterministic (lexicographic in assignment order).
pub fn all_homomorphisms(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
) -> Result<Vec<Homomorphism>, AlgebraError> {
    if a.signature() != b.signature() {
        return Err(AlgebraError::SignatureMismatch);
    }
    let mut found = Vec::new();
    let mut partial: Vec<Option<u32>> = vec![None; a.size()];
    let mut searcher = HomSearch { a, b, constraint: None, bijective: false };
    searcher.seed_constants(&mut partial).map(|ok| {
        if ok {
            searcher.extend(&mut partial, &mut |map| {
                found.push(Homomorphism {
                    source: a.clone(),
                    target: b.clone(),
                    map: map.to_vec(),
                });
            });
        }
    })?;
    Ok(found)
}

/// Finds one isomorphism `a -> b`, or `None`. Backtracking over bijections
/// pruned by the operation tables; cheap at desk scale.
pub fn find_isomorphism(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
) -> Result<Option<Homomorphism>, AlgebraError> {
    if a.signature() != b.signature() {
        return Err(AlgebraError::SignatureMismatch);
    }
    if a.size() != b.size() {
        return Ok(None);
    }
    let mut result = None;
    let mut partial: Vec<Option<u32>> = vec![None; a.size()];
    let mut searcher = HomSearch { a, b, constraint: None, bijective: true };
    if searcher.seed_constants(&mut partial)? {
        searcher.extend_until(&mut partial, &mut |map| {
            result = Some(Homomorphism {
                source: a.clone(),
                target: b.clone(),
                map: map.to_vec(),
            });
            true
        });
    }
    Ok(result)
}

pub fn is_isomorphic(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Result<bool, AlgebraError> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// Finds an isomorphism `phi` with `g ∘ phi = f`, witnessing that two arrows
/// into the same base are the same object of the slice. Synthetic carriers
/// make on-the-nose equality meaningless, so comparisons go through this.
pub fn find_isomorphism_over_base(
    f: &Homomorphism,
    g: &Homomorphism,
) -> Result<Option<Homomorphism>, AlgebraError> {
    if !same_algebra(f.target(), g.target()) {
        return Err(AlgebraError::TargetMismatch);
    }
    let a = f.source();
    let b = g.source();
    if a.size() != b.size() {
        return Ok(None);
    }
    let constraint: Vec<Vec<u32>> = (0..a.size())
        .map(|x| {
            let fx = f.apply(x);
            (0..b.size() as u32).filter(|&y| g.apply(y as usize) == fx).collect()
        })
        .collect();
    let mut result = None;
    let mut partial: Vec<Option<u32>> = vec![None; a.size()];
    let mut searcher = HomSearch { a, b, constraint: Some(&constraint), bijective: true };
    if searcher.seed_constants(&mut partial)? {
        searcher.extend_until(&mut partial, &mut |map| {
            result = Some(Homomorphism {
                source: a.clone(),
                target: b.clone(),
                map: map.to_vec(),
            });
            true
        });
    }
    Ok(result)
}

struct HomSearch<'a> {
    a: &'a Arc<FiniteAlgebra>,
    b: &'a Arc<FiniteAlgebra>,
    /// Per-source-element allowed target values, if constrained.
    constraint: Option<&'a [Vec<u32>]>,
    bijective: bool,
}

impl<'a> HomSearch<'a> {
    fn allowed(&self, x: usize, v: u32) -> bool {
        match self.constraint {
            Some(c) => c[x].contains(&v),
            None => true,
        }
    }

    /// Forces images of constants. Returns Ok(false) when already contradictory.
    fn seed_constants(&mut self, partial: &mut [Option<u32>]) -> Result<bool, AlgebraError> {
        for (op, sym) in self.a.signature().ops().iter().enumerate() {
            if sym.arity == 0 {
                let src_c = self.a.constant(op);
                let tgt_c = self.b.constant(op) as u32;
                if !self.allowed(src_c, tgt_c) {
                    return Ok(false);
                }
                match partial[src_c] {
                    Some(v) if v != tgt_c => return Ok(false),
                    _ => partial[src_c] = Some(tgt_c),
                }
            }
        }
        Ok(self.propagate(partial).is_some())
    }

    /// Derives forced values until fixpoint; returns the list of cells set,
    /// or None on contradiction (caller must roll back using the list).
    fn propagate(&self, partial: &mut [Option<u32>]) -> Option<Vec<usize>> {
        let n = self.a.size();
        let mut set_cells = Vec::new();
        loop {
            let mut changed = false;
            for (op, sym) in self.a.signature().ops().iter().enumerate() {
                let k = sym.arity;
                if k == 0 {
                    continue;
                }
                let count = n.pow(k as u32);
                let mut tuple = vec![0usize; k];
                let mut imgs = vec![0usize; k];
                'tuples: for idx in 0..count {
                    let mut rest = idx;
                    for pos in (0..k).rev() {
                        tuple[pos] = rest % n;
                        rest /= n;
                    }
                    for pos in 0..k {
                        match partial[tuple[pos]] {
                            Some(v) => imgs[pos] = v as usize,
                            None => continue 'tuples,
                        }
                    }
                    let out = self.a.apply(op, &tuple);
                    let img = self.b.apply(op, &imgs) as u32;
                    match partial[out] {
                        Some(v) => {
                            if v != img {
                                for &c in &set_cells {
                                    partial[c] = None;
                                }
                                return None;
                            }
                        }
                        None => {
                            if !self.allowed(out, img) {
                                for &c in &set_cells {
                                    partial[c] = None;
                                }
                                return None;
                            }
                            partial[out] = Some(img);
                            set_cells.push(out);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return Some(set_cells);
            }
        }
    }

    fn bijective_ok(&self, partial: &[Option<u32>]) -> bool {
        if !self.bijective {
            return true;
        }
        let mut hit = vec![false; self.b.size()];
        for v in partial.iter().flatten() {
            if hit[*v as usize] {
                return false;
            }
            hit[*v as usize] = true;
        }
        true
    }

    fn extend(&mut self, partial: &mut [Option<u32>], emit: &mut dyn FnMut(&[u32])) {
        self.extend_until(partial, &mut |map| {
            emit(map);
            false
        });
    }

    /// Depth-first search; stops early when `emit` returns true.
    fn extend_until(
        &mut self,
        partial: &mut [Option<u32>],
        emit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if !self.bijective_ok(partial) {
            return false;
        }
        let next = partial.iter().position(|v| v.is_none());
        let x = match next {
            None => {
                let map: Vec<u32> = partial.iter().map(|v| v.unwrap()).collect();
                return emit(&map);
            }
            Some(x) => x,
        };
        for v in 0..self.b.size() as u32 {
            if !self.allowed(x, v) {
                continue;
            }
            partial[x] = Some(v);
            if self.bijective_ok(partial) {
                if let Some(set_cells) = self.propagate(partial) {
                    if self.extend_until(partial, emit) {
                        return true;
                    }
                    for c in set_cells {
                        partial[c] = None;
                    }
                }
            }
            partial[x] = None;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{OpSymbol, Signature};

    fn cyclic(name: &str, k: usize) -> Arc<FiniteAlgebra> {
        let sig = Arc::new(Signature::new(vec![
            OpSymbol::new("mul", 2),
            OpSymbol::new("inv", 1),
            OpSymbol::new("e", 0),
        ]));
        let mut mul = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                mul.push(((i + j) % k) as u32);
            }
        }
        let inv = (0..k).map(|i| ((k - i) % k) as u32).collect();
        Arc::new(FiniteAlgebra::new(name, k, sig, vec![mul, inv, vec![0]]).unwrap())
    }

    #[test]
    fn identity_is_a_homomorphism() {
        let z4 = cyclic("z4", 4);
        let id = Homomorphism::identity(&z4);
        assert!(check_homomorphism(&id).unwrap());
    }

    #[test]
    fn mod_two_map_is_a_homomorphism() {
        let z4 = cyclic("z4", 4);
        let z2 = cyclic("z2", 2);
        let f = Homomorphism::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
        assert!(check_homomorphism(&f).unwrap());
        assert!(f.is_surjective());
    }

    #[test]
    fn shift_map_is_not_a_homomorphism() {
        let z3 = cyclic("z3", 3);
        let f = Homomorphism::new(z3.clone(), z3, vec![1, 2, 0]).unwrap();
        assert!(!check_homomorphism(&f).unwrap());
    }

    #[test]
    fn hom_enumeration_finds_all_z4_to_z2() {
        let z4 = cyclic("z4", 4);
        let z2 = cyclic("z2", 2);
        let homs = all_homomorphisms(&z4, &z2).unwrap();
        // x -> 0 and x -> x mod 2.
        assert_eq!(homs.len(), 2);
        for h in &homs {
            assert!(check_homomorphism(h).unwrap());
        }
    }

    #[test]
    fn cyclic_groups_of_distinct_prime_order_are_not_isomorphic() {
        let z2 = cyclic("z2", 2);
        let z3 = cyclic("z3", 3);
        assert!(!is_isomorphic(&z2, &z3).unwrap());
        let other_z3 = cyclic("again", 3);
        assert!(is_isomorphic(&z3, &other_z3).unwrap());
    }

    #[test]
    fn iso_over_base_respects_the_base() {
        let z4 = cyclic("z4", 4);
        let z2 = cyclic("z2", 2);
        let f = Homomorphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let phi = find_isomorphism_over_base(&f, &f).unwrap().unwrap();
        assert!(phi.is_bijective());
        assert_eq!(phi.then(&f).unwrap(), f);
    }
}
