//! Finite (co)limits: pullbacks materialized as pair subalgebras with a
//! stored embedding, coequalizers via congruence generation, and
//! equivalence-relation spans with their kernel-pair construction.

use std::sync::Arc;

use crate::algebra::{same_algebra, AlgebraError, FiniteAlgebra};
use crate::congruence::{congruence_generated, quotient_by_congruence, BinaryRelation};
use crate::hom::Homomorphism;

/// Above this carrier size a pair subalgebra keeps a componentwise view
/// instead of dense tables; the dense table would be quadratically larger
/// than anything read from it.
const MATERIALIZE_LIMIT: usize = 4096;

/// A subalgebra of `a × c`: fresh carrier indices, one per kept pair, with
/// the coordinate projections. The pair list is the stored embedding. Small
/// carriers get dense tables (with a full closure check); large ones stay
/// componentwise views, closure being guaranteed by the constructions that
/// produce them and spot-checked here.
#[derive(Clone, Debug)]
pub struct PairSubalgebra {
    pub algebra: Arc<FiniteAlgebra>,
    pub proj1: Homomorphism,
    pub proj2: Homomorphism,
    pairs: Arc<Vec<(u32, u32)>>,
    /// Dense pair -> carrier index lookup, `u32::MAX` for absent pairs.
    index: Arc<Vec<u32>>,
    right_size: usize,
}

impl PairSubalgebra {
    pub fn new(
        name: &str,
        a: &Arc<FiniteAlgebra>,
        c: &Arc<FiniteAlgebra>,
        pairs: Vec<(u32, u32)>,
    ) -> Result<Self, AlgebraError> {
        if a.signature() != c.signature() {
            return Err(AlgebraError::SignatureMismatch);
        }
        let mut index = vec![u32::MAX; a.size() * c.size()];
        for (i, &(x, y)) in pairs.iter().enumerate() {
            index[x as usize * c.size() + y as usize] = i as u32;
        }
        let n = pairs.len();
        let pairs = Arc::new(pairs);
        let index = Arc::new(index);
        let algebra = if n <= MATERIALIZE_LIMIT {
            let mut tables = Vec::with_capacity(a.signature().len());
            for (op, sym) in a.signature().ops().iter().enumerate() {
                let k = sym.arity;
                let count = n.pow(k as u32);
                let mut table = vec![0u32; count];
                let mut tuple = vec![0usize; k];
                let mut args_a = vec![0usize; k];
                let mut args_c = vec![0usize; k];
                for (idx, cell) in table.iter_mut().enumerate() {
                    let mut rest = idx;
                    for pos in (0..k).rev() {
                        tuple[pos] = rest % n;
                        rest /= n;
                    }
                    for pos in 0..k {
                        let (x, y) = pairs[tuple[pos]];
                        args_a[pos] = x as usize;
                        args_c[pos] = y as usize;
                    }
                    let ra = a.apply(op, &args_a);
                    let rc = c.apply(op, &args_c);
                    let found = index[ra * c.size() + rc];
                    if found == u32::MAX {
                        return Err(AlgebraError::NotClosed { op: sym.name.clone() });
                    }
                    *cell = found;
                }
                tables.push(table);
            }
            Arc::new(FiniteAlgebra::new(name, n, a.signature().clone(), tables)?)
        } else {
            spot_check_closure(a, c, &pairs, &index)?;
            Arc::new(FiniteAlgebra::pair_view(name, a.clone(), c.clone(), pairs.clone(), index.clone()))
        };
        let proj1 = Homomorphism::new(
            algebra.clone(),
            a.clone(),
            pairs.iter().map(|&(x, _)| x as usize).collect(),
        )?;
        let proj2 = Homomorphism::new(
            algebra.clone(),
            c.clone(),
            pairs.iter().map(|&(_, y)| y as usize).collect(),
        )?;
        Ok(PairSubalgebra { algebra, proj1, proj2, pairs, index, right_size: c.size() })
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    #[inline]
    pub fn element_for(&self, x: usize, y: usize) -> Option<usize> {
        let cell = self.index[x * self.right_size + y];
        if cell == u32::MAX {
            None
        } else {
            Some(cell as usize)
        }
    }
}

/// Deterministic sample of binary/unary applications on a pair set too large
/// to close-check exhaustively.
fn spot_check_closure(
    a: &Arc<FiniteAlgebra>,
    c: &Arc<FiniteAlgebra>,
    pairs: &[(u32, u32)],
    index: &[u32],
) -> Result<(), AlgebraError> {
    let n = pairs.len();
    let mut state = 0x853c49e6748fea9bu64;
    for (op, sym) in a.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let mut args_a = vec![0usize; k];
        let mut args_c = vec![0usize; k];
        for _ in 0..512 {
            for pos in 0..k {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let (x, y) = pairs[(state >> 33) as usize % n];
                args_a[pos] = x as usize;
                args_c[pos] = y as usize;
            }
            let ra = a.apply(op, &args_a);
            let rc = c.apply(op, &args_c);
            if index[ra * c.size() + rc] == u32::MAX {
                return Err(AlgebraError::NotClosed { op: sym.name.clone() });
            }
        }
    }
    Ok(())
}

/// The pullback of `f : A -> B` and `g : C -> B`: carrier
/// `{(a, c) : f(a) = g(c)}` with the coordinate projections.
pub fn pullback(f: &Homomorphism, g: &Homomorphism) -> Result<PairSubalgebra, AlgebraError> {
    if !same_algebra(f.target(), g.target()) {
        return Err(AlgebraError::TargetMismatch);
    }
    let a = f.source();
    let c = g.source();
    let mut pairs = Vec::new();
    for x in 0..a.size() {
        let fx = f.apply(x);
        for y in 0..c.size() {
            if g.apply(y) == fx {
                pairs.push((x as u32, y as u32));
            }
        }
    }
    let name = format!("pb({},{})", a.name(), c.name());
    PairSubalgebra::new(&name, a, c, pairs)
}

impl PairSubalgebra {
    /// The induced map `<u, v> : W -> P` for a cone `u : W -> A`, `v : W -> C`
    /// that lands in the pair set. Errors when some image pair is absent,
    /// i.e. when the cone does not commute with the defining legs.
    pub fn tuple(&self, u: &Homomorphism, v: &Homomorphism) -> Result<Homomorphism, AlgebraError> {
        if !same_algebra(u.source(), v.source()) {
            return Err(AlgebraError::SourceMismatch);
        }
        if !same_algebra(u.target(), self.proj1.target()) || !same_algebra(v.target(), self.proj2.target()) {
            return Err(AlgebraError::TargetMismatch);
        }
        let mut map = Vec::with_capacity(u.source().size());
        for w in 0..u.source().size() {
            match self.element_for(u.apply(w), v.apply(w)) {
                Some(p) => map.push(p),
                None => return Err(AlgebraError::NotWellDefined { witness: (u.apply(w), v.apply(w)) }),
            }
        }
        Homomorphism::new(u.source().clone(), self.algebra.clone(), map)
    }

    /// The diagonal `A -> P` when both projections target the same algebra.
    pub fn diagonal(&self) -> Result<Homomorphism, AlgebraError> {
        let a = self.proj1.target();
        let id = Homomorphism::identity(a);
        self.tuple(&id, &id)
    }
}

/// Coequalizer of a parallel pair: the quotient of the target by the
/// congruence generated by `{(u(s), v(s))}`, with its projection.
pub fn coequalizer(
    u: &Homomorphism,
    v: &Homomorphism,
) -> Result<(Arc<FiniteAlgebra>, Homomorphism), AlgebraError> {
    if !same_algebra(u.source(), v.source()) {
        return Err(AlgebraError::SourceMismatch);
    }
    if !same_algebra(u.target(), v.target()) {
        return Err(AlgebraError::TargetMismatch);
    }
    let c = u.target();
    let pairs: Vec<(usize, usize)> =
        (0..u.source().size()).map(|s| (u.apply(s), v.apply(s))).collect();
    let theta = congruence_generated(c, &pairs)?;
    let (q, proj) = quotient_by_congruence(c, &theta)?;
    Ok((q, proj))
}

/// Factors `t : X -> W` through a surjection `e : X -> Q`: the unique
/// `Q -> W` with `factor ∘ e = t`, when `t` is constant on the fibers of `e`.
pub fn factor_through_surjection(
    e: &Homomorphism,
    t: &Homomorphism,
) -> Result<Homomorphism, AlgebraError> {
    if !same_algebra(e.source(), t.source()) {
        return Err(AlgebraError::SourceMismatch);
    }
    if !e.is_surjective() {
        return Err(AlgebraError::NotSurjective);
    }
    let q_size = e.target().size();
    let mut map: Vec<Option<usize>> = vec![None; q_size];
    let mut first: Vec<usize> = vec![0; q_size];
    for x in 0..e.source().size() {
        let q = e.apply(x);
        let val = t.apply(x);
        match map[q] {
            None => {
                map[q] = Some(val);
                first[q] = x;
            }
            Some(v) => {
                if v != val {
                    return Err(AlgebraError::NotWellDefined { witness: (first[q], x) });
                }
            }
        }
    }
    Homomorphism::new(
        e.target().clone(),
        t.target().clone(),
        map.into_iter().map(|v| v.unwrap()).collect(),
    )
}

/// A span of two parallel arrows out of a relation object. Whether the
/// induced binary relation on the base is an equivalence is a testable
/// property, not an invariant.
#[derive(Clone, Debug)]
pub struct RelationSpan {
    pub total: Arc<FiniteAlgebra>,
    pub base: Arc<FiniteAlgebra>,
    pub proj1: Homomorphism,
    pub proj2: Homomorphism,
}

impl RelationSpan {
    pub fn new(proj1: Homomorphism, proj2: Homomorphism) -> Result<Self, AlgebraError> {
        if !same_algebra(proj1.source(), proj2.source()) {
            return Err(AlgebraError::SourceMismatch);
        }
        if !same_algebra(proj1.target(), proj2.target()) {
            return Err(AlgebraError::TargetMismatch);
        }
        Ok(RelationSpan {
            total: proj1.source().clone(),
            base: proj1.target().clone(),
            proj1,
            proj2,
        })
    }

    /// The induced binary relation `{(proj1(s), proj2(s))}` on the base.
    pub fn induced_relation(&self) -> BinaryRelation {
        BinaryRelation::from_pairs(
            self.base.size(),
            (0..self.total.size()).map(|s| (self.proj1.apply(s), self.proj2.apply(s))),
        )
    }

    pub fn is_equivalence_span(&self) -> bool {
        let rel = self.induced_relation();
        rel.is_reflexive() && rel.is_symmetric() && rel.is_transitive()
    }
}

/// The kernel pair of `f` as a materialized span `Eq(f) ⇒ A`: the subalgebra
/// of `A × A` on equal-image pairs with its two projections.
pub fn kernel_pair_span(f: &Homomorphism) -> Result<(PairSubalgebra, RelationSpan), AlgebraError> {
    let pb = pullback(f, f)?;
    let span = RelationSpan::new(pb.proj1.clone(), pb.proj2.clone())?;
    Ok((pb, span))
}
