//! Congruences: compatible partitions of a carrier. Houses the kernel-pair
//! construction, quotient algebras, the congruence-generation closure engine
//! and relation composition / permutability tests.

use std::sync::Arc;

use crate::algebra::{same_algebra, AlgebraError, FiniteAlgebra};
use crate::hom::Homomorphism;

/// Union-find with path halving and union by rank.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    #[inline]
    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = self.parent[x as usize];
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] { (ra, rb) } else { (rb, ra) };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
        true
    }

    /// Canonical block assignment: block ids in order of first occurrence.
    pub(crate) fn canonical_blocks(&mut self) -> (Vec<u32>, usize) {
        let n = self.parent.len();
        let mut block_of_root = vec![u32::MAX; n];
        let mut blocks = vec![0u32; n];
        let mut next = 0u32;
        for x in 0..n as u32 {
            let r = self.find(x);
            if block_of_root[r as usize] == u32::MAX {
                block_of_root[r as usize] = next;
                next += 1;
            }
            blocks[x as usize] = block_of_root[r as usize];
        }
        (blocks, next as usize)
    }
}

/// A binary relation on `0..size`, stored as a bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryRelation {
    size: usize,
    bits: Vec<u64>,
}

impl BinaryRelation {
    pub fn empty(size: usize) -> Self {
        let words = (size * size).div_ceil(64);
        BinaryRelation { size, bits: vec![0; words] }
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rel = Self::empty(size);
        for (x, y) in pairs {
            rel.insert(x, y);
        }
        rel
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn insert(&mut self, x: usize, y: usize) {
        let i = x * self.size + y;
        self.bits[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        let i = x * self.size + y;
        self.bits[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size {
            for y in 0..self.size {
                if self.contains(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).all(|y| !self.contains(x, y) || self.contains(y, x)))
    }

    pub fn is_transitive(&self) -> bool {
        for x in 0..self.size {
            for y in 0..self.size {
                if !self.contains(x, y) {
                    continue;
                }
                for z in 0..self.size {
                    if self.contains(y, z) && !self.contains(x, z) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A partition of a carrier into blocks. Block ids are canonical (numbered by
/// first occurrence), so two congruences on the same algebra are equal iff
/// their `blocks` vectors are. Compatibility with the operations is a
/// testable property, not a construction invariant; the generation and
/// quotient entry points are the ones that guarantee it.
#[derive(Clone, Debug)]
pub struct Congruence {
    algebra: Arc<FiniteAlgebra>,
    blocks: Vec<u32>,
    num_blocks: usize,
}

impl PartialEq for Congruence {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Eq for Congruence {}

impl Congruence {
    /// Wraps a block assignment, canonicalizing block ids.
    pub fn from_assignment(
        algebra: Arc<FiniteAlgebra>,
        assignment: &[usize],
    ) -> Result<Self, AlgebraError> {
        if assignment.len() != algebra.size() {
            return Err(AlgebraError::MapLength {
                expected: algebra.size(),
                actual: assignment.len(),
            });
        }
        let mut canon: Vec<u32> = vec![u32::MAX; assignment.len()];
        let mut seen: Vec<(usize, u32)> = Vec::new();
        let mut next = 0u32;
        for (i, &b) in assignment.iter().enumerate() {
            let id = match seen.iter().find(|(orig, _)| *orig == b) {
                Some(&(_, id)) => id,
                None => {
                    let id = next;
                    seen.push((b, id));
                    next += 1;
                    id
                }
            };
            canon[i] = id;
        }
        Ok(Congruence { algebra, blocks: canon, num_blocks: next as usize })
    }

    /// Builds from explicit element blocks; every element must appear exactly once.
    pub fn from_blocks(
        algebra: Arc<FiniteAlgebra>,
        blocks: &[Vec<usize>],
    ) -> Result<Self, AlgebraError> {
        let n = algebra.size();
        let mut assignment = vec![usize::MAX; n];
        for (id, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n {
                    return Err(AlgebraError::PairOutOfRange { pair: (x, x), size: n });
                }
                if assignment[x] != usize::MAX {
                    return Err(AlgebraError::PairOutOfRange { pair: (x, x), size: n });
                }
                assignment[x] = id;
            }
        }
        if assignment.contains(&usize::MAX) {
            return Err(AlgebraError::MapLength { expected: n, actual: blocks.iter().map(|b| b.len()).sum() });
        }
        Self::from_assignment(algebra, &assignment)
    }

    /// The diagonal Δ: all singletons.
    pub fn diagonal(algebra: Arc<FiniteAlgebra>) -> Self {
        let n = algebra.size();
        Congruence { algebra, blocks: (0..n as u32).collect(), num_blocks: n }
    }

    /// The total congruence ∇: one block.
    pub fn total(algebra: Arc<FiniteAlgebra>) -> Self {
        let n = algebra.size();
        Congruence { algebra, blocks: vec![0; n], num_blocks: 1 }
    }

    /// Equivalence closure of a pair set: a partition, with no compatibility
    /// closure applied. The result need not be a congruence.
    pub fn equivalence_generated(
        algebra: Arc<FiniteAlgebra>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, AlgebraError> {
        let n = algebra.size();
        let mut uf = UnionFind::new(n);
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(AlgebraError::PairOutOfRange { pair: (x, y), size: n });
            }
            uf.union(x as u32, y as u32);
        }
        let (blocks, num_blocks) = uf.canonical_blocks();
        Ok(Congruence { algebra, blocks, num_blocks })
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    #[inline]
    pub fn block_of(&self, x: usize) -> usize {
        self.blocks[x] as usize
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.blocks[x] == self.blocks[y]
    }

    pub fn block_assignment(&self) -> &[u32] {
        &self.blocks
    }

    /// Blocks as sorted element lists, ordered by block id.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks];
        for (x, &b) in self.blocks.iter().enumerate() {
            out[b as usize].push(x);
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.num_blocks == self.algebra.size()
    }

    pub fn is_total(&self) -> bool {
        self.num_blocks <= 1
    }

    /// All related pairs, including the diagonal.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.algebra.size();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.related(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn as_relation(&self) -> BinaryRelation {
        BinaryRelation::from_pairs(self.algebra.size(), self.pairs())
    }

    /// Blockwise refinement: self ⊆ other.
    pub fn refines(&self, other: &Congruence) -> bool {
        let n = self.algebra.size();
        // self ⊆ other iff each self-block sits inside one other-block.
        let mut rep: Vec<Option<u32>> = vec![None; self.num_blocks];
        for x in 0..n {
            let b = self.blocks[x] as usize;
            match rep[b] {
                None => rep[b] = Some(other.blocks[x]),
                Some(r) => {
                    if r != other.blocks[x] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Meet (intersection) of two congruences on the same algebra.
    pub fn meet(&self, other: &Congruence) -> Result<Congruence, AlgebraError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let n = self.algebra.size();
        let assignment: Vec<usize> = (0..n)
            .map(|x| self.block_of(x) * other.num_blocks + other.block_of(x))
            .collect();
        Congruence::from_assignment(self.algebra.clone(), &assignment)
    }

    /// Join: the transitive closure of the union. The closure of a union of
    /// congruences is already compatible, so no translation sweeps are needed.
    pub fn join(&self, other: &Congruence) -> Result<Congruence, AlgebraError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let n = self.algebra.size();
        let mut uf = UnionFind::new(n);
        for x in 0..n as u32 {
            for y in (x + 1)..n as u32 {
                if self.related(x as usize, y as usize) || other.related(x as usize, y as usize) {
                    uf.union(x, y);
                }
            }
        }
        let (blocks, num_blocks) = uf.canonical_blocks();
        Ok(Congruence { algebra: self.algebra.clone(), blocks, num_blocks })
    }

    /// Checks compatibility with every operation; returns the first violating
    /// operation and witness pair when incompatible.
    pub fn compatibility_violation(&self) -> Option<CompatibilityViolation> {
        induced_tables(&self.algebra, &self.blocks, self.num_blocks).err()
    }

    pub fn is_compatible(&self) -> bool {
        self.compatibility_violation().is_none()
    }
}

/// A violated operation together with a witness pair of carrier elements.
type CompatibilityViolation = (String, (usize, usize));

/// Attempts to build the quotient tables for a block assignment. Fails with
/// the violating operation and a witness pair of carrier elements whose
/// images disagree.
fn induced_tables(
    alg: &FiniteAlgebra,
    blocks: &[u32],
    num_blocks: usize,
) -> Result<Vec<Vec<u32>>, CompatibilityViolation> {
    let n = alg.size();
    let mut tables = Vec::with_capacity(alg.signature().len());
    for (op, sym) in alg.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let count = n.pow(k as u32);
        let q_count = num_blocks.pow(k as u32);
        let mut table = vec![u32::MAX; q_count];
        // Remember which carrier output first set each quotient cell, to
        // report a concrete witness on conflict.
        let mut first = vec![0u32; q_count];
        let mut tuple = vec![0usize; k];
        for idx in 0..count {
            let mut rest = idx;
            for pos in (0..k).rev() {
                tuple[pos] = rest % n;
                rest /= n;
            }
            let mut q_idx = 0usize;
            for &t in &tuple {
                q_idx = q_idx * num_blocks + blocks[t] as usize;
            }
            let out = alg.apply(op, &tuple);
            let out_block = blocks[out];
            if table[q_idx] == u32::MAX {
                table[q_idx] = out_block;
                first[q_idx] = out as u32;
            } else if table[q_idx] != out_block {
                return Err((sym.name.clone(), (first[q_idx] as usize, out)));
            }
        }
        tables.push(table);
    }
    Ok(tables)
}

/// The congruence whose blocks are the fibers of `f`.
pub fn kernel_pair(f: &Homomorphism) -> Congruence {
    let assignment: Vec<usize> = f.map().iter().map(|&v| v as usize).collect();
    Congruence::from_assignment(f.source().clone(), &assignment)
        .expect("fiber assignment has the right length")
}

/// Quotient by a compatible partition: one element per block, induced tables,
/// and the surjective projection. `kernel_pair(projection)` recovers the input.
pub fn quotient_by_congruence(
    alg: &Arc<FiniteAlgebra>,
    theta: &Congruence,
) -> Result<(Arc<FiniteAlgebra>, Homomorphism), AlgebraError> {
    if !same_algebra(alg, theta.algebra()) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    if !alg.is_materialized() {
        // The compatibility scan would walk the full virtual table; callers
        // with known-compatible partitions use the representatives path.
        return Err(AlgebraError::SizeGuard { size: alg.size(), bound: 0, what: "checked quotient" });
    }
    let tables = induced_tables(alg, theta.block_assignment(), theta.num_blocks())
        .map_err(|(op, witness)| AlgebraError::Incompatible { op, witness })?;
    let q = Arc::new(FiniteAlgebra::new(
        &format!("{}/~", alg.name()),
        theta.num_blocks(),
        alg.signature().clone(),
        tables,
    )?);
    let projection = Homomorphism::new(
        alg.clone(),
        q.clone(),
        theta.block_assignment().iter().map(|&b| b as usize).collect(),
    )?;
    Ok((q, projection))
}

/// Least compatible partition containing `pairs`: union-find merges, closed
/// under all one-position translations of the basic operations until
/// fixpoint. For each processed merge the varying position ranges over the
/// merged pair and the remaining positions over all carrier elements.
pub fn congruence_generated(
    alg: &Arc<FiniteAlgebra>,
    pairs: &[(usize, usize)],
) -> Result<Congruence, AlgebraError> {
    let n = alg.size();
    if !alg.is_materialized() {
        return Err(AlgebraError::SizeGuard { size: n, bound: 0, what: "congruence generation" });
    }
    for &(x, y) in pairs {
        if x >= n || y >= n {
            return Err(AlgebraError::PairOutOfRange { pair: (x, y), size: n });
        }
    }
    // Worst-case translation work per merge; merges are bounded by n.
    let per_event: usize = alg
        .signature()
        .ops()
        .iter()
        .map(|sym| match sym.arity {
            0 => 0,
            k => k * n.pow((k - 1) as u32),
        })
        .sum();
    if (per_event as u128) * (n as u128) > 6_000_000_000 {
        return Err(AlgebraError::SizeGuard {
            size: n,
            bound: 0,
            what: "congruence generation",
        });
    }

    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(u32, u32)> = Vec::new();
    for &(x, y) in pairs {
        queue.push((x as u32, y as u32));
    }
    let binary_ops: Vec<usize> = alg
        .signature()
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.arity == 2)
        .map(|(i, _)| i)
        .collect();
    let unary_ops: Vec<usize> = alg
        .signature()
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.arity == 1)
        .map(|(i, _)| i)
        .collect();
    let big_ops: Vec<(usize, usize)> = alg
        .signature()
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.arity >= 3)
        .map(|(i, s)| (i, s.arity))
        .collect();

    while let Some((a, b)) = queue.pop() {
        if !uf.union(a, b) {
            continue;
        }
        let (u, v) = (a as usize, b as usize);
        for &op in &unary_ops {
            let x = alg.apply1(op, u) as u32;
            let y = alg.apply1(op, v) as u32;
            if uf.find(x) != uf.find(y) {
                queue.push((x, y));
            }
        }
        for &op in &binary_ops {
            let table = alg.table(op);
            let row_u = &table[u * n..(u + 1) * n];
            let row_v = &table[v * n..(v + 1) * n];
            for w in 0..n {
                let x = row_u[w];
                let y = row_v[w];
                if x != y && uf.find(x) != uf.find(y) {
                    queue.push((x, y));
                }
                let x = table[w * n + u];
                let y = table[w * n + v];
                if x != y && uf.find(x) != uf.find(y) {
                    queue.push((x, y));
                }
            }
        }
        for &(op, k) in &big_ops {
            // Vary one position over (u, v), every other over all elements.
            let others = n.pow((k - 1) as u32);
            let mut tuple = vec![0usize; k];
            for pos in 0..k {
                for rest_idx in 0..others {
                    let mut rest = rest_idx;
                    for p in (0..k).rev() {
                        if p == pos {
                            continue;
                        }
                        tuple[p] = rest % n;
                        rest /= n;
                    }
                    tuple[pos] = u;
                    let x = alg.apply(op, &tuple) as u32;
                    tuple[pos] = v;
                    let y = alg.apply(op, &tuple) as u32;
                    if uf_differs(&mut uf, x, y) {
                        queue.push((x, y));
                    }
                }
            }
        }
    }
    let (blocks, num_blocks) = uf.canonical_blocks();
    Ok(Congruence { algebra: alg.clone(), blocks, num_blocks })
}

#[inline]
fn uf_differs(uf: &mut UnionFind, x: u32, y: u32) -> bool {
    x != y && uf.find(x) != uf.find(y)
}

/// Quotient through block representatives, without rescanning the full
/// tables: sound only for a partition already known to be compatible (coset
/// partitions, generated congruences). Used where the source algebra is too
/// large for the checked path.
pub(crate) fn quotient_via_representatives(
    alg: &Arc<FiniteAlgebra>,
    theta: &Congruence,
) -> Result<(Arc<FiniteAlgebra>, Homomorphism), AlgebraError> {
    if !same_algebra(alg, theta.algebra()) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let nb = theta.num_blocks();
    let mut reps = vec![usize::MAX; nb];
    for x in 0..alg.size() {
        let b = theta.block_of(x);
        if reps[b] == usize::MAX {
            reps[b] = x;
        }
    }
    let mut tables = Vec::with_capacity(alg.signature().len());
    for (op, sym) in alg.signature().ops().iter().enumerate() {
        let k = sym.arity;
        let count = nb.pow(k as u32);
        let mut table = vec![0u32; count];
        let mut tuple = vec![0usize; k];
        for (idx, cell) in table.iter_mut().enumerate() {
            let mut rest = idx;
            for pos in (0..k).rev() {
                tuple[pos] = reps[rest % nb];
                rest /= nb;
            }
            *cell = theta.block_of(alg.apply(op, &tuple)) as u32;
        }
        tables.push(table);
    }
    let q = Arc::new(FiniteAlgebra::new(
        &format!("{}/~", alg.name()),
        nb,
        alg.signature().clone(),
        tables,
    )?);
    let projection = Homomorphism::new(
        alg.clone(),
        q.clone(),
        theta.block_assignment().iter().map(|&b| b as usize).collect(),
    )?;
    Ok((q, projection))
}

/// Relational composite `{(x, z) : ∃y, x R y and y S z}`.
pub fn relation_compose(r: &Congruence, s: &Congruence) -> Result<BinaryRelation, AlgebraError> {
    if !same_algebra(r.algebra(), s.algebra()) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let n = r.algebra().size();
    let mut rel = BinaryRelation::empty(n);
    // x R y iff same r-block; y S z iff same s-block. For each y, relate all
    // of y's r-block to all of y's s-block.
    let mut r_blocks = vec![Vec::new(); r.num_blocks()];
    let mut s_blocks = vec![Vec::new(); s.num_blocks()];
    for x in 0..n {
        r_blocks[r.block_of(x)].push(x);
        s_blocks[s.block_of(x)].push(x);
    }
    let mut seen = vec![false; r.num_blocks() * s.num_blocks()];
    for y in 0..n {
        let key = r.block_of(y) * s.num_blocks() + s.block_of(y);
        if seen[key] {
            continue;
        }
        seen[key] = true;
        for &x in &r_blocks[r.block_of(y)] {
            for &z in &s_blocks[s.block_of(y)] {
                rel.insert(x, z);
            }
        }
    }
    Ok(rel)
}

/// Permutability `R∘S = S∘R` of a pair of congruences.
pub fn are_permutable(r: &Congruence, s: &Congruence) -> Result<bool, AlgebraError> {
    Ok(relation_compose(r, s)? == relation_compose(s, r)?)
}

/// All partitions of `0..n` as restricted-growth strings, in lexicographic
/// order. Bell-number sized; callers guard `n`.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(current: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        let n = current.len();
        if pos == n {
            out.push(current.clone());
            return;
        }
        for b in 0..=max_used + 1 {
            current[pos] = b;
            rec(current, pos + 1, max_used.max(b), out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    current[0] = 0;
    rec(&mut current, 1, 0, &mut out);
    out
}

/// Enumerates every congruence by filtering all partitions for
/// compatibility. Refuses carriers above `bound`.
pub fn all_congruences(
    alg: &Arc<FiniteAlgebra>,
    bound: usize,
) -> Result<Vec<Congruence>, AlgebraError> {
    let n = alg.size();
    if n > bound {
        return Err(AlgebraError::SizeGuard { size: n, bound, what: "congruence enumeration" });
    }
    let mut out = Vec::new();
    for partition in all_partitions(n) {
        let cong = Congruence::from_assignment(alg.clone(), &partition)?;
        if cong.is_compatible() {
            out.push(cong);
        }
    }
    Ok(out)
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
                mul.push((i + j) % k);
            }
        }
        let inv = (0..k).map(|i| (k - i) % k).collect();
        Arc::new(FiniteAlgebra::from_usize_tables(name, k, sig, vec![mul, inv, vec![0]]).unwrap())
    }

    /// Meet-semilattice on the chain 0 < 1 < 2.
    fn chain3() -> Arc<FiniteAlgebra> {
        let sig = Arc::new(Signature::new(vec![OpSymbol::new("meet", 2)]));
        let mut table = Vec::new();
        for i in 0..3usize {
            for j in 0..3usize {
                table.push(i.min(j));
            }
        }
        Arc::new(FiniteAlgebra::from_usize_tables("chain3", 3, sig, vec![table]).unwrap())
    }

    #[test]
    fn kernel_pair_of_identity_is_diagonal() {
        let z4 = cyclic("z4", 4);
        let id = Homomorphism::identity(&z4);
        assert!(kernel_pair(&id).is_diagonal());
    }

    #[test]
    fn kernel_pair_of_mod_two_is_the_parity_partition() {
        let z4 = cyclic("z4", 4);
        let z2 = cyclic("z2", 2);
        let f = Homomorphism::new(z4.clone(), z2, vec![0, 1, 0, 1]).unwrap();
        let theta = kernel_pair(&f);
        assert_eq!(theta, Congruence::from_blocks(z4, &[vec![0, 2], vec![1, 3]]).unwrap());
    }

    #[test]
    fn kernel_pair_to_terminal_is_total() {
        let z4 = cyclic("z4", 4);
        let f = Homomorphism::to_terminal(&z4);
        assert!(kernel_pair(&f).is_total());
    }

    #[test]
    fn quotient_by_diagonal_is_isomorphic_copy() {
        let z4 = cyclic("z4", 4);
        let (q, proj) = quotient_by_congruence(&z4, &Congruence::diagonal(z4.clone())).unwrap();
        assert_eq!(q.size(), 4);
        assert!(proj.is_bijective());
        assert!(crate::hom::is_isomorphic(&z4, &q).unwrap());
    }

    #[test]
    fn quotient_by_total_is_the_one_element_algebra() {
        let z4 = cyclic("z4", 4);
        let (q, proj) = quotient_by_congruence(&z4, &Congruence::total(z4.clone())).unwrap();
        assert_eq!(q.size(), 1);
        assert!(proj.is_surjective());
    }

    #[test]
    fn quotient_of_z4_by_parity_is_z2() {
        let z4 = cyclic("z4", 4);
        let theta = Congruence::from_blocks(z4.clone(), &[vec![0, 2], vec![1, 3]]).unwrap();
        let (q, proj) = quotient_by_congruence(&z4, &theta).unwrap();
        assert_eq!(q.size(), 2);
        assert!(crate::hom::is_isomorphic(&q, &cyclic("z2", 2)).unwrap());
        assert_eq!(kernel_pair(&proj), theta);
    }

    #[test]
    fn incompatible_partition_is_rejected_with_witness() {
        let z4 = cyclic("z4", 4);
        let theta = Congruence::from_blocks(z4.clone(), &[vec![0, 1], vec![2], vec![3]]).unwrap();
        let err = quotient_by_congruence(&z4, &theta).unwrap_err();
        assert!(matches!(err, AlgebraError::Incompatible { .. }));
    }

    #[test]
    fn generated_by_nothing_is_diagonal() {
        let z4 = cyclic("z4", 4);
        assert!(congruence_generated(&z4, &[]).unwrap().is_diagonal());
    }

    #[test]
    fn generated_by_zero_one_on_z4_is_total() {
        let z4 = cyclic("z4", 4);
        assert!(congruence_generated(&z4, &[(0, 1)]).unwrap().is_total());
    }

    #[test]
    fn generated_by_zero_two_on_z4_is_parity() {
        let z4 = cyclic("z4", 4);
        let theta = congruence_generated(&z4, &[(0, 2)]).unwrap();
        assert_eq!(theta, Congruence::from_blocks(z4, &[vec![0, 2], vec![1, 3]]).unwrap());
    }

    #[test]
    fn compose_with_diagonal_is_identity_on_the_relation() {
        let z4 = cyclic("z4", 4);
        let r = Congruence::from_blocks(z4.clone(), &[vec![0, 2], vec![1, 3]]).unwrap();
        let delta = Congruence::diagonal(z4);
        let composed = relation_compose(&r, &delta).unwrap();
        assert_eq!(composed, r.as_relation());
    }

    #[test]
    fn factor_congruences_of_klein_four_compose_to_total() {
        let z2 = cyclic("z2", 2);
        let v4 = Arc::new(FiniteAlgebra::direct_product(&z2, &z2).unwrap());
        // Fibers of the two projections: element (a, b) = index a*2+b.
        let r = Congruence::from_blocks(v4.clone(), &[vec![0, 1], vec![2, 3]]).unwrap();
        let s = Congruence::from_blocks(v4.clone(), &[vec![0, 2], vec![1, 3]]).unwrap();
        let rs = relation_compose(&r, &s).unwrap();
        let sr = relation_compose(&s, &r).unwrap();
        let total = Congruence::total(v4).as_relation();
        assert_eq!(rs, total);
        assert_eq!(sr, total);
    }

    #[test]
    fn chain_semilattice_congruences_do_not_permute() {
        let alg = chain3();
        let t1 = Congruence::from_blocks(alg.clone(), &[vec![0, 1], vec![2]]).unwrap();
        let t2 = Congruence::from_blocks(alg.clone(), &[vec![0], vec![1, 2]]).unwrap();
        assert!(t1.is_compatible());
        assert!(t2.is_compatible());
        assert!(!are_permutable(&t1, &t2).unwrap());
        // (0, 2) is reachable via 1 in one order only.
        let t1t2 = relation_compose(&t1, &t2).unwrap();
        let t2t1 = relation_compose(&t2, &t1).unwrap();
        assert!(t1t2.contains(0, 2));
        assert!(!t2t1.contains(0, 2));
    }

    #[test]
    fn any_congruence_permutes_with_diagonal() {
        let z4 = cyclic("z4", 4);
        let r = Congruence::from_blocks(z4.clone(), &[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(are_permutable(&r, &Congruence::diagonal(z4)).unwrap());
    }

    #[test]
    fn partition_count_is_the_bell_number() {
        assert_eq!(all_partitions(4).len(), 15);
        assert_eq!(all_partitions(5).len(), 52);
    }

    #[test]
    fn z4_has_three_congruences() {
        let z4 = cyclic("z4", 4);
        let congs = all_congruences(&z4, 10).unwrap();
        assert_eq!(congs.len(), 3);
    }

    #[test]
    fn join_and_meet_behave_on_klein_four() {
        let z2 = cyclic("z2", 2);
        let v4 = Arc::new(FiniteAlgebra::direct_product(&z2, &z2).unwrap());
        let r = Congruence::from_blocks(v4.clone(), &[vec![0, 1], vec![2, 3]]).unwrap();
        let s = Congruence::from_blocks(v4.clone(), &[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(r.meet(&s).unwrap().is_diagonal());
        assert!(r.join(&s).unwrap().is_total());
        assert!(r.meet(&s).unwrap().refines(&r));
        assert!(r.refines(&r.join(&s).unwrap()));
    }
}
