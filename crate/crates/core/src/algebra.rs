//! Finite algebras: a carrier `0..n` together with total operation tables.
//!
//! Every object the engine manipulates (groups, rings, pullbacks, quotients,
//! user-supplied structures) is a [`FiniteAlgebra`]. Elements are plain
//! indices; constructions that synthesize carriers (pullbacks, quotients)
//! produce fresh index sets, so there is no element naming to keep in sync.

use std::fmt;
use std::sync::Arc;

/// An operation symbol with its arity. Nullary symbols (constants) are legal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: &str, arity: usize) -> Self {
        OpSymbol { name: name.to_string(), arity }
    }
}

/// An ordered list of operation symbols. Two algebras are comparable only
/// when their signatures agree symbol-for-symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(ops: Vec<OpSymbol>) -> Self {
        Signature { ops }
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }
}

/// One invariant violation found by [`validate_algebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Carrier must have at least one element.
    EmptyCarrier,
    /// A table has the wrong number of entries for its arity.
    TableLength { op: String, expected: usize, actual: usize },
    /// A table entry does not name an element of the carrier.
    EntryOutOfRange { op: String, position: usize, entry: usize, size: usize },
    /// Number of tables differs from number of signature symbols.
    TableCount { expected: usize, actual: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyCarrier => write!(f, "carrier is empty"),
            Violation::TableLength { op, expected, actual } => {
                write!(f, "table for `{}` has {} entries, expected {}", op, actual, expected)
            }
            Violation::EntryOutOfRange { op, position, entry, size } => write!(
                f,
                "table for `{}` has entry {} at position {}, out of range for size {}",
                op, entry, position, size
            ),
            Violation::TableCount { expected, actual } => {
                write!(f, "{} tables given for {} operations", actual, expected)
            }
        }
    }
}

/// Outcome of validating a [`FiniteAlgebra`]; empty iff the algebra is well formed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{}", v)?;
            }
            Ok(())
        }
    }
}

/// Errors raised by core constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    /// Construction received an ill-formed algebra.
    Invalid(ValidationReport),
    /// Two algebras were expected to share a signature.
    SignatureMismatch,
    /// A map's length does not match its source carrier.
    MapLength { expected: usize, actual: usize },
    /// A map value does not name a target element.
    MapValueOutOfRange { position: usize, value: usize, size: usize },
    /// Arrows were expected to share a source.
    SourceMismatch,
    /// Arrows were expected to share a target.
    TargetMismatch,
    /// A congruence or relation lives on a different algebra than required.
    AlgebraMismatch,
    /// A partition is not compatible with the operations; carries a witness.
    Incompatible { op: String, witness: (usize, usize) },
    /// A pair set mentions an element outside the carrier.
    PairOutOfRange { pair: (usize, usize), size: usize },
    /// An operation was asked to exceed its configured size guard.
    SizeGuard { size: usize, bound: usize, what: &'static str },
    /// A claimed pair subalgebra is not closed under the operations.
    NotClosed { op: String },
    /// An arrow that had to be surjective was not.
    NotSurjective,
    /// A factorization through a quotient or epi does not exist; witness pair
    /// is identified upstairs but separated downstairs.
    NotWellDefined { witness: (usize, usize) },
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::Invalid(report) => write!(f, "invalid algebra: {}", report),
            AlgebraError::SignatureMismatch => write!(f, "signatures do not match"),
            AlgebraError::MapLength { expected, actual } => {
                write!(f, "map has length {}, expected {}", actual, expected)
            }
            AlgebraError::MapValueOutOfRange { position, value, size } => {
                write!(f, "map value {} at {} out of range for size {}", value, position, size)
            }
            AlgebraError::SourceMismatch => write!(f, "arrows do not share a source"),
            AlgebraError::TargetMismatch => write!(f, "arrows do not share a target"),
            AlgebraError::AlgebraMismatch => write!(f, "values live on different algebras"),
            AlgebraError::Incompatible { op, witness } => write!(
                f,
                "partition is not compatible with `{}` (witness pair ({}, {}))",
                op, witness.0, witness.1
            ),
            AlgebraError::PairOutOfRange { pair, size } => {
                write!(f, "pair ({}, {}) out of range for size {}", pair.0, pair.1, size)
            }
            AlgebraError::SizeGuard { size, bound, what } => {
                write!(f, "{} refused: size {} exceeds bound {}", what, size, bound)
            }
            AlgebraError::NotClosed { op } => {
                write!(f, "pair set is not closed under `{}`", op)
            }
            AlgebraError::NotSurjective => write!(f, "arrow is not surjective"),
            AlgebraError::NotWellDefined { witness } => write!(
                f,
                "no well-defined factorization: elements {} and {} are identified upstairs but separated downstairs",
                witness.0, witness.1
            ),
        }
    }
}

impl std::error::Error for AlgebraError {}

/// Operation storage. Most algebras carry dense row-major tables; large
/// derived pair subalgebras keep a view onto their components instead, with
/// operations computed on demand, since their dense tables would be
/// quadratically larger than anything the engine reads from them.
#[derive(Clone, Debug)]
enum Tables {
    Dense(Vec<Vec<u32>>),
    PairView {
        left: Arc<FiniteAlgebra>,
        right: Arc<FiniteAlgebra>,
        /// Carrier: pairs of component elements.
        pairs: Arc<Vec<(u32, u32)>>,
        /// Dense pair -> index lookup, `u32::MAX` for absent pairs.
        index: Arc<Vec<u32>>,
    },
}

/// A finite algebra: carrier `0..size` and one total operation per signature
/// symbol.
///
/// Dense tables are stored row-major: the entry for arguments
/// `(t_0, .., t_{k-1})` of an arity-`k` operation sits at index
/// `((t_0 * n + t_1) * n + ..)`. The `name` is a label for documents and
/// diagnostics; equality ignores it.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    signature: Arc<Signature>,
    tables: Tables,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        if self.size != other.size || self.signature != other.signature {
            return false;
        }
        match (&self.tables, &other.tables) {
            (Tables::Dense(a), Tables::Dense(b)) => a == b,
            (
                Tables::PairView { left: l1, right: r1, pairs: p1, .. },
                Tables::PairView { left: l2, right: r2, pairs: p2, .. },
            ) => p1 == p2 && l1 == l2 && r1 == r2,
            // Mixed representations: evaluate when cheap, otherwise treat as
            // distinct. Equal content in mixed form does not arise from the
            // engine's own constructions.
            _ => {
                let work: usize = self
                    .signature
                    .ops()
                    .iter()
                    .map(|s| self.size.checked_pow(s.arity as u32).unwrap_or(usize::MAX))
                    .fold(0usize, |a, b| a.saturating_add(b));
                if work > 1 << 24 {
                    return false;
                }
                for (op, sym) in self.signature.ops().iter().enumerate() {
                    let k = sym.arity;
                    let count = self.size.pow(k as u32);
                    let mut tuple = vec![0usize; k];
                    for idx in 0..count {
                        let mut rest = idx;
                        for pos in (0..k).rev() {
                            tuple[pos] = rest % self.size;
                            rest /= self.size;
                        }
                        if self.apply(op, &tuple) != other.apply(op, &tuple) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

impl Eq for FiniteAlgebra {}

impl FiniteAlgebra {
    /// Builds an algebra, rejecting any invariant violation.
    pub fn new(
        name: &str,
        size: usize,
        signature: Arc<Signature>,
        tables: Vec<Vec<u32>>,
    ) -> Result<Self, AlgebraError> {
        let alg = FiniteAlgebra { name: name.to_string(), size, signature, tables: Tables::Dense(tables) };
        let report = validate_algebra(&alg);
        if report.is_valid() {
            Ok(alg)
        } else {
            Err(AlgebraError::Invalid(report))
        }
    }

    /// A pair-view algebra over two components: the carrier is the pair
    /// list, operations are computed componentwise through the index. The
    /// caller guarantees closure of the pair set; accesses outside it panic.
    pub(crate) fn pair_view(
        name: &str,
        left: Arc<FiniteAlgebra>,
        right: Arc<FiniteAlgebra>,
        pairs: Arc<Vec<(u32, u32)>>,
        index: Arc<Vec<u32>>,
    ) -> Self {
        let size = pairs.len();
        let signature = left.signature.clone();
        FiniteAlgebra {
            name: name.to_string(),
            size,
            signature,
            tables: Tables::PairView { left, right, pairs, index },
        }
    }

    /// Builds without validation, so that [`validate_algebra`] can report
    /// violations instead of refusing construction. Other constructions
    /// assume validated inputs.
    pub fn from_tables_unchecked(
        name: &str,
        size: usize,
        signature: Arc<Signature>,
        tables: Vec<Vec<u32>>,
    ) -> Self {
        FiniteAlgebra { name: name.to_string(), size, signature, tables: Tables::Dense(tables) }
    }

    /// Builds from usize tables for convenience.
    pub fn from_usize_tables(
        name: &str,
        size: usize,
        signature: Arc<Signature>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        let tables = tables
            .into_iter()
            .map(|t| t.into_iter().map(|x| x as u32).collect())
            .collect();
        Self::new(name, size, signature, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    /// Dense table access; panics for pair-view algebras. Use
    /// [`FiniteAlgebra::dense_table`] where a view may occur.
    pub fn table(&self, op: usize) -> &[u32] {
        self.dense_table(op).expect("dense table requested from a pair-view algebra")
    }

    pub fn dense_table(&self, op: usize) -> Option<&[u32]> {
        match &self.tables {
            Tables::Dense(tables) => Some(&tables[op]),
            Tables::PairView { .. } => None,
        }
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.tables, Tables::Dense(_))
    }

    /// A dense copy of this algebra; refuses carriers whose tables would be
    /// unreasonably large.
    pub fn materialized(&self) -> Result<FiniteAlgebra, AlgebraError> {
        if self.is_materialized() {
            return Ok(self.clone());
        }
        let worst: usize = self
            .signature
            .ops()
            .iter()
            .map(|s| self.size.checked_pow(s.arity as u32).unwrap_or(usize::MAX))
            .fold(0usize, |a, b| a.saturating_add(b));
        if worst > 1 << 26 {
            return Err(AlgebraError::SizeGuard {
                size: self.size,
                bound: 1 << 13,
                what: "table materialization",
            });
        }
        let mut tables = Vec::with_capacity(self.signature.len());
        for (op, sym) in self.signature.ops().iter().enumerate() {
            let k = sym.arity;
            let count = self.size.pow(k as u32);
            let mut table = vec![0u32; count];
            let mut tuple = vec![0usize; k];
            for (idx, cell) in table.iter_mut().enumerate() {
                let mut rest = idx;
                for pos in (0..k).rev() {
                    tuple[pos] = rest % self.size;
                    rest /= self.size;
                }
                *cell = self.apply(op, &tuple) as u32;
            }
            tables.push(table);
        }
        FiniteAlgebra::new(&self.name, self.size, self.signature.clone(), tables)
    }

    /// Renames in place; names carry no semantics.
    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Applies operation `op` to `args`. Panics on arity mismatch.
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.signature.arity(op));
        match &self.tables {
            Tables::Dense(tables) => {
                let mut idx = 0usize;
                for &a in args {
                    idx = idx * self.size + a;
                }
                tables[op][idx] as usize
            }
            Tables::PairView { left, right, pairs, index } => {
                const MAX_ARITY: usize = 8;
                let k = args.len();
                assert!(k <= MAX_ARITY, "pair views support arity <= {}", MAX_ARITY);
                let mut la = [0usize; MAX_ARITY];
                let mut ra = [0usize; MAX_ARITY];
                for (i, &a) in args.iter().enumerate() {
                    let (x, y) = pairs[a];
                    la[i] = x as usize;
                    ra[i] = y as usize;
                }
                let lx = left.apply(op, &la[..k]);
                let ry = right.apply(op, &ra[..k]);
                let cell = index[lx * right.size + ry];
                debug_assert_ne!(cell, u32::MAX, "pair set is not closed under `{}`",
                    self.signature.ops()[op].name);
                cell as usize
            }
        }
    }

    /// Fast path for binary operations.
    #[inline]
    pub fn apply2(&self, op: usize, a: usize, b: usize) -> usize {
        match &self.tables {
            Tables::Dense(tables) => tables[op][a * self.size + b] as usize,
            Tables::PairView { left, right, pairs, index } => {
                let (ax, ay) = pairs[a];
                let (bx, by) = pairs[b];
                let lx = left.apply2(op, ax as usize, bx as usize);
                let ry = right.apply2(op, ay as usize, by as usize);
                index[lx * right.size + ry] as usize
            }
        }
    }

    /// Fast path for unary operations.
    #[inline]
    pub fn apply1(&self, op: usize, a: usize) -> usize {
        match &self.tables {
            Tables::Dense(tables) => tables[op][a] as usize,
            Tables::PairView { left, right, pairs, index } => {
                let (ax, ay) = pairs[a];
                let lx = left.apply1(op, ax as usize);
                let ry = right.apply1(op, ay as usize);
                index[lx * right.size + ry] as usize
            }
        }
    }

    /// Value of a nullary operation.
    #[inline]
    pub fn constant(&self, op: usize) -> usize {
        match &self.tables {
            Tables::Dense(tables) => tables[op][0] as usize,
            Tables::PairView { left, right, pairs: _, index } => {
                let lx = left.constant(op);
                let ry = right.constant(op);
                index[lx * right.size + ry] as usize
            }
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// The one-element algebra over the same signature (the terminal object).
    pub fn terminal(signature: Arc<Signature>) -> Arc<FiniteAlgebra> {
        let tables = signature.ops().iter().map(|_| vec![0u32]).collect();
        Arc::new(
            FiniteAlgebra::new("1", 1, signature, tables).expect("terminal algebra is valid"),
        )
    }

    /// Direct product carrier `self.size * other.size`, componentwise tables.
    /// Element `(a, b)` is index `a * other.size + b`.
    pub fn direct_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
        if a.signature != b.signature {
            return Err(AlgebraError::SignatureMismatch);
        }
        let n = a.size * b.size;
        let mut tables = Vec::with_capacity(a.signature.len());
        let mut args_a = Vec::new();
        let mut args_b = Vec::new();
        for (op, sym) in a.signature.ops().iter().enumerate() {
            let k = sym.arity;
            let mut table = vec![0u32; n.pow(k as u32)];
            let mut tuple = vec![0usize; k];
            for (idx, cell) in table.iter_mut().enumerate() {
                let mut rest = idx;
                for pos in (0..k).rev() {
                    tuple[pos] = rest % n;
                    rest /= n;
                }
                args_a.clear();
                args_b.clear();
                for &t in &tuple {
                    args_a.push(t / b.size);
                    args_b.push(t % b.size);
                }
                let ra = a.apply(op, &args_a);
                let rb = b.apply(op, &args_b);
                *cell = (ra * b.size + rb) as u32;
            }
            tables.push(table);
        }
        FiniteAlgebra::new(
            &format!("{}x{}", a.name, b.name),
            n,
            a.signature.clone(),
            tables,
        )
    }
}

/// Checks the `FiniteAlgebra` invariants and reports every violation found.
/// Pair views are validated through their defining data: pairs in component
/// range and a consistent index; totality holds by construction.
pub fn validate_algebra(alg: &FiniteAlgebra) -> ValidationReport {
    let mut violations = Vec::new();
    if alg.size == 0 {
        violations.push(Violation::EmptyCarrier);
    }
    let tables = match &alg.tables {
        Tables::Dense(tables) => tables,
        Tables::PairView { left, right, pairs, index } => {
            if pairs.len() != alg.size {
                violations.push(Violation::TableCount { expected: alg.size, actual: pairs.len() });
            }
            for (position, &(x, y)) in pairs.iter().enumerate() {
                if x as usize >= left.size() || y as usize >= right.size() {
                    violations.push(Violation::EntryOutOfRange {
                        op: "carrier".to_string(),
                        position,
                        entry: x as usize,
                        size: left.size(),
                    });
                }
            }
            if index.len() != left.size() * right.size() {
                violations.push(Violation::TableCount {
                    expected: left.size() * right.size(),
                    actual: index.len(),
                });
            }
            return ValidationReport { violations };
        }
    };
    if tables.len() != alg.signature.len() {
        violations.push(Violation::TableCount {
            expected: alg.signature.len(),
            actual: tables.len(),
        });
        return ValidationReport { violations };
    }
    for (op, sym) in alg.signature.ops().iter().enumerate() {
        let expected = alg.size.checked_pow(sym.arity as u32).unwrap_or(0);
        let table = &tables[op];
        if table.len() != expected {
            violations.push(Violation::TableLength {
                op: sym.name.clone(),
                expected,
                actual: table.len(),
            });
            continue;
        }
        for (position, &entry) in table.iter().enumerate() {
            if entry as usize >= alg.size {
                violations.push(Violation::EntryOutOfRange {
                    op: sym.name.clone(),
                    position,
                    entry: entry as usize,
                    size: alg.size,
                });
            }
        }
    }
    ValidationReport { violations }
}

/// Structural equality that short-circuits on pointer identity; constructions
/// thread the same `Arc`s, so the deep comparison rarely runs.
pub fn same_algebra(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteAlgebra {
        let sig = Arc::new(Signature::new(vec![
            OpSymbol::new("mul", 2),
            OpSymbol::new("inv", 1),
            OpSymbol::new("e", 0),
        ]));
        FiniteAlgebra::from_usize_tables(
            "z2",
            2,
            sig,
            vec![vec![0, 1, 1, 0], vec![0, 1], vec![0]],
        )
        .unwrap()
    }

    #[test]
    fn cyclic_group_is_valid() {
        let alg = z2();
        assert!(validate_algebra(&alg).is_valid());
        assert_eq!(alg.apply2(0, 1, 1), 0);
        assert_eq!(alg.constant(2), 0);
    }

    #[test]
    fn entry_out_of_range_is_reported() {
        let sig = Arc::new(Signature::new(vec![OpSymbol::new("f", 1)]));
        let alg = FiniteAlgebra::from_tables_unchecked("bad", 3, sig, vec![vec![0, 5, 2]]);
        let report = validate_algebra(&alg);
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(report.violations[0], Violation::EntryOutOfRange { entry: 5, .. }));
    }

    #[test]
    fn table_length_mismatch_is_reported() {
        let sig = Arc::new(Signature::new(vec![OpSymbol::new("f", 2)]));
        let alg = FiniteAlgebra::from_tables_unchecked("bad", 3, sig, vec![vec![0; 8]]);
        let report = validate_algebra(&alg);
        assert!(matches!(report.violations[0], Violation::TableLength { expected: 9, actual: 8, .. }));
    }

    #[test]
    fn direct_product_of_z2s_has_four_elements() {
        let a = z2();
        let p = FiniteAlgebra::direct_product(&a, &a).unwrap();
        assert_eq!(p.size(), 4);
        // (1,0) * (0,1) = (1,1)
        assert_eq!(p.apply2(0, 2, 1), 3);
    }

    #[test]
    fn equality_ignores_name() {
        let a = z2();
        let b = z2().renamed("other");
        assert_eq!(a, b);
    }
}
