//! Galois structures: a reflector with a subcategory membership predicate
//! over the class of surjections, the covering hierarchy it induces, and the
//! lifted structures on iterated extension categories.

pub mod centralize;
pub mod tower;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use crate::algebra::{same_algebra, AlgebraError, FiniteAlgebra};
use crate::commutator::{abelianization_reflector_impl, smith_commutator_impl};
use crate::congruence::{kernel_pair, quotient_by_congruence, Congruence};
use crate::hom::Homomorphism;
use crate::limits::{factor_through_surjection, pullback, RelationSpan};
use crate::varieties::rings::{boolean_reflection, is_boolean_ring};

pub use centralize::{centralize_tower, is_covering_tower, is_trivial_covering_tower, TowerCentralization};
pub use tower::{
    factor_through, in_ext_class, tower_coequalizer, tower_pullback, TowerMorphism, TowerObject,
    TowerPullback,
};

/// Errors raised by the covering machinery.
#[derive(Clone, Debug)]
pub enum GaloisError {
    /// The arrow is not in the extension class required by the operation.
    NotInClass,
    /// An object or arrow lives at a different tower level than the structure.
    LevelMismatch { expected: usize, actual: usize },
    /// Recursion past the configured depth cap.
    DepthExceeded { depth: usize, cap: usize },
    /// A spot check of a user-supplied reflector failed.
    SpotCheckFailed(String),
    /// The span assembled during centralization is not a discrete fibration;
    /// signals a reflector that does not preserve the needed pullbacks.
    FibrationCheckFailed,
    /// A post-condition of a construction failed.
    PostCheckFailed(&'static str),
    Core(AlgebraError),
}

impl fmt::Display for GaloisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisError::NotInClass => write!(f, "arrow is not in the extension class"),
            GaloisError::LevelMismatch { expected, actual } => {
                write!(f, "level mismatch: structure at {}, value at {}", expected, actual)
            }
            GaloisError::DepthExceeded { depth, cap } => {
                write!(f, "tower depth {} exceeds the configured cap {}", depth, cap)
            }
            GaloisError::SpotCheckFailed(msg) => write!(f, "reflector spot check failed: {}", msg),
            GaloisError::FibrationCheckFailed => {
                write!(f, "assembled span is not a discrete fibration")
            }
            GaloisError::PostCheckFailed(what) => write!(f, "post-check failed: {}", what),
            GaloisError::Core(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for GaloisError {}

impl From<AlgebraError> for GaloisError {
    fn from(e: AlgebraError) -> Self {
        GaloisError::Core(e)
    }
}

/// Deliberately injected engine faults, for mutation runs of the property
/// suite: each one must be caught by at least one registered claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineFault {
    /// The commutator skips congruence closure (equivalence closure only).
    SkipCommutatorClosure,
    /// The covering test feeds the composite to the base instead of the
    /// kernel-pair projection into the triviality check.
    WrongCoveringProjection,
    /// Centralization omits the coequalizer step and returns the pullback.
    SkipCoequalizer,
}

impl EngineFault {
    pub fn all() -> [EngineFault; 3] {
        [
            EngineFault::SkipCommutatorClosure,
            EngineFault::WrongCoveringProjection,
            EngineFault::SkipCoequalizer,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            EngineFault::SkipCommutatorClosure => "skip-commutator-closure",
            EngineFault::WrongCoveringProjection => "wrong-covering-projection",
            EngineFault::SkipCoequalizer => "skip-coequalizer",
        }
    }
}

type ReflectFn = dyn Fn(&Arc<FiniteAlgebra>) -> Result<(Arc<FiniteAlgebra>, Homomorphism), AlgebraError>
    + Send
    + Sync;
type MemberFn = dyn Fn(&Arc<FiniteAlgebra>) -> Result<bool, AlgebraError> + Send + Sync;

/// The ground (level-0) reflector of a structure.
#[derive(Clone)]
pub enum GroundReflector {
    /// Quotient by the total-congruence bracket; subcategory of abelian objects.
    Abelianization,
    /// Quotient onto Boolean rings; subcategory of rings with `a^2 = a`.
    BooleanRings,
    /// The degenerate structure with the whole category as subcategory.
    Identity,
    /// User-supplied object reflection and membership predicate.
    Custom { name: String, reflect: Arc<ReflectFn>, member: Arc<MemberFn> },
}

impl fmt::Debug for GroundReflector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundReflector::Abelianization => write!(f, "Abelianization"),
            GroundReflector::BooleanRings => write!(f, "BooleanRings"),
            GroundReflector::Identity => write!(f, "Identity"),
            GroundReflector::Custom { name, .. } => write!(f, "Custom({})", name),
        }
    }
}

/// Input algebra, reflected object and the unit's underlying map.
type CacheEntry = (Arc<FiniteAlgebra>, Arc<FiniteAlgebra>, Vec<usize>);

struct ReflectionCache {
    entries: Mutex<HashMap<u64, Vec<CacheEntry>>>,
}

impl ReflectionCache {
    fn new() -> Self {
        ReflectionCache { entries: Mutex::new(HashMap::new()) }
    }

    fn key(alg: &FiniteAlgebra) -> u64 {
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        alg.size().hash(&mut hasher);
        alg.signature().ops().hash(&mut hasher);
        for op in 0..alg.signature().len() {
            alg.table(op).hash(&mut hasher);
        }
        hasher.finish()
    }

    fn get(&self, alg: &Arc<FiniteAlgebra>) -> Option<(Arc<FiniteAlgebra>, Homomorphism)> {
        let key = Self::key(alg);
        let entries = self.entries.lock().unwrap();
        let bucket = entries.get(&key)?;
        for (input, object, unit_map) in bucket {
            if same_algebra(input, alg) {
                let unit = Homomorphism::new(alg.clone(), object.clone(), unit_map.clone())
                    .expect("cached unit fits structurally equal algebra");
                return Some((object.clone(), unit));
            }
        }
        None
    }

    fn put(&self, alg: &Arc<FiniteAlgebra>, object: &Arc<FiniteAlgebra>, unit: &Homomorphism) {
        let key = Self::key(alg);
        let mut entries = self.entries.lock().unwrap();
        entries.entry(key).or_default().push((
            alg.clone(),
            object.clone(),
            unit.map().iter().map(|&v| v as usize).collect(),
        ));
    }
}

/// Default cap on tower depth; pullback carriers grow multiplicatively.
pub const DEFAULT_MAX_DEPTH: usize = 3;

/// Carriers above this size are not memoized in the reflection cache.
const CACHE_SIZE_LIMIT: usize = 256;

/// A reflective-subcategory structure at a tower level. Level 0 operates on
/// algebras; level n on depth-n tower objects, where reflection is the
/// centralization of the underlying depth-(n-1) arrow.
#[derive(Clone)]
pub struct GaloisStructure {
    name: String,
    level: usize,
    ground: GroundReflector,
    fault: Option<EngineFault>,
    max_depth: usize,
    probe: Vec<Arc<FiniteAlgebra>>,
    cache: Arc<ReflectionCache>,
}

impl fmt::Debug for GaloisStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisStructure")
            .field("name", &self.name)
            .field("level", &self.level)
            .field("ground", &self.ground)
            .field("fault", &self.fault)
            .finish()
    }
}

/// A reflected object together with its unit.
pub struct Reflection {
    pub object: TowerObject,
    pub unit: TowerMorphism,
}

impl GaloisStructure {
    fn new(name: &str, ground: GroundReflector) -> Self {
        GaloisStructure {
            name: name.to_string(),
            level: 0,
            ground,
            fault: None,
            max_depth: DEFAULT_MAX_DEPTH,
            probe: Vec::new(),
            cache: Arc::new(ReflectionCache::new()),
        }
    }

    /// Abelianization over any finite Mal'tsev-variety algebra.
    pub fn abelianization() -> Self {
        Self::new("abelianization", GroundReflector::Abelianization)
    }

    /// Boolean-ring reflection of finite commutative rings.
    pub fn boolean_rings() -> Self {
        Self::new("boolean", GroundReflector::BooleanRings)
    }

    /// The degenerate structure whose subcategory is everything.
    pub fn identity_reflector() -> Self {
        Self::new("identity", GroundReflector::Identity)
    }

    /// A user-supplied structure; `probe` algebras are spot-checked at lift.
    pub fn custom(
        name: &str,
        reflect: Arc<ReflectFn>,
        member: Arc<MemberFn>,
        probe: Vec<Arc<FiniteAlgebra>>,
    ) -> Self {
        let mut s = Self::new(
            name,
            GroundReflector::Custom { name: name.to_string(), reflect, member },
        );
        s.probe = probe;
        s
    }

    pub fn with_fault(mut self, fault: EngineFault) -> Self {
        self.fault = Some(fault);
        // A faulty engine must not serve answers computed before the fault.
        self.cache = Arc::new(ReflectionCache::new());
        self
    }

    pub fn with_max_depth(mut self, cap: usize) -> Self {
        self.max_depth = cap;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn fault(&self) -> Option<EngineFault> {
        self.fault
    }

    /// The same structure regarded at a different level.
    pub fn at_level(&self, level: usize) -> GaloisStructure {
        let mut s = self.clone();
        s.level = level;
        s
    }

    /// Ground reflection of a plain algebra.
    pub fn reflect_algebra(
        &self,
        alg: &Arc<FiniteAlgebra>,
    ) -> Result<(Arc<FiniteAlgebra>, Homomorphism), GaloisError> {
        if alg.size() <= CACHE_SIZE_LIMIT {
            if let Some(hit) = self.cache.get(alg) {
                return Ok(hit);
            }
        }
        let skip_closure = self.fault == Some(EngineFault::SkipCommutatorClosure);
        let (object, unit) = match &self.ground {
            GroundReflector::Abelianization => abelianization_reflector_impl(alg, skip_closure)?,
            GroundReflector::BooleanRings => boolean_reflection(alg)?,
            GroundReflector::Identity => (alg.clone(), Homomorphism::identity(alg)),
            GroundReflector::Custom { reflect, .. } => reflect(alg)?,
        };
        if alg.size() <= CACHE_SIZE_LIMIT {
            self.cache.put(alg, &object, &unit);
        }
        Ok((object, unit))
    }

    /// Ground membership of a plain algebra in the reflective subcategory.
    pub fn in_subcategory_algebra(&self, alg: &Arc<FiniteAlgebra>) -> Result<bool, GaloisError> {
        match &self.ground {
            GroundReflector::Identity => Ok(true),
            GroundReflector::BooleanRings => Ok(is_boolean_ring(alg)),
            GroundReflector::Abelianization => {
                let (_, unit) = self.reflect_algebra(alg)?;
                Ok(unit.is_bijective())
            }
            GroundReflector::Custom { member, .. } => Ok(member(alg)?),
        }
    }

    /// Reflects a tower object at this structure's level. At level n >= 1
    /// this is the centralization of the underlying arrow one level down.
    pub fn reflect(&self, obj: &TowerObject) -> Result<Reflection, GaloisError> {
        if obj.depth() != self.level {
            return Err(GaloisError::LevelMismatch { expected: self.level, actual: obj.depth() });
        }
        match obj {
            TowerObject::Algebra(alg) => {
                let (object, unit) = self.reflect_algebra(alg)?;
                Ok(Reflection {
                    object: TowerObject::Algebra(object),
                    unit: TowerMorphism::from_hom(unit),
                })
            }
            TowerObject::Extension(m) => {
                let lower = self.at_level(self.level - 1);
                let result = centralize_tower(&lower, m)?;
                let object = TowerObject::Extension(Box::new(result.reflected.clone()));
                let unit = TowerMorphism::square(
                    obj.clone(),
                    object.clone(),
                    result.unit.clone(),
                    TowerMorphism::identity(m.target()),
                )?;
                Ok(Reflection { object, unit })
            }
        }
    }

    /// The reflected arrow `HI(m)`, induced by factoring through the source
    /// unit. Naturality holds by construction; surjections stay surjective.
    pub fn reflect_arrow(&self, m: &TowerMorphism) -> Result<TowerMorphism, GaloisError> {
        if m.level() != self.level {
            return Err(GaloisError::LevelMismatch { expected: self.level, actual: m.level() });
        }
        let rx = self.reflect(m.source())?;
        let ry = self.reflect(m.target())?;
        let t = m.compose(&ry.unit)?;
        Ok(factor_through(&rx.unit, &t)?)
    }

    /// Subcategory membership at this level: coverings one level down.
    pub fn in_subcategory(&self, obj: &TowerObject) -> Result<bool, GaloisError> {
        if obj.depth() != self.level {
            return Err(GaloisError::LevelMismatch { expected: self.level, actual: obj.depth() });
        }
        match obj {
            TowerObject::Algebra(alg) => self.in_subcategory_algebra(alg),
            TowerObject::Extension(m) => is_covering_tower(&self.at_level(self.level - 1), m),
        }
    }

    /// Extension-class membership at this level.
    pub fn in_class(&self, m: &TowerMorphism) -> Result<bool, GaloisError> {
        if m.level() != self.level {
            return Err(GaloisError::LevelMismatch { expected: self.level, actual: m.level() });
        }
        Ok(in_ext_class(m)?)
    }

    /// The lifted structure one level up: objects are this level's
    /// extensions, reflection is centralization, the subcategory is the
    /// coverings. Built-ins lift freely; custom structures are spot-checked
    /// on their probe set first.
    pub fn lift(&self) -> Result<GaloisStructure, GaloisError> {
        if self.level + 1 > self.max_depth {
            return Err(GaloisError::DepthExceeded { depth: self.level + 1, cap: self.max_depth });
        }
        if self.level == 0 {
            if let GroundReflector::Custom { .. } = self.ground {
                self.spot_check()?;
            }
        }
        Ok(self.at_level(self.level + 1))
    }

    /// Naturality, idempotence, unit surjectivity and the Birkhoff square
    /// condition, sampled over the probe set.
    pub fn spot_check(&self) -> Result<(), GaloisError> {
        for alg in &self.probe {
            let (object, unit) = self.reflect_algebra(alg)?;
            if !unit.is_surjective() {
                return Err(GaloisError::SpotCheckFailed(format!(
                    "unit of {} is not surjective",
                    alg.name()
                )));
            }
            let (_, unit2) = self.reflect_algebra(&object)?;
            if !unit2.is_bijective() {
                return Err(GaloisError::SpotCheckFailed(format!(
                    "reflection of {} is not idempotent",
                    alg.name()
                )));
            }
        }
        for a in &self.probe {
            for b in &self.probe {
                if a.signature() != b.signature() {
                    continue;
                }
                let homs = crate::hom::all_homomorphisms(a, b)?;
                for f in homs.into_iter().filter(|f| f.is_surjective()) {
                    let square = apply_reflector(self, &f)?;
                    if !square.right.is_surjective() {
                        return Err(GaloisError::SpotCheckFailed(format!(
                            "reflected arrow {} -> {} is not surjective",
                            a.name(),
                            b.name()
                        )));
                    }
                    if !is_in_e1(&square)? {
                        return Err(GaloisError::SpotCheckFailed(format!(
                            "naturality square at {} -> {} is not in the double class",
                            a.name(),
                            b.name()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Free-function form of [`GaloisStructure::lift`].
pub fn lift_structure(gamma: &GaloisStructure) -> Result<GaloisStructure, GaloisError> {
    gamma.lift()
}

/// A commuting square of homomorphisms, oriented so that `top: A' -> B'` and
/// `bottom: A -> B` are the compared arrows, `left: A' -> A` and
/// `right: B' -> B` the connecting ones; `bottom ∘ left = right ∘ top`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtSquare {
    pub top: Homomorphism,
    pub left: Homomorphism,
    pub right: Homomorphism,
    pub bottom: Homomorphism,
}

impl ExtSquare {
    pub fn new(
        top: Homomorphism,
        left: Homomorphism,
        right: Homomorphism,
        bottom: Homomorphism,
    ) -> Result<Self, GaloisError> {
        let sq = ExtSquare { top, left, right, bottom };
        if !sq.commutes()? {
            return Err(GaloisError::Core(AlgebraError::NotWellDefined { witness: (0, 0) }));
        }
        Ok(sq)
    }

    pub fn commutes(&self) -> Result<bool, GaloisError> {
        if !same_algebra(self.top.source(), self.left.source()) {
            return Err(GaloisError::Core(AlgebraError::SourceMismatch));
        }
        let via_left = self.left.then(&self.bottom).map_err(GaloisError::Core)?;
        let via_top = self.top.then(&self.right).map_err(GaloisError::Core)?;
        Ok(via_left == via_top)
    }

    /// The square as a level-1 morphism from `top` to `bottom`.
    pub fn as_tower_morphism(&self) -> Result<TowerMorphism, GaloisError> {
        Ok(TowerMorphism::square(
            TowerObject::from_arrow(self.top.clone()),
            TowerObject::from_arrow(self.bottom.clone()),
            TowerMorphism::from_hom(self.left.clone()),
            TowerMorphism::from_hom(self.right.clone()),
        )?)
    }

    /// The comparison `A' -> A ×_B B'` induced by `(left, top)`.
    pub fn comparison(&self) -> Result<Homomorphism, GaloisError> {
        let pb = pullback(&self.bottom, &self.right)?;
        Ok(pb.tuple(&self.left, &self.top)?)
    }
}

/// Membership in the class of extension squares: all four maps surjective
/// and the comparison to the pullback surjective.
pub fn is_in_e1(sq: &ExtSquare) -> Result<bool, GaloisError> {
    if !sq.commutes()? {
        return Err(GaloisError::Core(AlgebraError::NotWellDefined { witness: (0, 0) }));
    }
    if !(sq.top.is_surjective()
        && sq.bottom.is_surjective()
        && sq.left.is_surjective()
        && sq.right.is_surjective())
    {
        return Ok(false);
    }
    Ok(sq.comparison()?.is_surjective())
}

/// The naturality square of the reflector at a surjection `f`: units on top
/// and bottom of the reflected arrow.
pub fn apply_reflector(gamma: &GaloisStructure, f: &Homomorphism) -> Result<ExtSquare, GaloisError> {
    require_level_zero(gamma)?;
    if !f.is_surjective() {
        return Err(GaloisError::NotInClass);
    }
    let (_, unit_a) = gamma.reflect_algebra(f.source())?;
    let (_, unit_b) = gamma.reflect_algebra(f.target())?;
    let t = f.then(&unit_b).map_err(GaloisError::Core)?;
    let reflected = factor_through_surjection(&unit_a, &t).map_err(GaloisError::Core)?;
    ExtSquare::new(unit_a, f.clone(), reflected, unit_b)
}

fn require_level_zero(gamma: &GaloisStructure) -> Result<(), GaloisError> {
    if gamma.level != 0 {
        return Err(GaloisError::LevelMismatch { expected: 0, actual: gamma.level });
    }
    Ok(())
}

/// Whether the naturality square at `f` is a pullback, i.e. the canonical
/// comparison into the reflected pullback is an isomorphism.
pub fn is_trivial_covering(gamma: &GaloisStructure, f: &Homomorphism) -> Result<bool, GaloisError> {
    require_level_zero(gamma)?;
    is_trivial_covering_tower(gamma, &TowerMorphism::from_hom(f.clone()))
}

/// The normal-extension criterion: the first kernel-pair projection is a
/// trivial covering. Valid because coverings and normal extensions coincide
/// under the standing hypotheses on the built-in structures.
pub fn is_covering(gamma: &GaloisStructure, f: &Homomorphism) -> Result<bool, GaloisError> {
    require_level_zero(gamma)?;
    is_covering_tower(gamma, &TowerMorphism::from_hom(f.clone()))
}

/// A centralized extension: the reflected arrow and the unit into it.
#[derive(Clone, Debug)]
pub struct Centralization {
    pub reflected: Homomorphism,
    pub unit: Homomorphism,
}

/// Reflection of an extension into the coverings, by the kernel-pair /
/// reflect / pull-back-along-units / coequalize construction.
pub fn centralize(gamma: &GaloisStructure, f: &Homomorphism) -> Result<Centralization, GaloisError> {
    require_level_zero(gamma)?;
    let result = centralize_tower(gamma, &TowerMorphism::from_hom(f.clone()))?;
    Ok(Centralization {
        reflected: result.reflected.as_map().expect("level-0 result").clone(),
        unit: result.unit.as_map().expect("level-0 unit").clone(),
    })
}

/// Alternate route for the abelianization structure: quotient by the bracket
/// of the kernel congruence with the total congruence, with the induced map
/// to the base. Cross-checks the centralization target.
pub fn centralize_via_commutator(
    gamma: &GaloisStructure,
    f: &Homomorphism,
) -> Result<Centralization, GaloisError> {
    require_level_zero(gamma)?;
    if !matches!(gamma.ground, GroundReflector::Abelianization) {
        return Err(GaloisError::SpotCheckFailed(
            "commutator route requires the abelianization structure".to_string(),
        ));
    }
    if !f.is_surjective() {
        return Err(GaloisError::NotInClass);
    }
    let a = f.source();
    let kernel = kernel_pair(f);
    let total = Congruence::total(a.clone());
    let skip_closure = gamma.fault == Some(EngineFault::SkipCommutatorClosure);
    let bracket = smith_commutator_impl(a, &kernel, &total, skip_closure)?;
    let (_, unit) = quotient_by_congruence(a, &bracket.congruence)?;
    let reflected = factor_through_surjection(&unit, f)?;
    Ok(Centralization { reflected, unit })
}

/// Data for the discrete-fibration test: a span over a span with commuting
/// verticals.
#[derive(Clone, Debug)]
pub struct DiscreteFibrationDatum {
    pub upstairs: RelationSpan,
    pub downstairs: RelationSpan,
    /// Vertical on relation objects, upstairs total to downstairs total.
    pub on_total: Homomorphism,
    /// Vertical on bases.
    pub on_base: Homomorphism,
}

impl DiscreteFibrationDatum {
    fn check_commutes(&self) -> Result<(), GaloisError> {
        let first_up = self.upstairs.proj1.then(&self.on_base).map_err(GaloisError::Core)?;
        let first_down = self.on_total.then(&self.downstairs.proj1).map_err(GaloisError::Core)?;
        let second_up = self.upstairs.proj2.then(&self.on_base).map_err(GaloisError::Core)?;
        let second_down = self.on_total.then(&self.downstairs.proj2).map_err(GaloisError::Core)?;
        if first_up != first_down || second_up != second_down {
            return Err(GaloisError::Core(AlgebraError::NotWellDefined { witness: (0, 0) }));
        }
        Ok(())
    }
}

/// Whether the square formed by the second projections and the verticals is
/// a pullback (comparison isomorphism test).
pub fn is_discrete_fibration(datum: &DiscreteFibrationDatum) -> Result<bool, GaloisError> {
    datum.check_commutes()?;
    let pb = pullback(&datum.downstairs.proj2, &datum.on_base)?;
    let comparison = pb.tuple(&datum.on_total, &datum.upstairs.proj2)?;
    Ok(comparison.is_bijective())
}

/// The canonical fibration datum for a pair of surjections with common
/// target: pull `f` back along `p`, take kernel pairs, and map down to the
/// kernel pair of `p`.
pub fn kernel_pair_fibration(
    f: &Homomorphism,
    p: &Homomorphism,
) -> Result<DiscreteFibrationDatum, GaloisError> {
    if !same_algebra(f.target(), p.target()) {
        return Err(GaloisError::Core(AlgebraError::TargetMismatch));
    }
    let c = pullback(p, f)?;
    let r = pullback(p, p)?;
    let s = pullback(&r.proj2, &c.proj1)?;
    let on_total = s.proj1.clone();
    let rho2 = s.proj2.clone();
    let rho1 = c.tuple(
        &s.proj1.then(&r.proj1).map_err(GaloisError::Core)?,
        &s.proj2.then(&c.proj2).map_err(GaloisError::Core)?,
    )?;
    let upstairs = RelationSpan::new(rho1, rho2)?;
    let downstairs = RelationSpan::new(r.proj1.clone(), r.proj2.clone())?;
    Ok(DiscreteFibrationDatum { upstairs, downstairs, on_total, on_base: c.proj1.clone() })
}

/// Depth-n centrality: at depth 1, the covering test; at depth n, the
/// covering test for the (n-1)-times lifted structure, computed pointwise.
pub fn is_n_fold_central(
    gamma: &GaloisStructure,
    tower: &TowerObject,
    depth: usize,
) -> Result<bool, GaloisError> {
    require_level_zero(gamma)?;
    if depth == 0 || tower.depth() != depth {
        return Err(GaloisError::LevelMismatch { expected: depth, actual: tower.depth() });
    }
    if depth > gamma.max_depth {
        return Err(GaloisError::DepthExceeded { depth, cap: gamma.max_depth });
    }
    if !tower.is_valid_extension()? {
        return Err(GaloisError::NotInClass);
    }
    let morphism = tower.as_extension().expect("depth >= 1");
    is_covering_tower(&gamma.at_level(depth - 1), morphism)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varieties::groups::{cyclic_group, symmetric_group};

    #[test]
    fn identity_reflector_fixes_everything() {
        let gamma = GaloisStructure::identity_reflector();
        let s3 = symmetric_group(3);
        let (obj, unit) = gamma.reflect_algebra(&s3).unwrap();
        assert!(same_algebra(&obj, &s3));
        assert!(unit.is_bijective());
        assert!(gamma.in_subcategory_algebra(&s3).unwrap());
    }

    #[test]
    fn abelianization_reflector_on_s3() {
        let gamma = GaloisStructure::abelianization();
        let s3 = symmetric_group(3);
        let (obj, unit) = gamma.reflect_algebra(&s3).unwrap();
        assert_eq!(obj.size(), 2);
        assert!(unit.is_surjective());
        assert!(!gamma.in_subcategory_algebra(&s3).unwrap());
        assert!(gamma.in_subcategory_algebra(&cyclic_group(4)).unwrap());
    }

    #[test]
    fn cache_returns_structurally_equal_results() {
        let gamma = GaloisStructure::abelianization();
        let s3a = symmetric_group(3);
        let s3b = symmetric_group(3);
        let (q1, _) = gamma.reflect_algebra(&s3a).unwrap();
        let (q2, _) = gamma.reflect_algebra(&s3b).unwrap();
        assert!(same_algebra(&q1, &q2));
    }

    #[test]
    fn lift_increments_level_and_respects_depth_cap() {
        let gamma = GaloisStructure::abelianization();
        let lifted = gamma.lift().unwrap();
        assert_eq!(lifted.level(), 1);
        let capped = GaloisStructure::abelianization().with_max_depth(1);
        assert!(capped.lift().unwrap().lift().is_err());
    }
}
