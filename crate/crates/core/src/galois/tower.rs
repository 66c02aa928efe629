//! Iterated arrow categories as data: a depth-n object is an arrow between
//! depth-(n-1) objects, a depth-n morphism is a commuting square of
//! depth-(n-1) morphisms. Pullbacks, coequalizers and factorizations are
//! computed pointwise, grounding out in the concrete constructions on
//! finite algebras.

use std::sync::Arc;

use crate::algebra::{same_algebra, AlgebraError, FiniteAlgebra};
use crate::hom::Homomorphism;
use crate::limits::{self, PairSubalgebra};

/// An object at some tower depth: depth 0 is an algebra, depth n is an arrow
/// of depth n-1 required to lie in the extension class of its level.
#[derive(Clone, Debug)]
pub enum TowerObject {
    Algebra(Arc<FiniteAlgebra>),
    Extension(Box<TowerMorphism>),
}

impl PartialEq for TowerObject {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (TowerObject::Algebra(a), TowerObject::Algebra(b)) => same_algebra(a, b),
            (TowerObject::Extension(m), TowerObject::Extension(n)) => m == n,
            _ => false,
        }
    }
}

impl TowerObject {
    pub fn from_algebra(alg: Arc<FiniteAlgebra>) -> Self {
        TowerObject::Algebra(alg)
    }

    /// Wraps an arrow as a depth-1 object.
    pub fn from_arrow(f: Homomorphism) -> Self {
        TowerObject::Extension(Box::new(TowerMorphism::from_hom(f)))
    }

    pub fn depth(&self) -> usize {
        match self {
            TowerObject::Algebra(_) => 0,
            TowerObject::Extension(m) => m.level() + 1,
        }
    }

    pub fn as_algebra(&self) -> Option<&Arc<FiniteAlgebra>> {
        match self {
            TowerObject::Algebra(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_extension(&self) -> Option<&TowerMorphism> {
        match self {
            TowerObject::Extension(m) => Some(m),
            _ => None,
        }
    }

    /// Whether every face lies in the extension class of its level.
    pub fn is_valid_extension(&self) -> Result<bool, AlgebraError> {
        match self {
            TowerObject::Algebra(_) => Ok(true),
            TowerObject::Extension(m) => in_ext_class(m),
        }
    }
}

/// A morphism at some tower level. `Square` components connect domains to
/// domains and codomains to codomains: for `m : (x : X0 -> X1) -> (y : Y0 -> Y1)`,
/// `dom : X0 -> Y0` and `cod : X1 -> Y1` with `y ∘ dom = cod ∘ x`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerMorphism {
    source: TowerObject,
    target: TowerObject,
    parts: MorphismParts,
}

#[derive(Clone, Debug, PartialEq)]
enum MorphismParts {
    Map(Homomorphism),
    Square { dom: Box<TowerMorphism>, cod: Box<TowerMorphism> },
}

impl TowerMorphism {
    pub fn from_hom(f: Homomorphism) -> Self {
        TowerMorphism {
            source: TowerObject::Algebra(f.source().clone()),
            target: TowerObject::Algebra(f.target().clone()),
            parts: MorphismParts::Map(f),
        }
    }

    /// Builds a square morphism, checking boundary agreement and commutation.
    pub fn square(
        source: TowerObject,
        target: TowerObject,
        dom: TowerMorphism,
        cod: TowerMorphism,
    ) -> Result<Self, AlgebraError> {
        let x = source.as_extension().ok_or(AlgebraError::SourceMismatch)?;
        let y = target.as_extension().ok_or(AlgebraError::TargetMismatch)?;
        if dom.source != x.source || dom.target != y.source {
            return Err(AlgebraError::SourceMismatch);
        }
        if cod.source != x.target || cod.target != y.target {
            return Err(AlgebraError::TargetMismatch);
        }
        let via_dom = dom.compose(y)?;
        let via_cod = x.compose(&cod)?;
        if via_dom != via_cod {
            return Err(AlgebraError::NotWellDefined { witness: (0, 0) });
        }
        Ok(TowerMorphism {
            source,
            target,
            parts: MorphismParts::Square { dom: Box::new(dom), cod: Box::new(cod) },
        })
    }

    pub fn level(&self) -> usize {
        match &self.parts {
            MorphismParts::Map(_) => 0,
            MorphismParts::Square { dom, .. } => dom.level() + 1,
        }
    }

    pub fn source(&self) -> &TowerObject {
        &self.source
    }

    pub fn target(&self) -> &TowerObject {
        &self.target
    }

    pub fn as_map(&self) -> Option<&Homomorphism> {
        match &self.parts {
            MorphismParts::Map(h) => Some(h),
            _ => None,
        }
    }

    /// Domain-side component of a square.
    pub fn dom_part(&self) -> Option<&TowerMorphism> {
        match &self.parts {
            MorphismParts::Square { dom, .. } => Some(dom),
            _ => None,
        }
    }

    /// Codomain-side component of a square.
    pub fn cod_part(&self) -> Option<&TowerMorphism> {
        match &self.parts {
            MorphismParts::Square { cod, .. } => Some(cod),
            _ => None,
        }
    }

    pub fn identity(obj: &TowerObject) -> Self {
        match obj {
            TowerObject::Algebra(a) => TowerMorphism::from_hom(Homomorphism::identity(a)),
            TowerObject::Extension(m) => TowerMorphism {
                source: obj.clone(),
                target: obj.clone(),
                parts: MorphismParts::Square {
                    dom: Box::new(TowerMorphism::identity(&m.source)),
                    cod: Box::new(TowerMorphism::identity(&m.target)),
                },
            },
        }
    }

    /// `other ∘ self`.
    pub fn compose(&self, other: &TowerMorphism) -> Result<TowerMorphism, AlgebraError> {
        if self.target != other.source {
            return Err(AlgebraError::TargetMismatch);
        }
        match (&self.parts, &other.parts) {
            (MorphismParts::Map(f), MorphismParts::Map(g)) => {
                Ok(TowerMorphism::from_hom(f.then(g)?))
            }
            (
                MorphismParts::Square { dom: d1, cod: c1 },
                MorphismParts::Square { dom: d2, cod: c2 },
            ) => Ok(TowerMorphism {
                source: self.source.clone(),
                target: other.target.clone(),
                parts: MorphismParts::Square {
                    dom: Box::new(d1.compose(d2)?),
                    cod: Box::new(c1.compose(c2)?),
                },
            }),
            _ => Err(AlgebraError::TargetMismatch),
        }
    }

    /// Isomorphism test: every corner map is bijective.
    pub fn is_iso(&self) -> bool {
        match &self.parts {
            MorphismParts::Map(h) => h.is_bijective(),
            MorphismParts::Square { dom, cod } => dom.is_iso() && cod.is_iso(),
        }
    }

    /// Every corner map surjective.
    pub fn is_surjective_levelwise(&self) -> bool {
        match &self.parts {
            MorphismParts::Map(h) => h.is_surjective(),
            MorphismParts::Square { dom, cod } => {
                dom.is_surjective_levelwise() && cod.is_surjective_levelwise()
            }
        }
    }
}

/// Membership in the extension class of the morphism's level: surjectivity
/// at level 0; at level n, both components in the class of level n-1, valid
/// extension endpoints, and the comparison to the pointwise pullback again
/// in the class of level n-1.
pub fn in_ext_class(m: &TowerMorphism) -> Result<bool, AlgebraError> {
    match &m.parts {
        MorphismParts::Map(h) => Ok(h.is_surjective()),
        MorphismParts::Square { dom, cod } => {
            let x = m.source.as_extension().expect("square source is an extension");
            let y = m.target.as_extension().expect("square target is an extension");
            if !in_ext_class(x)? || !in_ext_class(y)? {
                return Ok(false);
            }
            if !in_ext_class(dom)? || !in_ext_class(cod)? {
                return Ok(false);
            }
            let pb = tower_pullback(y, cod)?;
            let comparison = pb.tuple(dom, x)?;
            in_ext_class(&comparison)
        }
    }
}

/// A computed pullback together with enough data to induce cones into it.
pub struct TowerPullback {
    pub object: TowerObject,
    pub proj1: TowerMorphism,
    pub proj2: TowerMorphism,
    data: PullbackData,
}

enum PullbackData {
    Ground(PairSubalgebra),
    Pointwise { dom: Box<TowerPullback>, cod: Box<TowerPullback> },
}

impl TowerPullback {
    /// The induced morphism `<u, v> : W -> P` for a commuting cone.
    pub fn tuple(
        &self,
        u: &TowerMorphism,
        v: &TowerMorphism,
    ) -> Result<TowerMorphism, AlgebraError> {
        match &self.data {
            PullbackData::Ground(pb) => {
                let hu = u.as_map().ok_or(AlgebraError::SourceMismatch)?;
                let hv = v.as_map().ok_or(AlgebraError::SourceMismatch)?;
                Ok(TowerMorphism::from_hom(pb.tuple(hu, hv)?))
            }
            PullbackData::Pointwise { dom, cod } => {
                let ud = u.dom_part().ok_or(AlgebraError::SourceMismatch)?;
                let vd = v.dom_part().ok_or(AlgebraError::SourceMismatch)?;
                let uc = u.cod_part().ok_or(AlgebraError::SourceMismatch)?;
                let vc = v.cod_part().ok_or(AlgebraError::SourceMismatch)?;
                let dom_tuple = dom.tuple(ud, vd)?;
                let cod_tuple = cod.tuple(uc, vc)?;
                TowerMorphism::square(u.source().clone(), self.object.clone(), dom_tuple, cod_tuple)
            }
        }
    }

    /// The diagonal into a kernel-pair pullback (both legs the identity).
    pub fn diagonal(&self, apex: &TowerObject) -> Result<TowerMorphism, AlgebraError> {
        let id = TowerMorphism::identity(apex);
        self.tuple(&id, &id)
    }
}

/// Pointwise pullback of a cospan `f : X -> Z`, `g : Y -> Z`.
pub fn tower_pullback(
    f: &TowerMorphism,
    g: &TowerMorphism,
) -> Result<TowerPullback, AlgebraError> {
    if f.target() != g.target() {
        return Err(AlgebraError::TargetMismatch);
    }
    match (&f.parts, &g.parts) {
        (MorphismParts::Map(hf), MorphismParts::Map(hg)) => {
            let pb = limits::pullback(hf, hg)?;
            Ok(TowerPullback {
                object: TowerObject::Algebra(pb.algebra.clone()),
                proj1: TowerMorphism::from_hom(pb.proj1.clone()),
                proj2: TowerMorphism::from_hom(pb.proj2.clone()),
                data: PullbackData::Ground(pb),
            })
        }
        (MorphismParts::Square { dom: fd, cod: fc }, MorphismParts::Square { dom: gd, cod: gc }) => {
            let x = f.source().as_extension().expect("square source");
            let y = g.source().as_extension().expect("square source");
            let dom_pb = tower_pullback(fd, gd)?;
            let cod_pb = tower_pullback(fc, gc)?;
            // Connecting arrow P0 -> P1 induced by the object arrows.
            let leg1 = dom_pb.proj1.compose(x)?;
            let leg2 = dom_pb.proj2.compose(y)?;
            let connecting = cod_pb.tuple(&leg1, &leg2)?;
            let object = TowerObject::Extension(Box::new(connecting));
            let proj1 = TowerMorphism::square(
                object.clone(),
                f.source().clone(),
                dom_pb.proj1.clone(),
                cod_pb.proj1.clone(),
            )?;
            let proj2 = TowerMorphism::square(
                object.clone(),
                g.source().clone(),
                dom_pb.proj2.clone(),
                cod_pb.proj2.clone(),
            )?;
            Ok(TowerPullback {
                object,
                proj1,
                proj2,
                data: PullbackData::Pointwise { dom: Box::new(dom_pb), cod: Box::new(cod_pb) },
            })
        }
        _ => Err(AlgebraError::TargetMismatch),
    }
}

/// Pointwise coequalizer of a parallel pair, with the induced connecting
/// arrow between the component quotients.
pub fn tower_coequalizer(
    u: &TowerMorphism,
    v: &TowerMorphism,
) -> Result<(TowerObject, TowerMorphism), AlgebraError> {
    if u.source() != v.source() {
        return Err(AlgebraError::SourceMismatch);
    }
    if u.target() != v.target() {
        return Err(AlgebraError::TargetMismatch);
    }
    match (&u.parts, &v.parts) {
        (MorphismParts::Map(hu), MorphismParts::Map(hv)) => {
            let (q, proj) = limits::coequalizer(hu, hv)?;
            Ok((TowerObject::Algebra(q), TowerMorphism::from_hom(proj)))
        }
        (MorphismParts::Square { dom: ud, cod: uc }, MorphismParts::Square { dom: vd, cod: vc }) => {
            let c = u.target().as_extension().expect("square target");
            let (_q0, q0_arrow) = tower_coequalizer(ud, vd)?;
            let (_q1, q1_arrow) = tower_coequalizer(uc, vc)?;
            let t = c.compose(&q1_arrow)?;
            let connecting = factor_through(&q0_arrow, &t)?;
            let object = TowerObject::Extension(Box::new(connecting));
            let arrow = TowerMorphism::square(
                u.target().clone(),
                object.clone(),
                q0_arrow,
                q1_arrow,
            )?;
            Ok((object, arrow))
        }
        _ => Err(AlgebraError::SourceMismatch),
    }
}

/// The unique `Q -> W` with `result ∘ e = t`, for `e` levelwise surjective
/// and `t` constant on its fibers. Fails with a witness otherwise.
pub fn factor_through(
    e: &TowerMorphism,
    t: &TowerMorphism,
) -> Result<TowerMorphism, AlgebraError> {
    if e.source() != t.source() {
        return Err(AlgebraError::SourceMismatch);
    }
    match (&e.parts, &t.parts) {
        (MorphismParts::Map(he), MorphismParts::Map(ht)) => {
            Ok(TowerMorphism::from_hom(limits::factor_through_surjection(he, ht)?))
        }
        (MorphismParts::Square { dom: ed, cod: ec }, MorphismParts::Square { dom: td, cod: tc }) => {
            let dom = factor_through(ed, td)?;
            let cod = factor_through(ec, tc)?;
            TowerMorphism::square(e.target().clone(), t.target().clone(), dom, cod)
        }
        _ => Err(AlgebraError::SourceMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varieties::groups::cyclic_group;

    fn mod_map(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Homomorphism {
        let k = b.size();
        Homomorphism::new(a.clone(), b.clone(), (0..a.size()).map(|x| x % k).collect()).unwrap()
    }

    #[test]
    fn depth_and_level_accounting() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let f = mod_map(&z4, &z2);
        let obj = TowerObject::from_arrow(f.clone());
        assert_eq!(obj.depth(), 1);
        let m = TowerMorphism::from_hom(f);
        assert_eq!(m.level(), 0);
        let id = TowerMorphism::identity(&obj);
        assert_eq!(id.level(), 1);
        assert!(id.is_iso());
    }

    #[test]
    fn kernel_pair_square_is_in_the_double_class() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let f = TowerMorphism::from_hom(mod_map(&z4, &z2));
        let pb = tower_pullback(&f, &f).unwrap();
        // Square from proj1 : R -> Z4 to f : Z4 -> Z2 with dom = proj2 and
        // cod = f; commutes since both composites are "f of either leg".
        let m = TowerMorphism::square(
            TowerObject::from_arrow(pb.proj1.as_map().unwrap().clone()),
            TowerObject::from_arrow(f.as_map().unwrap().clone()),
            pb.proj2.clone(),
            f.clone(),
        )
        .unwrap();
        assert!(in_ext_class(&m).unwrap());
    }

    #[test]
    fn collapsing_square_is_not_in_the_double_class() {
        // Both maps out of the Klein four group the first projection, over
        // the point: the comparison image is only the diagonal of Z2 x Z2.
        let z2 = cyclic_group(2);
        let v4 = Arc::new(FiniteAlgebra::direct_product(&z2, &z2).unwrap());
        let first_proj = Homomorphism::new(v4.clone(), z2.clone(), vec![0, 0, 1, 1]).unwrap();
        let to_point = Homomorphism::to_terminal(&z2);
        let sq = TowerMorphism::square(
            TowerObject::from_arrow(first_proj.clone()),
            TowerObject::from_arrow(to_point.clone()),
            TowerMorphism::from_hom(first_proj),
            TowerMorphism::from_hom(to_point),
        )
        .unwrap();
        assert!(!in_ext_class(&sq).unwrap());
    }

    #[test]
    fn pointwise_coequalizer_grounds_out_correctly() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let f = TowerMorphism::from_hom(mod_map(&z4, &z2));
        let kp = tower_pullback(&f, &f).unwrap();
        let (q, arrow) = tower_coequalizer(&kp.proj1, &kp.proj2).unwrap();
        assert_eq!(q.as_algebra().unwrap().size(), 2);
        assert!(arrow.is_surjective_levelwise());
    }
}
