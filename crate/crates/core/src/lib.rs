//! A finite-algebra computation engine for categorical Galois theory at desk
//! scale: it decides trivial coverings and coverings (central extensions),
//! computes the centralization reflection of an extension, and iterates the
//! construction to higher-dimensional central extensions, over finite groups,
//! finite commutative rings and arbitrary user-supplied finite Mal'tsev
//! algebras.

pub mod algebra;
pub mod commutator;
pub mod congruence;
pub mod galois;
pub mod hom;
pub mod limits;
pub mod varieties;

pub use algebra::{validate_algebra, AlgebraError, FiniteAlgebra, OpSymbol, Signature, ValidationReport};
pub use commutator::{
    abelianization_reflector, is_abelian_object, maltsev_audit, maltsev_audit_bounded,
    smith_commutator, CommutatorQuery, CommutatorResult,
};
pub use congruence::{
    all_congruences, are_permutable, congruence_generated, kernel_pair, quotient_by_congruence,
    relation_compose, BinaryRelation, Congruence,
};
pub use galois::{
    apply_reflector, centralize, centralize_via_commutator, is_covering, is_discrete_fibration,
    is_in_e1, is_n_fold_central, is_trivial_covering, kernel_pair_fibration, lift_structure,
    Centralization, DiscreteFibrationDatum, EngineFault, ExtSquare, GaloisError, GaloisStructure,
    TowerMorphism, TowerObject,
};
pub use hom::{
    all_homomorphisms, check_homomorphism, find_isomorphism, find_isomorphism_over_base,
    is_isomorphic, Homomorphism,
};
pub use limits::{coequalizer, kernel_pair_span, pullback, PairSubalgebra, RelationSpan};
