//! Concrete instances the engine is validated against: finite groups with
//! abelianization, finite commutative rings with Boolean reflection, and the
//! group-theoretic oracles computed independently of the abstract machinery.

pub mod corpus;
pub mod groups;
pub mod rings;

pub use corpus::{build_corpus, Corpus, CorpusSelector};
pub use groups::{
    center, commutator_element, coset_congruence, cyclic_group, derived_subgroup, dihedral_group,
    direct_product_group, generating_set, group_axiom_violations, group_central_oracle,
    group_from_mul_table, group_signature, group_trivial_oracle, has_group_signature, is_group,
    is_normal_subgroup, is_subgroup, kernel_subset, normal_closure, quaternion_group,
    relative_commutator_subgroup, subgroup_generated, symmetric_group,
};
pub use rings::{
    boolean_reflection, cyclic_ring, direct_product_ring, field_four, has_ring_signature,
    is_boolean_ring, is_ring, ring_axiom_violations, ring_from_tables, ring_signature,
};

use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, OpSymbol, Signature};

/// The meet-semilattice on the chain `0 < 1 < .. < n-1`. Not congruence
/// permutable for `n >= 3`; the standard counterexample fixture.
pub fn chain_meet_semilattice(n: usize) -> Arc<FiniteAlgebra> {
    let sig = Arc::new(Signature::new(vec![OpSymbol::new("meet", 2)]));
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(i.min(j));
        }
    }
    Arc::new(
        FiniteAlgebra::from_usize_tables(&format!("chain{}", n), n, sig, vec![table])
            .expect("meet tables are valid"),
    )
}
