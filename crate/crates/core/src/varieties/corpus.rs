//! The standard test corpus: every group of order at most 8 up to
//! isomorphism, plus larger groups behind the full selector, and small
//! commutative rings.

use std::sync::Arc;

use crate::algebra::FiniteAlgebra;

use super::groups::{
    cyclic_group, dihedral_group, direct_product_group, quaternion_group, symmetric_group,
};
use super::rings::{cyclic_ring, direct_product_ring, field_four};

/// Which corpus to build. `Full` adds the order-16 groups and S4; runs with
/// it are noticeably slower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusSelector {
    Small,
    Full,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub groups: Vec<Arc<FiniteAlgebra>>,
    pub rings: Vec<Arc<FiniteAlgebra>>,
}

/// Builds the corpus for a selector. Small: the 14 groups of order <= 8 up
/// to isomorphism and the rings Z/1..Z/12, Z/2 x Z/2, F4.
pub fn build_corpus(selector: CorpusSelector) -> Corpus {
    let z2 = cyclic_group(2);
    let z4 = cyclic_group(4);
    let mut groups = vec![
        cyclic_group(1),
        z2.clone(),
        cyclic_group(3),
        z4.clone(),
        direct_product_group(&z2, &z2),
        cyclic_group(5),
        cyclic_group(6),
        symmetric_group(3),
        cyclic_group(7),
        cyclic_group(8),
        direct_product_group(&z2, &z4),
        direct_product_group(&z2, &direct_product_group(&z2, &z2)),
        dihedral_group(4),
        quaternion_group(2),
    ];
    if selector == CorpusSelector::Full {
        groups.push(cyclic_group(16));
        groups.push(direct_product_group(&z4, &z4));
        groups.push(direct_product_group(&z2, &cyclic_group(8)));
        groups.push(dihedral_group(8));
        groups.push(quaternion_group(4));
        groups.push(symmetric_group(4));
    }
    let mut rings: Vec<Arc<FiniteAlgebra>> = (1..=12).map(cyclic_ring).collect();
    rings.push(direct_product_ring(&cyclic_ring(2), &cyclic_ring(2)));
    rings.push(field_four());
    Corpus { groups, rings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::is_isomorphic;
    use crate::varieties::groups::is_group;
    use crate::varieties::rings::is_ring;

    #[test]
    fn small_corpus_has_exactly_five_groups_of_order_eight() {
        let corpus = build_corpus(CorpusSelector::Small);
        let order8: Vec<_> = corpus.groups.iter().filter(|g| g.size() == 8).collect();
        assert_eq!(order8.len(), 5);
        // Pairwise non-isomorphic, verified by brute-force search.
        for i in 0..order8.len() {
            for j in (i + 1)..order8.len() {
                assert!(!is_isomorphic(order8[i], order8[j]).unwrap());
            }
        }
    }

    #[test]
    fn one_element_group_is_present() {
        let corpus = build_corpus(CorpusSelector::Small);
        assert!(corpus.groups.iter().any(|g| g.size() == 1));
    }

    #[test]
    fn every_member_passes_its_axioms() {
        let corpus = build_corpus(CorpusSelector::Small);
        for g in &corpus.groups {
            assert!(is_group(g), "{} fails group axioms", g.name());
        }
        for r in &corpus.rings {
            assert!(is_ring(r), "{} fails ring axioms", r.name());
        }
    }

    #[test]
    fn full_corpus_extends_the_small_one() {
        let small = build_corpus(CorpusSelector::Small);
        let full = build_corpus(CorpusSelector::Full);
        assert!(full.groups.len() > small.groups.len());
        assert!(full.groups.iter().any(|g| g.size() == 24));
        assert!(full.groups.iter().any(|g| g.size() == 16));
    }
}
