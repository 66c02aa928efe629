//! Corpus-wide invariants of the algebra core and the commutator, plus
//! randomized laws. Expected values come from independent enumeration
//! oracles, never from the code paths under test.

use std::sync::Arc;

use proptest::prelude::*;

use centrex_core::algebra::{FiniteAlgebra, OpSymbol, Signature};
use centrex_core::commutator::{smith_commutator, CommutatorQuery};
use centrex_core::congruence::{
    all_congruences, all_partitions, are_permutable, congruence_generated, kernel_pair,
    quotient_by_congruence, Congruence,
};
use centrex_core::hom::{all_homomorphisms, is_isomorphic, Homomorphism};
use centrex_core::limits::{coequalizer, kernel_pair_span, pullback};
use centrex_core::varieties::{
    build_corpus, chain_meet_semilattice, relative_commutator_subgroup, CorpusSelector,
};

fn small_groups() -> Vec<Arc<FiniteAlgebra>> {
    build_corpus(CorpusSelector::Small).groups
}

fn surjections_between(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
) -> Vec<Homomorphism> {
    all_homomorphisms(a, b)
        .unwrap()
        .into_iter()
        .filter(|f| f.is_surjective())
        .collect()
}

#[test]
fn kernel_pair_of_quotient_projection_recovers_the_congruence() {
    for g in small_groups() {
        for theta in all_congruences(&g, 8).unwrap() {
            let (_, proj) = quotient_by_congruence(&g, &theta).unwrap();
            assert_eq!(kernel_pair(&proj), theta, "on {}", g.name());
        }
    }
}

#[test]
fn congruence_generation_is_minimal_against_partition_enumeration() {
    // Oracle: all compatible partitions, filtered for containment of the
    // generating pairs; the generated congruence must be their least element.
    let fixtures: Vec<Arc<FiniteAlgebra>> = vec![
        centrex_core::varieties::cyclic_group(4),
        centrex_core::varieties::cyclic_group(6),
        centrex_core::varieties::symmetric_group(3),
        chain_meet_semilattice(3),
        chain_meet_semilattice(4),
    ];
    for alg in fixtures {
        let congs = all_congruences(&alg, 6).unwrap();
        let n = alg.size();
        let pair_sets: Vec<Vec<(usize, usize)>> = vec![
            vec![],
            vec![(0, 1)],
            vec![(0, n - 1)],
            vec![(1, 2), (0, 1)],
        ];
        for pairs in pair_sets {
            let generated = congruence_generated(&alg, &pairs).unwrap();
            let containing: Vec<&Congruence> = congs
                .iter()
                .filter(|c| pairs.iter().all(|&(x, y)| c.related(x, y)))
                .collect();
            // Least element: the generated congruence is one of them and
            // refines all of them.
            assert!(containing.iter().any(|c| **c == generated), "on {}", alg.name());
            for c in containing {
                assert!(generated.refines(c), "on {}", alg.name());
            }
        }
    }
}

#[test]
fn pullback_carrier_is_exactly_the_matching_pairs() {
    let z8 = centrex_core::varieties::cyclic_group(8);
    let z4 = centrex_core::varieties::cyclic_group(4);
    let z2 = centrex_core::varieties::cyclic_group(2);
    let f = Homomorphism::new(z8.clone(), z2.clone(), (0..8).map(|x| x % 2).collect()).unwrap();
    let g = Homomorphism::new(z4.clone(), z2.clone(), (0..4).map(|x| x % 2).collect()).unwrap();
    let pb = pullback(&f, &g).unwrap();
    let mut expected = Vec::new();
    for a in 0..8u32 {
        for c in 0..4u32 {
            if a % 2 == c % 2 {
                expected.push((a, c));
            }
        }
    }
    assert_eq!(pb.pairs(), expected.as_slice());
    assert!(centrex_core::hom::check_homomorphism(&pb.proj1).unwrap());
    assert!(centrex_core::hom::check_homomorphism(&pb.proj2).unwrap());
}

#[test]
fn coequalizer_of_kernel_pairs_recovers_targets_corpus_wide() {
    let groups = small_groups();
    for a in &groups {
        for b in &groups {
            if b.size() > a.size() {
                continue;
            }
            for f in surjections_between(a, b) {
                let (pb, _) = kernel_pair_span(&f).unwrap();
                let (q, _) = coequalizer(&pb.proj1, &pb.proj2).unwrap();
                assert!(is_isomorphic(&q, b).unwrap(), "{} -> {}", a.name(), b.name());
            }
        }
    }
}

#[test]
fn commutator_is_monotone_and_below_the_meet() {
    for g in small_groups() {
        if g.size() > 8 {
            continue;
        }
        let congs = all_congruences(&g, 8).unwrap();
        for r in &congs {
            for s in &congs {
                let bracket = smith_commutator(
                    &CommutatorQuery::new(g.clone(), r.clone(), s.clone()).unwrap(),
                )
                .unwrap()
                .congruence;
                // Sub-meet.
                assert!(bracket.refines(&r.meet(s).unwrap()), "sub-meet fails on {}", g.name());
                // Monotone in both arguments: compare against all coarser pairs.
                for r2 in congs.iter().filter(|r2| r.refines(r2)) {
                    for s2 in congs.iter().filter(|s2| s.refines(s2)) {
                        let bigger = smith_commutator(
                            &CommutatorQuery::new(g.clone(), r2.clone(), s2.clone()).unwrap(),
                        )
                        .unwrap()
                        .congruence;
                        assert!(
                            bracket.refines(&bigger),
                            "monotonicity fails on {}",
                            g.name()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn commutator_is_symmetric_on_groups() {
    for g in small_groups() {
        let congs = all_congruences(&g, 8).unwrap();
        for r in &congs {
            for s in &congs {
                let rs = smith_commutator(
                    &CommutatorQuery::new(g.clone(), r.clone(), s.clone()).unwrap(),
                )
                .unwrap()
                .congruence;
                let sr = smith_commutator(
                    &CommutatorQuery::new(g.clone(), s.clone(), r.clone()).unwrap(),
                )
                .unwrap()
                .congruence;
                assert_eq!(rs, sr, "symmetry fails on {}", g.name());
            }
        }
    }
}

#[test]
fn kernel_bracket_identity_block_matches_the_subgroup_oracle_corpus_wide() {
    let groups = small_groups();
    for a in &groups {
        for b in &groups {
            if b.size() > a.size() {
                continue;
            }
            for f in surjections_between(a, b) {
                let theta = kernel_pair(&f);
                let total = Congruence::total(a.clone());
                let bracket =
                    smith_commutator(&CommutatorQuery::new(a.clone(), theta, total).unwrap())
                        .unwrap()
                        .congruence;
                let e = a.constant(2);
                let id_block: Vec<usize> =
                    (0..a.size()).filter(|&x| bracket.related(x, e)).collect();
                let kernel = centrex_core::varieties::kernel_subset(&f);
                let oracle = relative_commutator_subgroup(a, &kernel).unwrap();
                assert_eq!(id_block, oracle, "{} -> {}", a.name(), b.name());
            }
        }
    }
}

#[test]
fn every_small_group_passes_the_permutability_audit() {
    for g in small_groups() {
        if g.size() <= 8 {
            assert!(centrex_core::commutator::maltsev_audit(&g).unwrap(), "{}", g.name());
        }
    }
}

#[test]
fn abelianization_is_idempotent_corpus_wide() {
    for g in small_groups() {
        let (q, _) = centrex_core::commutator::abelianization_reflector(&g).unwrap();
        let (_, unit2) = centrex_core::commutator::abelianization_reflector(&q).unwrap();
        assert!(unit2.is_bijective(), "{}", g.name());
    }
}

/// Random small algebras with one binary and one unary operation.
fn arb_algebra(max_size: usize) -> impl Strategy<Value = Arc<FiniteAlgebra>> {
    (2..=max_size).prop_flat_map(|n| {
        let table2 = proptest::collection::vec(0..n, n * n);
        let table1 = proptest::collection::vec(0..n, n);
        (Just(n), table2, table1).prop_map(|(n, t2, t1)| {
            let sig = Arc::new(Signature::new(vec![
                OpSymbol::new("f", 2),
                OpSymbol::new("u", 1),
            ]));
            Arc::new(FiniteAlgebra::from_usize_tables("rand", n, sig, vec![t2, t1]).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_congruence_is_compatible_and_contains_the_pairs(
        alg in arb_algebra(5),
        seed in proptest::collection::vec((0usize..5, 0usize..5), 0..4),
    ) {
        let pairs: Vec<(usize, usize)> = seed
            .into_iter()
            .map(|(x, y)| (x % alg.size(), y % alg.size()))
            .collect();
        let theta = congruence_generated(&alg, &pairs).unwrap();
        prop_assert!(theta.is_compatible());
        for &(x, y) in &pairs {
            prop_assert!(theta.related(x, y));
        }
        // Minimality against the enumeration oracle: among all compatible
        // partitions containing the pairs, theta is present and least.
        let candidates: Vec<Congruence> = all_partitions(alg.size())
            .into_iter()
            .map(|p| Congruence::from_assignment(alg.clone(), &p).unwrap())
            .filter(|c| c.is_compatible())
            .filter(|c| pairs.iter().all(|&(x, y)| c.related(x, y)))
            .collect();
        prop_assert!(candidates.contains(&theta));
        for c in &candidates {
            prop_assert!(theta.refines(c));
        }
    }

    #[test]
    fn quotient_projection_has_the_congruence_as_kernel_pair(
        alg in arb_algebra(5),
        seed in proptest::collection::vec((0usize..5, 0usize..5), 0..3),
    ) {
        let pairs: Vec<(usize, usize)> = seed
            .into_iter()
            .map(|(x, y)| (x % alg.size(), y % alg.size()))
            .collect();
        let theta = congruence_generated(&alg, &pairs).unwrap();
        let (_, proj) = quotient_by_congruence(&alg, &theta).unwrap();
        prop_assert!(proj.is_surjective());
        prop_assert!(centrex_core::hom::check_homomorphism(&proj).unwrap());
        prop_assert_eq!(kernel_pair(&proj), theta);
    }

    #[test]
    fn relation_composition_of_congruences_contains_both(
        alg in arb_algebra(5),
        a in 0usize..5,
        b in 0usize..5,
    ) {
        let (a, b) = (a % alg.size(), b % alg.size());
        let r = congruence_generated(&alg, &[(a, b)]).unwrap();
        let delta = Congruence::diagonal(alg.clone());
        prop_assert!(are_permutable(&r, &delta).unwrap());
        let composed = centrex_core::congruence::relation_compose(&r, &r).unwrap();
        // R is transitive, so R∘R = R.
        prop_assert_eq!(composed, r.as_relation());
    }
}
