mod common;

use common::*;
use fibtree::lattice::{is_valid_node, LatticeConfig, NodeWord, RootType};
use fibtree::shift::{gamma_sequence, spec_from_vertex_matrices, viability_prune, MarkovFibSpec};
use fibtree::{count_colorings_dp, enumerate_colorings_naive, level_nodes, support, Error};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_gamma_matches(spec: &MarkovFibSpec, naive_depth: usize, dp_depth: usize) {
    let table = gamma_sequence(spec, dp_depth);
    for root in RootType::ALL {
        for s in 0..spec.k() {
            for n in 1..=dp_depth {
                let dp = count_colorings_dp(spec, root, n, s).unwrap();
                assert_eq!(table.get(root, s, n), &dp, "{spec} {root:?} symbol {s} height {n}: dp");
                if n <= naive_depth {
                    let naive = enumerate_colorings_naive(spec, root, n, s).unwrap();
                    assert_eq!(dp, naive, "{spec} {root:?} symbol {s} height {n}: naive");
                }
            }
        }
    }
}

#[test]
fn level_sizes_follow_fibonacci() {
    let sizes: Vec<usize> = (0..=20).map(|n| level_nodes(n).unwrap().len()).collect();
    assert_eq!(sizes[0], 1);
    assert_eq!(sizes[1], 2);
    for n in 2..sizes.len() {
        assert_eq!(sizes[n], sizes[n - 1] + sizes[n - 2]);
    }
    assert!(matches!(level_nodes(31), Err(Error::DepthCap { .. })));
}

#[test]
fn slices_are_prefix_closed_and_valid() {
    for root in RootType::ALL {
        for n in 1..=8 {
            let slice = support(root, n).unwrap();
            for w in &slice.nodes {
                assert!(w.len() < n);
                let mut absolute = slice.root_context().to_vec();
                absolute.extend_from_slice(w.letters());
                assert!(is_valid_node(&absolute).unwrap());
                let parent = &w.letters()[..w.len().saturating_sub(1)];
                assert!(slice.nodes.contains(&NodeWord::new(parent.to_vec()).unwrap()));
            }
        }
    }
}

#[test]
fn all_vertex_pairs_raw_and_pruned() {
    let ms = binary_2x2();
    for a1 in &ms {
        for a2 in &ms {
            assert_gamma_matches(&raw_vertex_spec(a1, a2), 4, 8);
            match spec_from_vertex_matrices(fibtree::Alphabet::numbered(2), a1, a2) {
                Ok(spec) => assert_gamma_matches(&spec, 4, 8),
                Err(e) => assert_eq!(e, Error::EmptyShift),
            }
        }
    }
}

#[test]
fn random_raw_specs_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let spec = random_raw_spec(&mut rng, 3);
        assert_gamma_matches(&spec, 4, 6);
        if let Ok((pruned, _)) = viability_prune(&spec) {
            assert_gamma_matches(&pruned, 4, 6);
        }
    }
}

#[test]
fn work_cap_is_enforced() {
    let cfg = LatticeConfig {
        work_cap: 100,
        ..LatticeConfig::default()
    };
    let spec = MarkovFibSpec::full(3);
    assert!(matches!(
        cfg.enumerate_colorings_naive(&spec, RootType::Epsilon, 4, 0),
        Err(Error::WorkCap { .. })
    ));
    assert!(cfg.count_colorings_dp(&spec, RootType::Epsilon, 4, 0).is_ok());
}

#[test]
fn vertex_two_step_identity() {
    // for vertex shifts the two-rooted count is a row sum of A1 over epsilon counts
    let ms = binary_2x2();
    for a1 in &ms {
        for a2 in &ms {
            let Ok(spec) = spec_from_vertex_matrices(fibtree::Alphabet::numbered(2), a1, a2) else {
                continue;
            };
            let t = gamma_sequence(&spec, 8);
            for n in 2..=8 {
                for i in spec.live_symbols() {
                    let expect: BigUint = (0..2)
                        .filter(|&j| a1.get(i, j))
                        .map(|j| t.epsilon(j, n - 1).clone())
                        .sum();
                    assert_eq!(t.two_rooted(i, n), &expect);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn counts_are_monotone_in_the_triple_set(seed in any::<u64>(), extra in any::<(u8, u8, u8)>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_raw_spec(&mut rng, 3);
        let k = spec.k();
        let mut bigger: Vec<_> = spec.triples().iter().copied().collect();
        bigger.push((extra.0 as usize % k, extra.1 as usize % k, extra.2 as usize % k));
        let bigger = MarkovFibSpec::unpruned(spec.alphabet().clone(), bigger, fibtree::Provenance::Raw).unwrap();
        let (small, large) = (gamma_sequence(&spec, 6), gamma_sequence(&bigger, 6));
        for root in RootType::ALL {
            for s in 0..k {
                for n in 1..=6 {
                    prop_assert!(small.get(root, s, n) <= large.get(root, s, n));
                }
            }
        }
    }

    #[test]
    fn pruning_is_idempotent_and_keeps_live_counts_positive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_raw_spec(&mut rng, 3);
        if let Ok((pruned, _)) = viability_prune(&spec) {
            let (again, report) = viability_prune(&pruned).unwrap();
            prop_assert!(report.removed.is_empty());
            prop_assert_eq!(&again, &pruned);
            let t = gamma_sequence(&pruned, 10);
            for s in pruned.live_symbols() {
                for n in 1..=10 {
                    prop_assert!(t.epsilon(s, n) > &BigUint::from(0u8));
                    prop_assert!(t.two_rooted(s, n) > &BigUint::from(0u8));
                }
            }
        }
    }

    #[test]
    fn naive_and_dp_agree(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_raw_spec(&mut rng, 3);
        for root in RootType::ALL {
            for s in 0..spec.k() {
                prop_assert_eq!(
                    enumerate_colorings_naive(&spec, root, n, s).unwrap(),
                    count_colorings_dp(&spec, root, n, s).unwrap()
                );
            }
        }
    }
}
