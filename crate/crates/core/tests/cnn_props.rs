use std::collections::BTreeSet;

use fibtree::cnn::{
    admissible_patterns, cnn_entropy, critical_a, degree1_discrepancies, is_linearly_separable, phase_diagram,
    realizable, region_index, spec_from_patterns, verify_mosaic_pattern, CnnTemplate, LocalPatternSet,
    MosaicPattern, Realization, RegionIndex, Sign,
};
use fibtree::lattice::NodeWord;
use fibtree::{Error, LN_GOLDEN};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The eight sign and magnitude orderings of `(a1, a2)`, from magnitudes 1 and 2.
fn orderings() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (m1, m2) in [(1.0, 2.0), (2.0, 1.0)] {
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                out.push((s1 * m1, s2 * m2));
            }
        }
    }
    out
}

fn generic_template() -> impl Strategy<Value = CnnTemplate> {
    (0usize..8, 0.1f64..5.0, 0.1f64..5.0, -8.0f64..8.0, -8.0f64..8.0).prop_filter_map(
        "off boundary",
        |(o, x, y, a, z)| {
            if (x - y).abs() < 1e-3 {
                return None;
            }
            let (big, small) = if x > y { (x, y) } else { (y, x) };
            let (s1, s2) = orderings()[o];
            let (m1, m2) = if s1.abs() > s2.abs() { (big, small) } else { (small, big) };
            let t = CnnTemplate::new(a, s1.signum() * m1, s2.signum() * m2, z);
            admissible_patterns(&t).ok().map(|_| t)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn entropy_is_zero_or_ln_golden(t in generic_template()) {
        let e = cnn_entropy(&t).unwrap();
        prop_assert!(e.value() == 0.0 || (e.value() - LN_GOLDEN).abs() < 1e-10);
        prop_assert!((e.formula - e.machinery).abs() < 1e-10);
    }

    #[test]
    fn region_counts_grow_with_self_feedback(t in generic_template(), da in 0.0f64..6.0) {
        let r0 = region_index(&t).unwrap();
        let t1 = CnnTemplate { a: t.a + da, ..t };
        if let Ok(r1) = region_index(&t1) {
            prop_assert!(r1.p >= r0.p && r1.q >= r0.q);
        }
    }

    #[test]
    fn realized_projections_pass_their_branch(t in generic_template()) {
        let b = admissible_patterns(&t).unwrap();
        let proper = |u: &BTreeSet<(Sign, Sign)>| !u.is_empty() && u.len() < 4;
        for u in [&b.plus, &b.minus] {
            if proper(u) {
                prop_assert!(is_linearly_separable(u).is_some());
            }
        }
        if t.z < 0.0 && proper(&b.minus) {
            prop_assert_eq!(realizable(&b), Some(Realization::Inv1));
        }
        if t.z > 0.0 && proper(&b.plus) {
            prop_assert!(realizable(&b).is_some());
        }
    }

    #[test]
    fn sampled_mosaics_verify(t in generic_template(), seed in any::<u64>()) {
        let b = admissible_patterns(&t).unwrap();
        let Ok(spec) = spec_from_patterns(&b) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let live = spec.live_symbols();
        let root = Sign::from_symbol(live[rng.gen_range(0..live.len())]);
        // top-down: pick an allowed child pair at every node
        let height = 5;
        let mut colors = std::collections::BTreeMap::new();
        let mut stack = vec![(NodeWord::root(), root)];
        while let Some((w, s)) = stack.pop() {
            colors.insert(w.clone(), s);
            if w.len() + 1 >= height {
                continue;
            }
            match w.child(2) {
                Some(w2) => {
                    let opts: Vec<_> = spec.triples_from(s.symbol()).collect();
                    let (c1, c2) = opts[rng.gen_range(0..opts.len())];
                    stack.push((w.child(1).unwrap(), Sign::from_symbol(c1)));
                    stack.push((w2, Sign::from_symbol(c2)));
                }
                None => {
                    let opts: Vec<_> = spec.pairs_from(s.symbol()).collect();
                    let c1 = opts[rng.gen_range(0..opts.len())];
                    stack.push((w.child(1).unwrap(), Sign::from_symbol(c1)));
                }
            }
        }
        let pattern = MosaicPattern::new(height, colors).unwrap();
        let check = verify_mosaic_pattern(&t, &pattern);
        prop_assert!(check.ok(), "{:?}", check.violations);
    }
}

#[test]
fn separable_subsets_classify_exactly() {
    let pairs = fibtree::cnn::CHILD_PAIRS;
    let mut separable = 0;
    for mask in 0u32..16 {
        let u: BTreeSet<_> = (0..4).filter(|b| mask >> b & 1 == 1).map(|b| pairs[b]).collect();
        // the two diagonals of the square
        let xor = u.len() == 2 && u.iter().all(|&(x, y)| u.contains(&(x.flip(), y.flip())));
        let expected = !u.is_empty() && u.len() < 4 && !xor;
        assert_eq!(is_linearly_separable(&u).is_some(), expected, "{u:?}");
        separable += expected as usize;
    }
    assert_eq!(separable, 12);
}

#[test]
fn each_ordering_realizes_twenty_five_regions() {
    let mut families: BTreeSet<(usize, Vec<String>)> = BTreeSet::new();
    for (idx, (a1, a2)) in orderings().into_iter().enumerate() {
        let d = phase_diagram(a1, a2, (-6.0, 6.0), (-6.0, 6.0), 0.1).unwrap();
        assert_eq!(d.regions().len(), 25, "ordering ({a1}, {a2})");
        for row in &d.rows {
            let b = admissible_patterns(&CnnTemplate::new(row.a, a1, a2, row.z)).unwrap();
            families.insert((idx, b.patterns().map(|p| p.to_string()).collect()));
        }
    }
    assert!(families.len() <= 200, "{}", families.len());
}

#[test]
fn grid_entropy_follows_the_critical_curve() {
    let step = 0.25;
    let d = phase_diagram(-1.0, 2.0, (-5.0, 5.0), (-5.0, 5.0), step).unwrap();
    assert!(!d.skipped.is_empty());
    for row in &d.rows {
        assert!(row.entropy == 0.0 || (row.entropy - LN_GOLDEN).abs() < 1e-10);
        if row.critical_distance > step {
            assert!(row.entropy > 0.0, "{row:?}");
        }
        if row.critical_distance < -step {
            assert_eq!(row.entropy, 0.0, "{row:?}");
        }
    }
}

#[test]
fn critical_pairs_have_both_entropies_nearby() {
    // every point on the curve away from corners separates the two values
    for (a1, a2) in orderings() {
        for i in 0..40 {
            let z = -4.9 + 0.2437 * i as f64;
            let a = critical_a(a1, a2, z);
            for eps in [1e-3, 1e-2] {
                let up = cnn_entropy(&CnnTemplate::new(a + eps, a1, a2, z));
                let down = cnn_entropy(&CnnTemplate::new(a - eps, a1, a2, z));
                if let (Ok(up), Ok(down)) = (up, down) {
                    assert!((up.value() - LN_GOLDEN).abs() < 1e-10);
                    assert_eq!(down.value(), 0.0);
                }
            }
        }
    }
}

#[test]
fn empty_and_full_pattern_sets() {
    let none = CnnTemplate::new(-10.0, -1.0, 2.0, 0.0);
    assert_eq!(spec_from_patterns(&admissible_patterns(&none).unwrap()), Err(Error::EmptyShift));
    assert_eq!(region_index(&none).unwrap(), RegionIndex { p: 0, q: 0 });
    assert_eq!(realizable(&LocalPatternSet::default()), None);
}

#[test]
fn semantics_agree_deep_inside_regions() {
    assert!(degree1_discrepancies(&CnnTemplate::new(10.0, 1.0, 1.0, 0.0)).is_empty());
    let mut seen = 0;
    for (a1, a2) in orderings() {
        for i in 0..30 {
            let t = CnnTemplate::new(-3.0 + 0.21 * i as f64, a1, a2, 0.37);
            if admissible_patterns(&t).is_ok() {
                for d in degree1_discrepancies(&t) {
                    assert_ne!(d.restriction, d.intrinsic);
                    seen += 1;
                }
            }
        }
    }
    // the detector is expected to fire somewhere in the sweep
    assert!(seen > 0);
}
