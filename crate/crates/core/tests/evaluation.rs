mod common;

use common::*;
use jmpt::datacube::BinaryMask;
use jmpt::detectors::ChangeMap;
use jmpt::evaluation::*;
use proptest::prelude::*;
use rand::Rng;

/// Random scores on a coarse grid (so ties occur) and labels containing
/// both classes plus some ignored pixels.
fn instance(seed: u64, n: usize) -> (ChangeMap, BinaryMask) {
    let mut r = rng(seed);
    let scores: Vec<f64> = (0..n)
        .map(|_| r.random_range(0..20) as f64 * 0.25)
        .collect();
    let mut labels: Vec<u8> = (0..n)
        .map(|_| match r.random_range(0..10) {
            0..=2 => BinaryMask::CHANGED,
            3..=8 => BinaryMask::UNCHANGED,
            _ => BinaryMask::IGNORE,
        })
        .collect();
    labels[0] = BinaryMask::CHANGED;
    labels[1] = BinaryMask::UNCHANGED;
    (
        ChangeMap::new(1, n, scores).unwrap(),
        BinaryMask::new(1, n, labels).unwrap(),
    )
}

#[test]
fn roc_matches_exhaustive_recount() {
    for seed in 0..100 {
        let (map, mask) = instance(seed, 50);
        let (pos, neg) = split_by_class(&map, &mask).unwrap();
        let curve = roc_curve(&map, &mask).unwrap();
        let want = exhaustive_roc(&pos, &neg);
        assert_eq!(curve.points.len(), want.len());
        for (g, w) in curve.points.iter().zip(&want) {
            assert!((g.0 - w.0).abs() < 1e-15 && (g.1 - w.1).abs() < 1e-15);
        }
        assert_eq!(*curve.points.last().unwrap(), (1.0, 1.0));
    }
}

#[test]
fn auc_matches_pair_counting() {
    for seed in 0..40 {
        let n = 10 + (seed as usize * 25) % 990;
        let (map, mask) = instance(seed, n);
        let (pos, neg) = split_by_class(&map, &mask).unwrap();
        let got = auc(&roc_curve(&map, &mask).unwrap());
        assert!((got - pair_counting_auc(&pos, &neg)).abs() < 1e-9, "n={n}");
    }
}

#[test]
fn roc_is_monotone_and_in_unit_square() {
    for seed in 0..50 {
        let (map, mask) = instance(seed, 200);
        let curve = roc_curve(&map, &mask).unwrap();
        assert_eq!(curve.points[0], (0.0, 0.0));
        assert_eq!(curve.thresholds[0], f64::INFINITY);
        for w in curve.points.windows(2) {
            assert!(w[1].0 >= w[0].0 && w[1].1 >= w[0].1);
        }
        for t in curve.thresholds.windows(2) {
            assert!(t[1] < t[0]);
        }
        let a = auc(&curve);
        assert!((0.0..=1.0).contains(&a));
    }
}

#[test]
fn perfect_and_inverted_detectors() {
    let mask = BinaryMask::new(1, 4, vec![1, 1, 0, 0]).unwrap();
    let good = ChangeMap::new(1, 4, vec![3.0, 2.0, 1.0, 0.0]).unwrap();
    let bad = ChangeMap::new(1, 4, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    let flat = ChangeMap::new(1, 4, vec![1.0; 4]).unwrap();
    assert_eq!(auc(&roc_curve(&good, &mask).unwrap()), 1.0);
    assert_eq!(auc(&roc_curve(&bad, &mask).unwrap()), 0.0);
    assert_eq!(auc(&roc_curve(&flat, &mask).unwrap()), 0.5);
}

#[test]
fn missing_class_is_an_error() {
    let map = ChangeMap::new(1, 3, vec![1.0, 2.0, 3.0]).unwrap();
    let only_changed = BinaryMask::new(1, 3, vec![1, 1, 255]).unwrap();
    let only_unchanged = BinaryMask::new(1, 3, vec![0, 255, 0]).unwrap();
    assert!(roc_curve(&map, &only_changed).is_err());
    assert!(roc_curve(&map, &only_unchanged).is_err());
    assert!(separability(&map, &only_changed).is_err());
    let wrong_shape = BinaryMask::new(3, 1, vec![0, 1, 0]).unwrap();
    assert!(roc_curve(&map, &wrong_shape).is_err());
}

fn arb_instance() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
    (2usize..120)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.0f64..5.0, n),
                prop::collection::vec(prop::sample::select(vec![0u8, 1, 255]), n),
            )
        })
        .prop_map(|(s, mut l)| {
            l[0] = 0;
            l[1] = 1;
            (s, l)
        })
}

proptest! {
    #[test]
    fn auc_invariant_under_increasing_maps((scores, labels) in arb_instance()) {
        let n = scores.len();
        let mask = BinaryMask::new(1, n, labels).unwrap();
        let base = auc(&roc_curve(&ChangeMap::new(1, n, scores.clone()).unwrap(), &mask).unwrap());
        for f in [|x: f64| 2.0 * x + 1.0, |x: f64| x * x * x] {
            let m = ChangeMap::new(1, n, scores.iter().map(|&x| f(x)).collect()).unwrap();
            prop_assert!((auc(&roc_curve(&m, &mask).unwrap()) - base).abs() < 1e-12);
        }
    }

    #[test]
    fn percentiles_scale_with_scores((scores, labels) in arb_instance(), k in 0.01f64..100.0) {
        let n = scores.len();
        let mask = BinaryMask::new(1, n, labels).unwrap();
        let a = separability(&ChangeMap::new(1, n, scores.clone()).unwrap(), &mask).unwrap();
        let b = separability(&ChangeMap::new(1, n, scores.iter().map(|x| k * x).collect()).unwrap(), &mask).unwrap();
        for (x, y) in [
            (a.changed.p0, b.changed.p0), (a.changed.p20, b.changed.p20), (a.changed.p50, b.changed.p50),
            (a.changed.p80, b.changed.p80), (a.changed.p100, b.changed.p100),
            (a.unchanged.p0, b.unchanged.p0), (a.unchanged.p50, b.unchanged.p50), (a.unchanged.p100, b.unchanged.p100),
        ] {
            prop_assert!((k * x - y).abs() <= 1e-9 * y.abs().max(1.0));
        }
        prop_assert!(a.changed.p0 <= a.changed.p20 && a.changed.p20 <= a.changed.p50);
        prop_assert!(a.changed.p50 <= a.changed.p80 && a.changed.p80 <= a.changed.p100);
    }

    #[test]
    fn percentile_binarization_marks_top_scores(scores in prop::collection::vec(0.0f64..5.0, 1..80), q in 0.0f64..=100.0) {
        let n = scores.len();
        let map = ChangeMap::new(1, n, scores.clone()).unwrap();
        let mask = binarize(&map, BinarizePolicy::Percentile(q)).unwrap();
        // monotone: any pixel scoring at least a changed pixel is changed
        let cut = scores.iter().zip(mask.labels()).filter(|(_, &l)| l == 1).map(|(s, _)| *s).fold(f64::INFINITY, f64::min);
        for (s, &l) in scores.iter().zip(mask.labels()) {
            prop_assert_eq!(l == 1, *s >= cut);
        }
        prop_assert!(mask.changed_count() >= 1);
    }
}

#[test]
fn otsu_separates_two_clusters() {
    let mut scores = vec![0.1; 30];
    scores.extend(vec![0.9; 10]);
    let map = ChangeMap::new(4, 10, scores).unwrap();
    let mask = binarize(&map, BinarizePolicy::Otsu).unwrap();
    assert_eq!(mask.changed_count(), 10);
    assert!(mask.labels()[30..].iter().all(|&l| l == 1));
    let flat = ChangeMap::new(2, 2, vec![0.3; 4]).unwrap();
    assert_eq!(
        binarize(&flat, BinarizePolicy::Otsu)
            .unwrap()
            .changed_count(),
        0
    );
}
