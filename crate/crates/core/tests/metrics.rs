use noisyqml::metrics::*;
use proptest::prelude::*;

fn records(outputs: &[f64], labels: &[u8]) -> Vec<EvaluationRecord> {
    outputs
        .iter()
        .zip(labels)
        .map(|(&y, &l)| EvaluationRecord::new(y, l, "sim").unwrap())
        .collect()
}

fn record_sets() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
    (1usize..60).prop_flat_map(|n| {
        (
            prop::collection::vec((0.0f64..=1.0).prop_filter("off the tie", |y| *y != 0.5), n),
            prop::collection::vec(0u8..=1, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn flipping_labels_and_outputs_is_a_symmetry((ys, ls) in record_sets()) {
        let a = metrics_report(&records(&ys, &ls)).unwrap();
        let ys2: Vec<f64> = ys.iter().map(|y| 1.0 - y).collect();
        let ls2: Vec<u8> = ls.iter().map(|l| 1 - l).collect();
        let b = metrics_report(&records(&ys2, &ls2)).unwrap();
        prop_assert!((a.sureness - b.sureness).abs() < 1e-12);
        prop_assert!((a.confidence_mean - b.confidence_mean).abs() < 1e-12);
        prop_assert!((a.confidence_spread - b.confidence_spread).abs() < 1e-12);
        prop_assert_eq!(a.accuracy, b.accuracy);
        prop_assert_eq!(a.imbalance, -b.imbalance);
    }

    #[test]
    fn flipping_labels_only_complements_accuracy((ys, ls) in record_sets()) {
        let recs = records(&ys, &ls);
        let a = metrics_report(&recs).unwrap();
        let flipped: Vec<EvaluationRecord> = recs.iter().map(|r| r.with_flipped_label()).collect();
        let b = metrics_report(&flipped).unwrap();
        prop_assert!((a.accuracy + b.accuracy - 1.0).abs() < 1e-12);
        prop_assert_eq!(a.sureness, b.sureness);
    }

    #[test]
    fn metrics_stay_in_range((ys, ls) in record_sets()) {
        let r = metrics_report(&records(&ys, &ls)).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.sureness));
        prop_assert!((0.0..=1.0).contains(&r.confidence_mean));
        prop_assert!(r.confidence_spread >= 0.0);
        prop_assert!(r.imbalance.unsigned_abs() <= r.n_samples);
        prop_assert!((r.accuracy - (r.n0 + r.n1) as f64 / r.n_samples as f64).abs() < 1e-12);
    }
}

#[test]
fn reference_counts_are_consistent() {
    let mut preds = Vec::new();
    let mut labels = Vec::new();
    // 557 correct class-0, 667 correct class-1, the rest wrong, 1815 total.
    preds.extend([0u8; 557]);
    labels.extend([0u8; 557]);
    preds.extend([1u8; 667]);
    labels.extend([1u8; 667]);
    preds.extend(vec![1u8; 1815 - 1224]);
    labels.extend(vec![0u8; 1815 - 1224]);
    let c = imbalance(&preds, &labels).unwrap();
    assert_eq!((c.n0, c.n1, c.imbalance()), (557, 667, -110));
    let acc = accuracy(&preds, &labels).unwrap();
    assert_eq!(acc, (557.0 + 667.0) / 1815.0);
    assert_eq!(format!("{acc:.3}"), "0.674");

    let device = ClassCounts { n0: 192, n1: 839 };
    assert_eq!(device.imbalance(), -647);
    let device_acc: f64 = (192.0 + 839.0) / 1815.0;
    assert_eq!(format!("{device_acc:.3}"), "0.568");
    assert!((device_acc - 0.567).abs() < 1.5e-3);
}

#[test]
fn constant_classifier_on_balanced_set() {
    let labels: Vec<u8> = (0..1000).map(|i| (i % 2) as u8).collect();
    for y in [0.2, 0.9] {
        let r = metrics_report(&records(&vec![y; 1000], &labels)).unwrap();
        assert_eq!(r.accuracy, 0.5);
        assert_eq!(r.imbalance.unsigned_abs(), 500);
    }
}

#[test]
fn report_fields_match_independent_recomputation() {
    let ys = [0.9, 0.2, 0.6, 0.45, 0.7, 0.1];
    let ls = [1u8, 0, 0, 0, 1, 1];
    let r = metrics_report(&records(&ys, &ls)).unwrap();
    // Predictions 1,0,1,0,1,0: correct at 0,1,3,4.
    assert_eq!((r.n0, r.n1, r.imbalance), (2, 2, 0));
    assert!((r.accuracy - 4.0 / 6.0).abs() < 1e-15);
    let s: f64 = ys.iter().map(|y| (y - 0.5f64).abs()).sum::<f64>() * 2.0 / 6.0;
    assert!((r.sureness - s).abs() < 1e-15);
    let c: Vec<f64> = ys.iter().zip(ls).map(|(y, l)| 1.0 - (f64::from(l) - y).abs()).collect();
    let mean = c.iter().sum::<f64>() / 6.0;
    let var = c.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 5.0;
    assert!((r.confidence_mean - mean).abs() < 1e-15);
    assert!((r.confidence_spread - var.sqrt()).abs() < 1e-15);

    let json = serde_json::to_string(&r).unwrap();
    let back: MetricsReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    let csv = reports_to_csv(&[r]).unwrap();
    assert!(csv.starts_with("backend,accuracy,sureness,confidence_mean,confidence_spread,n0,n1,imbalance,n_samples\n"));
}

#[test]
fn single_correct_class_zero_record() {
    let r = metrics_report(&records(&[0.1], &[0])).unwrap();
    assert_eq!((r.n0, r.n1, r.imbalance), (1, 0, 1));
    assert_eq!(r.confidence_spread, 0.0);
}

#[test]
fn mixed_backends_and_empty_input_are_rejected() {
    let recs = vec![
        EvaluationRecord::new(0.7, 1, "a").unwrap(),
        EvaluationRecord::new(0.7, 1, "b").unwrap(),
    ];
    assert!(metrics_report(&recs).is_err());
    assert!(metrics_report(&[]).is_err());
    assert!(sureness(&[]).is_err());
    assert!(confidence(&[0.5], &[1, 0]).is_err());
}
