use noisyqml::cost::*;

#[test]
fn device_run_cost_to_the_cent() {
    let minutes = 14.0 * 60.0 + 11.0;
    assert_eq!(minutes, 851.0);
    let usd = qpu_cost(minutes, 96.0).unwrap();
    assert_eq!((usd * 100.0).round() as i64, 8_169_600);
}

#[test]
fn processed_fraction() {
    let p = CostParams {
        rate: 96.0,
        per_sample_seconds: 133.0,
        shots_per_sample: None,
    };
    let e = extrapolate_cost(1815, &p, Some(31256)).unwrap();
    let pct = e.fraction.unwrap() * 100.0;
    assert_eq!(format!("{:.3}", (pct * 1000.0).trunc() / 1000.0), "5.806");
}

#[test]
fn full_dataset_extrapolation() {
    let p = CostParams {
        rate: 96.0,
        per_sample_seconds: 133.0,
        shots_per_sample: None,
    };
    let e = extrapolate_cost(31256, &p, None).unwrap();
    assert!((e.usd - 31256.0 * 133.0 / 60.0 * 96.0).abs() < 1e-6);
    assert!((e.usd / 1e6 - 6.65).abs() < 0.01);
    let notes = consistency_notes(851.0, 1815, 133.0);
    assert_eq!(notes.len(), 1);
    assert!(notes[0].contains("28.1 s/sample"), "{}", notes[0]);
    assert!(consistency_notes(851.0, 1815, 28.13).is_empty());
}

#[test]
fn linear_in_samples() {
    let p = CostParams {
        rate: 96.0,
        per_sample_seconds: 17.5,
        shots_per_sample: Some(1000),
    };
    for (a, b) in [(1u64, 2u64), (100, 37), (1815, 29441)] {
        let ab = extrapolate_cost(a + b, &p, None).unwrap().usd;
        let sum = extrapolate_cost(a, &p, None).unwrap().usd + extrapolate_cost(b, &p, None).unwrap().usd;
        assert!((ab - sum).abs() < 1e-9 * ab);
    }
    let one = CostParams {
        rate: 96.0,
        per_sample_seconds: 60.0,
        shots_per_sample: None,
    };
    assert_eq!(extrapolate_cost(1, &one, None).unwrap().usd, 96.0);
}

#[test]
fn invalid_inputs() {
    assert!(qpu_cost(-1.0, 96.0).is_err());
    let zero = CostParams {
        rate: 96.0,
        per_sample_seconds: 0.0,
        shots_per_sample: None,
    };
    assert!(extrapolate_cost(10, &zero, None).is_err());
}
