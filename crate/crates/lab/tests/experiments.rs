use synchrotree_lab::record::aggregate_csv;
use synchrotree_lab::{run, Cell, ExperimentConfig, KRule, LabError};

fn small_configs() -> Vec<ExperimentConfig> {
    vec![
        ExperimentConfig::new("tree_probability", vec![20, 50], 200, 1).with_words(&["aab"]),
        ExperimentConfig::new("moment_estimate", vec![16], 300, 2).with_k(KRule::Explicit(3)),
        ExperimentConfig::new("scaling", vec![32, 64], 20, 3).with_k(KRule::Epsilon { epsilon: 0.2 }),
        ExperimentConfig::new("goodness", vec![30, 60], 200, 4),
        ExperimentConfig::new("height", vec![100], 50, 5),
        ExperimentConfig::new("bijection_audit", vec![2], 1, 0).with_k(KRule::Explicit(2)),
    ]
}

#[test]
fn same_config_gives_identical_csv() {
    for cfg in small_configs() {
        let a = run(&cfg).unwrap().to_csv();
        assert_eq!(a, run(&cfg).unwrap().to_csv(), "{}", cfg.experiment);
    }
}

#[test]
fn serial_and_parallel_runs_agree() {
    for cfg in small_configs() {
        let mut serial = cfg.clone();
        serial.parallel = false;
        let (p, s) = (run(&cfg).unwrap(), run(&serial).unwrap());
        assert_eq!(p.to_csv(), s.to_csv(), "{}", cfg.experiment);
        assert_eq!(p.derived, s.derived);
    }
}

#[test]
fn aggregates_recompute_from_csv() {
    for cfg in small_configs() {
        let rec = run(&cfg).unwrap();
        assert_eq!(aggregate_csv(&rec.to_csv(), &rec.metrics).unwrap(), rec.aggregates, "{}", cfg.experiment);
    }
}

#[test]
fn single_trial_aggregates_equal_the_row() {
    let cfg = ExperimentConfig::new("height", vec![50], 1, 9);
    let rec = run(&cfg).unwrap();
    assert_eq!(rec.rows.len(), 1);
    let h = rec.values("height", Some(50))[0];
    let agg = rec.aggregates.iter().find(|a| a.metric == "height").unwrap();
    let s = &agg.summary;
    assert_eq!(s.count, 1);
    for x in [s.mean, s.min, s.q25, s.median, s.q75, s.max] {
        assert_eq!(x, h);
    }
    assert_eq!(s.stderr, 0.0);
}

#[test]
fn csv_header_names_every_column() {
    for cfg in small_configs() {
        let rec = run(&cfg).unwrap();
        let csv = rec.to_csv();
        let header = csv.lines().next().unwrap();
        assert_eq!(header, rec.columns.join(","));
        assert_eq!(csv.lines().count(), rec.rows.len() + 1);
    }
}

#[test]
fn records_write_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::new("goodness", vec![40], 50, 12);
    let rec = run(&cfg).unwrap();
    let path = dir.path().join("goodness.csv");
    let side = rec.write(&path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), rec.to_csv());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    let stored: ExperimentConfig = serde_json::from_value(v["config"].clone()).unwrap();
    assert_eq!(stored, cfg);
    assert_eq!(v["rows"], 50);

    let err = rec.write(&dir.path().join("missing").join("x.csv")).unwrap_err();
    assert!(matches!(&err, LabError::Io { path, .. } if path.contains("missing")), "{err}");
}

#[test]
fn unknown_experiments_are_rejected() {
    let cfg = ExperimentConfig::new("frobnicate", vec![10], 1, 0);
    assert!(matches!(run(&cfg), Err(LabError::UnknownExperiment(name)) if name == "frobnicate"));
}

#[test]
fn tree_probability_is_of_order_k_over_n() {
    // the root of a tree word sits at a uniform congruence, hence the factor k
    let (n, k) = (100, 8.0);
    let cfg = ExperimentConfig::new("tree_probability", vec![n], 100_000, 21).with_words(&["aabbabab"]);
    let rec = run(&cfg).unwrap();
    let scaled = rec.get("n_p_hat", Some(n)).unwrap() / k;
    assert!((0.2..=5.0).contains(&scaled), "{scaled}");
}

#[test]
fn self_conjugate_tree_word_is_rejected() {
    let cfg = ExperimentConfig::new("tree_probability", vec![10], 10, 0).with_words(&["abab"]);
    assert!(run(&cfg).is_err());
}

#[test]
fn moment_at_k_one_matches_the_cycle_good_count() {
    // every configuration is cycle-good at k = 1, so the estimate tends to a_1 = 2
    let n = 8;
    let cfg = ExperimentConfig::new("moment_estimate", vec![n], 100_000, 22).with_k(KRule::Explicit(1));
    let rec = run(&cfg).unwrap();
    assert_eq!(rec.get("p_cycle_good", Some(n)), Some(1.0));
    assert_eq!(rec.get("cycle_good_estimate", Some(n)), Some(2.0));
    let est = rec.get("estimate", Some(n)).unwrap();
    let se = rec.get("stderr", Some(n)).unwrap();
    assert!((est - 2.0).abs() < 6.0 * se, "{est} +- {se}");
    // the event at k = 1 is exactly "A is an a- or b-tree", probability 1/n
    let p = rec.get("p_hat", Some(n)).unwrap();
    assert!((p - 1.0 / n as f64).abs() < 0.01, "{p}");
}

#[test]
fn moment_estimate_grows_toward_two_to_the_k() {
    let cfg = ExperimentConfig::new("moment_estimate", vec![64, 256], 200_000, 3).with_k(KRule::Explicit(8));
    let rec = run(&cfg).unwrap();
    for name in ["estimate", "cycle_good_estimate"] {
        let (small, large) = (rec.get(name, Some(64)).unwrap(), rec.get(name, Some(256)).unwrap());
        assert!(small < large && large < 256.0, "{name}: {small} then {large}");
    }
}

#[test]
fn height_at_k_one_is_report_only() {
    let cfg = ExperimentConfig::new("height", vec![4], 200, 23).with_k(KRule::Explicit(1));
    let rec = run(&cfg).unwrap();
    assert_eq!(rec.rows.len(), 200);
    assert_eq!(rec.get("bound", Some(4)), Some(10.0));
    assert!(rec.get("exceedances", Some(4)).is_some());
    assert!(rec.values("height", None).iter().all(|&h| (0.0..=3.0).contains(&h)));
}

#[test]
fn goodness_vanishes_at_k_one() {
    let cfg = ExperimentConfig::new("goodness", vec![50], 500, 24).with_words(&["a", "b"]);
    let rec = run(&cfg).unwrap();
    assert_eq!(rec.get("p_not_cycle_good", Some(50)), Some(0.0));
}

#[test]
fn tiny_scaling_runs_stay_short() {
    let cfg = ExperimentConfig::new("scaling", vec![2], 50, 25).with_k(KRule::Epsilon { epsilon: 0.2 });
    let rec = run(&cfg).unwrap();
    let found = rec.column("found").unwrap();
    let length = rec.column("length").unwrap();
    for row in &rec.rows {
        if row[found] == Cell::Bool(true) {
            assert!(row[length].as_f64().unwrap() <= 2.0);
        }
    }
}
