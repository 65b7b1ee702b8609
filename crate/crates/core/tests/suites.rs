use banachgeo::suites::{preset, run_suite, run_sweep, SUITES};
use banachgeo::{GeoError, Status};
use serde_json::json;

#[test]
fn quick_presets_have_no_failures() {
    for name in ["lemma2.3", "lemma2.4", "lemma1.7", "thm2.6"] {
        let r = run_suite(name, &preset(name, "quick").unwrap()).unwrap();
        assert!(!r.verdicts.is_empty(), "{name}");
        assert_eq!(r.count(Status::Fail), 0, "{name}: {}", r.to_json());
        assert_eq!(r.exit_code(true), 0, "{name}");
    }
}

#[test]
fn every_suite_has_presets() {
    for name in SUITES {
        assert!(preset(name, "default").is_ok());
        assert!(preset(name, "quick").is_ok());
    }
}

#[test]
fn reports_embed_the_resolved_config() {
    let r = run_suite("lemma2.3", &json!({"instances": 2, "seed": 9})).unwrap();
    assert_eq!(r.config["seed"], 9);
    assert_eq!(r.config["instances"], 2);
    assert_eq!(r.config["closed_form_tol"], 1e-8);
}

#[test]
fn same_seed_same_payload() {
    let cfg = json!({"instances": 4, "seed": 3});
    let a = run_suite("lemma2.4", &cfg).unwrap();
    let b = run_suite("lemma2.4", &cfg).unwrap();
    assert_eq!(a.payload_json(), b.payload_json());
    let c = run_suite("lemma2.4", &json!({"instances": 4, "seed": 4})).unwrap();
    assert_ne!(a.payload_json(), c.payload_json());
}

#[test]
fn bad_fields_are_named() {
    match run_suite("thm1.3", &json!({"p": 0.5})) {
        Err(GeoError::Spec { field, .. }) => assert_eq!(field, "config.p"),
        other => panic!("{other:?}"),
    }
    match run_suite("thm1.3", &json!({"budget": "enormous"})) {
        Err(GeoError::Spec { field, .. }) => assert_eq!(field, "config.budget"),
        other => panic!("{other:?}"),
    }
    match run_sweep(&json!({"kind": "santalo", "dims": [2], "ps": ["x"]})) {
        Err(GeoError::Spec { field, .. }) => assert_eq!(field, "grid.ps[0]"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn santalo_sweep_has_fifteen_rows() {
    let r = run_sweep(&json!({"kind": "santalo", "dims": [2, 3, 4, 5, 6], "ps": [1, 2, "inf"]})).unwrap();
    assert_eq!(r.verdicts.len(), 15);
    // n = 2 sits inside the band; larger n leave it
    assert!(r.verdicts.iter().filter(|v| v.name.ends_with("^2")).all(|v| v.status == Status::Pass));
    assert!(r.verdicts.iter().filter(|v| v.name.ends_with("^6")).all(|v| v.status == Status::Fail));
}

#[test]
fn product_sweep_populates_both_ratios() {
    let r = run_sweep(&json!({"kind": "thm2.6", "dims": [2, 3], "ps": [2], "samples": 100000})).unwrap();
    for v in &r.verdicts {
        assert!(v.observed.contains_key("L_obs") && v.observed.contains_key("R_obs"), "{}", v.name);
    }
}

#[test]
fn volume_sweep_rows_pass() {
    let r = run_sweep(&json!({"kind": "volume", "dims": [2, 3], "ps": [1, 2], "samples": 200000})).unwrap();
    assert_eq!(r.count(Status::Pass), 4, "{}", r.to_json());
}
