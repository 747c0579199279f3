use ansl_wasm_demo::{degenerate_study_json, liouville_json, torus_jet_json};
use serde_json::Value;

#[test]
fn torus_jet_boundary_values() {
    let v: Value = serde_json::from_str(&torus_jet_json(1.0, 2.0, 3).unwrap()).unwrap();
    assert!((v["N"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["L"][1].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["M"].as_array().unwrap().len(), 4);
    assert!(torus_jet_json(3.0, 2.0, 3).is_err());
}

#[test]
fn liouville_table_decays() {
    let v: Value = serde_json::from_str(&liouville_json(2.0, &[4.0, 8.0]).unwrap()).unwrap();
    assert_eq!(v["monotone"], true);
    assert!(liouville_json(2.0, &[100.0]).is_err());
}

#[test]
fn degenerate_study_converges() {
    let v: Value = serde_json::from_str(&degenerate_study_json(3.0, 64).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let e: Vec<f64> = rows.iter().map(|r| r["error"].as_f64().unwrap()).collect();
    assert!((e[1] / e[2]).log2() > 1.9);
    assert!(degenerate_study_json(3.0, 4).is_err());
    assert!(degenerate_study_json(1.0, 32).is_err());
}
