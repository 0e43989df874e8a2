use cccs_wasm::{decode_cycle_json, overhead_table_json, patch_json, MAX_DISTANCE};
use serde_json::Value;

#[test]
fn patch_has_colored_faces() {
    let v: Value = serde_json::from_str(&patch_json("cccs-666", 3).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 7);
    assert!(v["faces"].as_array().unwrap().iter().all(|f| f["corners"].as_array().unwrap().len() >= 2));
    assert!(patch_json("rtcs", 3).is_err());
    assert!(patch_json("cccs-488", MAX_DISTANCE + 2).is_err());
}

#[test]
fn decoded_cycle_is_deterministic_and_consistent() {
    let a = decode_cycle_json("cccs-488", 5, 2, 0.02, 11, 3).unwrap();
    assert_eq!(a, decode_cycle_json("cccs-488", 5, 2, 0.02, 11, 3).unwrap());
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["layers"], 5);
    let quiet: Value = serde_json::from_str(&decode_cycle_json("rtcs", 3, 2, 1e-9, 1, 0).unwrap()).unwrap();
    assert!(quiet["errors"].as_array().unwrap().is_empty());
    assert_eq!(quiet["logical"], false);
    assert!(decode_cycle_json("cccs-488", 4, 2, 0.01, 1, 0).is_err());
}

#[test]
fn overhead_table_lists_three_rows() {
    let v: Value = serde_json::from_str(&overhead_table_json().unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[1]["cz_per_logical"], 10.5);
}
