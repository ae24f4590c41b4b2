//! Byte-stable serialization fixtures. Regenerate with UPDATE_GOLDEN=1
//! after a deliberate format change; the version field must move with
//! any layout change.

use bergman_core::multiplicity::weight_census;
use bergman_core::persist::{census_to_csv, census_to_json, rule_from_json, rule_to_json};
use bergman_core::quadrature::torus_rule;
use std::fs;
use std::path::PathBuf;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_golden(name: &str, got: &str) {
    let path = golden_path(name);
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, got).unwrap();
    }
    let want = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing fixture {name}; run with UPDATE_GOLDEN=1"));
    assert_eq!(got, want, "fixture {name} drifted");
}

#[test]
fn torus_rule_serialization_is_byte_stable() {
    let rule = torus_rule(1, 4).unwrap();
    let json = rule_to_json(&rule).unwrap();
    check_golden("torus_rule_1_4.json", &json);
    // And the fixture still loads back into a working rule.
    let loaded = rule_from_json(&json).unwrap();
    assert_eq!(loaded.nodes.len(), 4);
    let (one, _) = loaded
        .integrate(&|p: &bergman_core::DomainPoint| {
            let z = p.value[(0, 0)];
            z.powu(8)
        })
        .unwrap();
    // Frequency 8 aliases to 0 on a 4-point circle grid.
    assert!((one.re - 1.0).abs() < 1e-12 && one.im.abs() < 1e-12);
}

#[test]
fn census_exports_are_byte_stable() {
    let census = weight_census(2, 2, 2).unwrap();
    check_golden("census_2_2_cutoff2.json", &census_to_json(&census).unwrap());
    check_golden("census_2_2_cutoff2.csv", &census_to_csv(&census));
}
