//! Acceptance suite: every headline property runs end to end from a
//! shipped preset through the real binary, and each test prints one
//! pass/fail line with the observed values (visible with --nocapture or
//! on failure).

use serde_json::Value;
use std::process::Command;

fn run_preset(name: &str) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_bergman"))
        .args(["--preset", name])
        .output()
        .expect("binary spawns");
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert_eq!(
        out.status.code(),
        Some(0),
        "preset {name} exited nonzero; stderr:\n{stderr}"
    );
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("preset {name} produced invalid JSON: {e}"))
}

/// All verdicts whose name contains the needle, as (name, observed,
/// threshold, passed).
fn verdicts<'a>(report: &'a Value, needle: &str) -> Vec<(&'a str, f64, f64, bool)> {
    let rows = report["verdicts"]
        .as_array()
        .expect("report has verdicts")
        .iter()
        .filter_map(|v| {
            let name = v["name"].as_str()?;
            if !name.contains(needle) {
                return None;
            }
            Some((
                name,
                v["observed"].as_f64()?,
                v["threshold"].as_f64()?,
                v["passed"].as_bool()?,
            ))
        })
        .collect::<Vec<_>>();
    assert!(!rows.is_empty(), "no verdict matches '{needle}'");
    rows
}

fn quantity(report: &Value, needle: &str) -> f64 {
    report["quantities"]
        .as_array()
        .expect("report has quantities")
        .iter()
        .find_map(|q| {
            let name = q["name"].as_str()?;
            if name.contains(needle) {
                q["value"].as_f64()
            } else {
                None
            }
        })
        .unwrap_or_else(|| panic!("no quantity matches '{needle}'"))
}

fn worst(rows: &[(&str, f64, f64, bool)]) -> f64 {
    rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max)
}

fn all_passed(rows: &[(&str, f64, f64, bool)]) {
    for (name, observed, threshold, passed) in rows {
        assert!(
            passed,
            "verdict '{name}' failed: observed {observed:e} vs threshold {threshold:e}"
        );
    }
}

#[test]
fn criterion_01_projection_recovers_coefficients() {
    let report = run_preset("01-reproducing-disk");
    let rows = verdicts(&report, "projection recovers polynomial coefficients");
    assert_eq!(rows.len(), 2, "both weights are checked");
    for row in &rows {
        assert_eq!(row.2, 1e-10, "stated tolerance");
    }
    all_passed(&rows);
    println!(
        "criterion 01 PASS projection recovery on the disk: max coefficient error {:.2e} < 1e-10 at both weights",
        worst(&rows)
    );
}

#[test]
fn criterion_02_kernel_matches_closed_form_within_tail() {
    for preset in ["02-kernel-disk", "02-kernel-ball2"] {
        let report = run_preset(preset);
        let rows = verdicts(&report, "kernel matches closed form within tail bound");
        all_passed(&rows);
        let bound = quantity(&report, "max tail bound");
        assert!(
            bound.is_finite() && bound < 1e-6,
            "tail bound {bound:e} is meaningful"
        );
        println!(
            "criterion 02 PASS {preset}: worst deviation-minus-bound {:.2e} <= 1e-9, tail bound {:.2e}",
            worst(&rows),
            bound
        );
    }
}

#[test]
fn criterion_03_radial_pairs_commute() {
    for preset in ["03-radial-disk", "03-radial-ball2"] {
        let report = run_preset(preset);
        let rows = verdicts(&report, "] commutes (");
        assert_eq!(rows.len(), 10, "five pairs at two weights");
        for row in &rows {
            assert_eq!(row.2, 1e-8, "stated tolerance");
        }
        all_passed(&rows);
        println!(
            "criterion 03 PASS {preset}: worst spectral commutator {:.2e} < 1e-8 over 5 random radial pairs x 2 weights",
            worst(&rows)
        );
    }
}

#[test]
fn criterion_04_arc_and_horocycle_families() {
    let report = run_preset("04-arc-horocycle-disk");
    let same = verdicts(&report, "] commutes (");
    assert_eq!(same.len(), 2, "both affine same-family pairs asserted");
    for row in &same {
        assert_eq!(row.2, 1e-6, "stated tolerance");
    }
    all_passed(&same);
    let mixed = verdicts(&report, "does not commute");
    assert_eq!(mixed.len(), 1);
    assert_eq!(mixed[0].2, 1e-3, "stated floor");
    all_passed(&mixed);
    // Independent same-family profiles are reported, not asserted: their
    // leakage is genuine truncation error of the compression.
    let leak = quantity(&report, "[independent hyperbolic arcs]");
    assert!(leak > 1e-3, "diagnostic pair shows visible leakage");
    println!(
        "criterion 04 PASS affine pairs commute ({:.2e} < 1e-6), mixed pair separates ({:.2e} > 1e-3), diagnostic leakage {:.2e} reported",
        worst(&same),
        mixed[0].1,
        leak
    );
}

#[test]
fn criterion_05_real_form_invariant_pair() {
    let report = run_preset("05-realform-ball2");
    let noise = verdicts(&report, "commutes within noise");
    assert_eq!(noise.len(), 1);
    all_passed(&noise);
    let inv = verdicts(&report, "invariant under sampled subgroup");
    assert_eq!(inv.len(), 2, "both symbols spot-checked");
    for row in &inv {
        assert_eq!(row.2, 1e-9, "stated tolerance");
    }
    all_passed(&inv);
    println!(
        "criterion 05 PASS real-form pair: commutator {:.2e} inside 3 SE band {:.2e}; invariance defect {:.2e} < 1e-9",
        noise[0].1,
        noise[0].2,
        worst(&inv)
    );
}

#[test]
fn criterion_06_compactly_invariant_pair_on_matrix_ball() {
    let report = run_preset("06-kinvariant-matrixball22");
    let noise = verdicts(&report, "commutes within noise");
    assert_eq!(noise.len(), 1);
    all_passed(&noise);
    println!(
        "criterion 06 PASS trace-invariant pair on the 2x2 matrix ball: commutator {:.2e} inside 3 SE band {:.2e}",
        noise[0].1, noise[0].2
    );
}

#[test]
fn criterion_07_weight_census() {
    let report = run_preset("07-census-22");
    all_passed(&verdicts(&report, "q-shift families"));
    let slice = [
        ("degree-2 weight count", 9.0),
        ("degree-2 collision classes", 1.0),
        ("degree-2 max multiplicity", 2.0),
    ];
    for (needle, expected) in slice {
        let rows = verdicts(&report, needle);
        assert_eq!(rows[0].1, expected, "{needle}");
        all_passed(&rows);
    }
    println!(
        "criterion 07 PASS census(2,2,4): collisions are exactly the shift families; degree-2 slice has 9 weights, 1 doubled class"
    );
}

#[test]
fn criterion_08_torus_pair_separates_from_noise() {
    let report = run_preset("08-torus-noncommute");
    let rows = verdicts(&report, "resolves as nonzero");
    assert_eq!(rows.len(), 1);
    all_passed(&rows);
    assert!(
        rows[0].1 > rows[0].2,
        "signal clears ten standard errors"
    );
    println!(
        "criterion 08 PASS torus moduli pair: commutator {:.2e} > 10 SE band {:.2e}",
        rows[0].1, rows[0].2
    );
}

#[test]
fn criterion_09_commutant_dimension_and_commutativity() {
    let report = run_preset("09-commutant");
    let dim = verdicts(&report, "commutant dimension matches");
    assert_eq!(dim[0].1, 17.0);
    all_passed(&dim);
    all_passed(&verdicts(&report, "sum of squared multiplicities"));
    all_passed(&verdicts(&report, "algebra is noncommutative"));
    all_passed(&verdicts(&report, "circle-action commutant is diagonal"));
    all_passed(&verdicts(&report, "disk commutant is commutative"));
    let sweep = verdicts(&report, "agrees with commutant criterion");
    all_passed(&sweep);
    println!(
        "criterion 09 PASS commutant: dimension 17, noncommutative; disk commutant diagonal; freeness agreement on {} shape cases",
        sweep[0].1
    );
}

#[test]
fn criterion_10_intertwining_and_averaging() {
    let report = run_preset("10-intertwine-disk");
    let rows = verdicts(&report, "rotated symbol");
    assert_eq!(rows[0].2, 1e-6, "stated tolerance");
    all_passed(&rows);
    let intertwine_defect = rows[0].1;

    let report = run_preset("10-average-disk");
    let target = verdicts(&report, "reproduces the target");
    assert_eq!(target[0].2, 1e-8, "stated tolerance");
    all_passed(&target);
    let lemma = verdicts(&report, "commutes with Toeplitz compression");
    all_passed(&lemma);
    println!(
        "criterion 10 PASS intertwining defect {:.2e} < 1e-6; averaging gap {:.2e} < 1e-8 with both-routes agreement {:.2e}",
        intertwine_defect, target[0].1, lemma[0].1
    );
}

#[test]
fn criterion_11_squared_radius_diagonal_law() {
    let report = run_preset("11-eigenvalue-law-disk");
    let diag = verdicts(&report, "diagonal follows");
    assert_eq!(diag.len(), 2, "both weights are checked");
    for row in &diag {
        assert_eq!(row.2, 1e-10, "stated tolerance");
    }
    all_passed(&diag);
    all_passed(&verdicts(&report, "operator is diagonal"));
    println!(
        "criterion 11 PASS diagonal law (k+1)/(k+lambda) to {:.2e} for k <= 12 at both weights",
        worst(&diag)
    );
}

#[test]
fn criterion_12_truncation_trends() {
    let report = run_preset("03-radial-disk");
    let flat = verdicts(&report, "trend non-growing");
    assert_eq!(flat.len(), 10, "five pairs at two weights");
    all_passed(&flat);
    let cutoffs = report["inputs"]["cutoffs_evaluated"]
        .as_array()
        .expect("trend cutoffs recorded")
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect::<Vec<_>>();
    assert_eq!(cutoffs, vec![6, 8, 10]);

    let report = run_preset("08-torus-noncommute");
    let sig = verdicts(&report, "trend stays significant");
    all_passed(&sig);
    let cutoffs = report["inputs"]["cutoffs_evaluated"]
        .as_array()
        .expect("trend cutoffs recorded")
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect::<Vec<_>>();
    assert_eq!(cutoffs, vec![2, 3]);
    println!(
        "criterion 12 PASS commuting trend flat over disk cutoffs 6/8/10; noncommuting signal-to-band ratio {:.2}x > 1 over matrix-ball cutoffs 2/3",
        sig[0].1
    );
}
