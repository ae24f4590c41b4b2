//! Torus weight census: enumerates monomial weights, reports collision
//! classes, and checks the expected multiplicity pattern.

use super::CliError;
use crate::config::CensusConfig;
use crate::report::{Json, ReportBuilder, ReportDocument};
use bergman_core::multiplicity::weight_census;
use bergman_core::persist::census_to_csv;

pub fn run(c: &CensusConfig) -> Result<ReportDocument, CliError> {
    let census = weight_census(c.n, c.m, c.cutoff)?;

    let inputs = Json::obj(vec![
        ("n", Json::UInt(c.n as u64)),
        ("m", Json::UInt(c.m as u64)),
        ("cutoff", Json::UInt(c.cutoff as u64)),
    ]);
    let mut report = ReportBuilder::new("census", c.title.clone(), inputs);

    report.quantity("monomial count", census.n_monomials as f64, None);
    report.quantity("distinct weights", census.entries.len() as f64, None);
    report.quantity("max multiplicity", census.max_multiplicity as f64, None);

    let witnesses: Vec<Json> = census
        .witness_pairs
        .iter()
        .map(|(a, b)| {
            Json::obj(vec![
                ("left", Json::Str(format!("{:?}", a.entries))),
                ("right", Json::Str(format!("{:?}", b.entries))),
            ])
        })
        .collect();
    report.note("collision_witnesses", Json::Arr(witnesses));

    if let Some(want) = c.expect_max_multiplicity {
        report.verdict(
            "max multiplicity matches",
            census.max_multiplicity as f64,
            "==",
            want as f64,
        );
    }
    if c.expect_q_shift_families {
        // Every collision class must be a q-shift chain, so the verified
        // flag says the collisions are those families and nothing else.
        let ok = census.q_shift_family_verified == Some(true);
        report.verdict_bool("collision classes are exactly q-shift families", ok);
    }
    if let Some(slice) = &c.degree_slice {
        let at_degree: Vec<_> = census
            .entries
            .iter()
            .filter(|e| e.weight.degree() == slice.degree)
            .collect();
        let collisions = at_degree.iter().filter(|e| e.members.len() > 1).count();
        let max_mult = at_degree.iter().map(|e| e.members.len()).max().unwrap_or(0);
        report.quantity(
            format!("weights at degree {}", slice.degree),
            at_degree.len() as f64,
            None,
        );
        report.verdict(
            format!("degree-{} weight count", slice.degree),
            at_degree.len() as f64,
            "==",
            slice.expect_weights as f64,
        );
        report.verdict(
            format!("degree-{} collision classes", slice.degree),
            collisions as f64,
            "==",
            slice.expect_collision_classes as f64,
        );
        report.verdict(
            format!("degree-{} max multiplicity", slice.degree),
            max_mult as f64,
            "==",
            slice.expect_max_multiplicity as f64,
        );
    }

    Ok(report.finish(Some(census_to_csv(&census))))
}
