//! Commutant of the torus action on truncated monomials: dimension,
//! commutativity, and agreement with the census multiplicity criterion.

use super::CliError;
use crate::config::CommutantConfig;
use crate::report::{Json, ReportBuilder, ReportDocument};
use bergman_core::domains::DomainDescriptor;
use bergman_core::multiplicity::{
    algebra_is_commutative, commutant_basis, is_multiplicity_free_torus, torus_generators,
    weight_census,
};
use nalgebra::DMatrix;
use num_complex::Complex64;

struct CommutantOutcome {
    dimension: usize,
    commutative: bool,
    worst_commutator: f64,
    basis: Vec<DMatrix<Complex64>>,
}

fn commutant_of(n: usize, m: usize, cutoff: u32) -> Result<CommutantOutcome, CliError> {
    let domain = DomainDescriptor::matrix_ball(n, m)?;
    let indices = domain.multi_index_enumerate(cutoff);
    let reps = torus_generators(n, m, &indices)?;
    let basis = commutant_basis(&reps)?;
    let (commutative, worst) = algebra_is_commutative(&basis)?;
    Ok(CommutantOutcome {
        dimension: basis.len(),
        commutative,
        worst_commutator: worst,
        basis,
    })
}

pub fn run(c: &CommutantConfig) -> Result<ReportDocument, CliError> {
    let inputs = Json::obj(vec![
        ("n", Json::UInt(c.n as u64)),
        ("m", Json::UInt(c.m as u64)),
        ("cutoff", Json::UInt(c.cutoff as u64)),
    ]);
    let mut report = ReportBuilder::new("commutant", c.title.clone(), inputs);

    let main = commutant_of(c.n, c.m, c.cutoff)?;
    report.quantity("commutant dimension", main.dimension as f64, None);
    report.quantity(
        "worst relative pairwise commutator",
        main.worst_commutator,
        None,
    );

    if let Some(want) = c.expect_dimension {
        report.verdict(
            "commutant dimension matches",
            main.dimension as f64,
            "==",
            want as f64,
        );
        // The dimension must equal the sum of squared multiplicities.
        let census = weight_census(c.n, c.m, c.cutoff)?;
        let sum_sq: usize = census.entries.iter().map(|e| e.members.len().pow(2)).sum();
        report.verdict(
            "dimension equals sum of squared multiplicities",
            main.dimension as f64,
            "==",
            sum_sq as f64,
        );
    }
    if let Some(want) = c.expect_commutative {
        report.verdict_bool(
            if want {
                "commutant algebra is commutative"
            } else {
                "commutant algebra is noncommutative"
            },
            main.commutative == want,
        );
    }

    if c.disk_diagonal_check {
        let disk = commutant_of(1, 1, c.cutoff)?;
        let max_off = disk
            .basis
            .iter()
            .map(|b| {
                let mut worst = 0.0f64;
                for i in 0..b.nrows() {
                    for j in 0..b.ncols() {
                        if i != j {
                            worst = worst.max(b[(i, j)].norm());
                        }
                    }
                }
                worst
            })
            .fold(0.0f64, f64::max);
        report.quantity("disk commutant dimension", disk.dimension as f64, None);
        report.verdict(
            "disk circle-action commutant is diagonal",
            max_off,
            "<",
            1e-10,
        );
        report.verdict(
            "disk commutant dimension is the space dimension",
            disk.dimension as f64,
            "==",
            (c.cutoff + 1) as f64,
        );
        report.verdict_bool("disk commutant is commutative", disk.commutative);
    }

    if let Some(sweep) = &c.agreement_sweep {
        let mut cases = 0u64;
        let mut agreements = 0u64;
        let mut detail = Vec::new();
        for n in 1..=sweep.n_max {
            for m in 1..=sweep.m_max {
                for cutoff in 0..=sweep.cutoff_max {
                    let (free, _witness) = is_multiplicity_free_torus(n, m, cutoff)?;
                    let out = commutant_of(n, m, cutoff)?;
                    cases += 1;
                    let agree = free == out.commutative;
                    if agree {
                        agreements += 1;
                    }
                    detail.push(Json::obj(vec![
                        ("n", Json::UInt(n as u64)),
                        ("m", Json::UInt(m as u64)),
                        ("cutoff", Json::UInt(cutoff as u64)),
                        ("multiplicity_free", Json::Bool(free)),
                        ("commutant_commutative", Json::Bool(out.commutative)),
                        ("commutant_dimension", Json::UInt(out.dimension as u64)),
                    ]))
                }
            }
        }
        report.note("agreement_sweep", Json::Arr(detail));
        report.verdict(
            "multiplicity-free criterion agrees with commutant criterion",
            agreements as f64,
            "==",
            cases as f64,
        );
    }

    Ok(report.finish(None))
}
