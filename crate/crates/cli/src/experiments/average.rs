//! Haar averaging over a compact subgroup, checked two ways: the averaged
//! operator against the target symbol's operator, and against the operator
//! of the averaged symbol. The two routes share nothing past the inputs.

use super::{build_rule, rule_tag, CliError};
use crate::config::AverageConfig;
use crate::report::{Json, ReportBuilder, ReportDocument};
use bergman_core::linalg::spectral_norm;
use bergman_core::{average_operator, average_symbol, toeplitz_matrix, BasisHandle};

pub fn run(c: &AverageConfig) -> Result<ReportDocument, CliError> {
    let domain = c.domain.to_domain()?;
    let subgroup = c.subgroup.to_subgroup(&domain);
    let symbol = c.symbol.to_symbol(&domain)?;
    let target = c.target.to_symbol(&domain)?;
    let budget = c.symbol.exact_degree().max(c.target.exact_degree());
    let rule = build_rule(&c.rule, &domain, c.lambda, c.cutoff, budget, c.seed)?;
    let basis = BasisHandle::build(&domain, c.lambda, c.cutoff, &rule)?;

    let inputs = Json::obj(vec![
        ("domain", Json::Str(format!("{:?}", domain.kind))),
        ("lambda", Json::Float(c.lambda)),
        ("cutoff", Json::UInt(c.cutoff as u64)),
        ("subgroup", Json::Str(format!("{subgroup:?}"))),
        ("resolution", Json::UInt(c.resolution as u64)),
        ("symbol", Json::Str(symbol.describe())),
        ("target", Json::Str(target.describe())),
        ("rule", Json::Str(rule_tag(&c.rule))),
        ("seed", Json::UInt(c.seed)),
    ]);
    let mut report = ReportBuilder::new("average", c.title.clone(), inputs);

    let t = toeplitz_matrix(&basis, &symbol, &rule)?;
    let averaged = average_operator(&basis, &subgroup, &t, c.resolution, c.seed)?;

    // Route one: conjugation average vs the declared target operator.
    let t_target = toeplitz_matrix(&basis, &target, &rule)?;
    let target_gap = spectral_norm(&(&averaged.entries - &t_target.entries));
    report.quantity("averaged operator vs target operator".to_string(), target_gap, None);
    report.verdict(
        "operator average reproduces the target".to_string(),
        target_gap,
        "<",
        c.tolerance,
    );

    // Route two: averaging before or after compression must agree.
    let hat_symbol = average_symbol(&subgroup, &symbol, c.resolution, c.seed)?;
    let t_hat = toeplitz_matrix(&basis, &hat_symbol, &rule)?;
    let lemma_gap = spectral_norm(&(&averaged.entries - &t_hat.entries));
    report.quantity(
        "averaged operator vs operator of averaged symbol".to_string(),
        lemma_gap,
        None,
    );
    report.verdict(
        "averaging commutes with Toeplitz compression".to_string(),
        lemma_gap,
        "<",
        c.tolerance,
    );

    Ok(report.finish(None))
}
