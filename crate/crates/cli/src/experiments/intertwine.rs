//! Intertwining audit: the weighted action of a rotation must carry the
//! Toeplitz operator of a symbol onto the operator of the rotated symbol.

use super::{build_rule, rule_tag, CliError};
use crate::config::IntertwineConfig;
use crate::report::{Json, ReportBuilder, ReportDocument};
use bergman_core::{intertwine_defect, BasisHandle, SubgroupDescriptor};

pub fn run(c: &IntertwineConfig) -> Result<ReportDocument, CliError> {
    let domain = c.domain.to_domain()?;
    let symbol = c.symbol.to_symbol(&domain)?;
    let rule = build_rule(
        &c.rule,
        &domain,
        c.lambda,
        c.cutoff,
        c.symbol.exact_degree(),
        c.seed,
    )?;
    let basis = BasisHandle::build(&domain, c.lambda, c.cutoff, &rule)?;
    let h = SubgroupDescriptor::Rotation.element(&[c.angle])?;

    let inputs = Json::obj(vec![
        ("domain", Json::Str(format!("{:?}", domain.kind))),
        ("lambda", Json::Float(c.lambda)),
        ("cutoff", Json::UInt(c.cutoff as u64)),
        ("symbol", Json::Str(symbol.describe())),
        ("angle", Json::Float(c.angle)),
        ("rule", Json::Str(rule_tag(&c.rule))),
        ("seed", Json::UInt(c.seed)),
    ]);
    let mut report = ReportBuilder::new("intertwine", c.title.clone(), inputs);

    report.quantity(
        "group element membership defect".to_string(),
        h.membership_defect,
        None,
    );
    report.quantity(
        "basis orthonormality defect".to_string(),
        basis.orthonormality_defect,
        None,
    );

    let defect = intertwine_defect(&basis, &h, &symbol, &rule)?;
    report.quantity("intertwining defect".to_string(), defect, None);
    report.verdict(
        "action carries the operator onto the rotated symbol's operator".to_string(),
        defect,
        "<",
        c.tolerance,
    );

    Ok(report.finish(None))
}
