//! The biholomorphism group SU(n,m) of the matrix ball: elements and their
//! Mobius action, distinguished subgroups, the weighted representation on
//! the Bergman truncation, and Haar averaging.

mod average;
mod elements;
mod pi;
mod subgroups;

pub use average::{average_operator, average_symbol, default_average_resolution};
pub use elements::{
    jacobian_factor, mobius_apply, pkp_factorize, signature_matrix, GroupElement, PathData,
};
pub use pi::{automorphy_power, intertwine_defect, pi_lambda_matrix, translated_symbol};
pub use subgroups::{haar_compact_elements, SubgroupDescriptor};

use crate::domains::DomainPoint;
use crate::quadrature::mc_sample;
use crate::symbols::SymbolSpec;
use crate::Result;

/// Largest |phi(h z) - phi(z)| over sampled subgroup elements and interior
/// points: a direct audit of a symbol's declared invariance.
pub fn invariance_spot_check(
    symbol: &SymbolSpec,
    subgroup: &SubgroupDescriptor,
    n_elements: usize,
    n_points: usize,
    seed: u64,
) -> Result<f64> {
    subgroup.check_domain(&symbol.domain)?;
    let elements = subgroup.sample(n_elements, seed)?;
    // lambda = genus makes the sampling weight constant, so the accepted
    // proposals are uniform interior points.
    let uniform = mc_sample(
        &symbol.domain,
        symbol.domain.genus as f64,
        (n_points * 16).max(4096),
        seed ^ 0x9E37_79B9_7F4A_7C15,
    )?;
    let points: Vec<&DomainPoint> = uniform.nodes.iter().take(n_points).collect();
    let mut worst: f64 = 0.0;
    for h in &elements {
        for z in &points {
            let moved = mobius_apply(h, &symbol.domain, z)?;
            let a = symbol.eval(&moved)?;
            let b = symbol.eval(z)?;
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}
