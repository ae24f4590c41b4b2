//! Seeded importance sampling on matrix balls and Haar sampling on the
//! unitary blocks of the maximal compact subgroup.
//!
//! Proposals are uniform on the Frobenius-norm ball of radius
//! sqrt(min(n, m)), which contains the operator-norm ball; operator-norm
//! rejection plus density-ratio weights then target the weighted measure.
//! Draws are split into 64 fixed chunks, one independent generator stream
//! per chunk, so rules are bit-reproducible and chunk-jackknifeable.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{QuadratureRule, RuleKind};
use crate::domains::{DomainDescriptor, DomainPoint};
use crate::error::CoreError;
use crate::Result;

pub const MC_CHUNKS: usize = 64;

/// Weighted sample of `count` proposals targeting the weighted measure on
/// the domain. The returned rule holds the accepted nodes with density
/// weights det(I - Z Z*)^(lambda - p), self-normalized.
pub fn mc_sample(
    domain: &DomainDescriptor,
    lambda: f64,
    count: usize,
    seed: u64,
) -> Result<QuadratureRule> {
    domain.check_lambda(lambda)?;
    if count == 0 {
        return Err(CoreError::EmptyInput("monte carlo with count 0".into()));
    }
    let (rows, cols) = (domain.rows(), domain.cols());
    let dim2 = 2 * rows * cols;
    let radius = (rows.min(cols) as f64).sqrt();
    let exponent = lambda - domain.genus as f64;

    let base = count / MC_CHUNKS;
    let rem = count % MC_CHUNKS;

    let mut nodes = Vec::new();
    let mut raw_weights = Vec::new();
    let mut chunk_offsets = Vec::with_capacity(MC_CHUNKS);
    let mut accepted = 0usize;

    for chunk in 0..MC_CHUNKS {
        chunk_offsets.push(accepted);
        let draws = base + usize::from(chunk < rem);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        for _ in 0..draws {
            let mut g = DMatrix::<Complex64>::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    g[(r, c)] = Complex64::new(re, im);
                }
            }
            let u: f64 = rng.gen();
            let norm = g.norm();
            if norm == 0.0 {
                continue;
            }
            let scale = radius * u.powf(1.0 / dim2 as f64) / norm;
            let z = g * Complex64::new(scale, 0.0);
            let point = DomainPoint::from_matrix(z);
            if let Some(d) = domain.det_complement(&point) {
                nodes.push(point);
                raw_weights.push(d.powf(exponent));
                accepted += 1;
            }
        }
    }

    let rate = accepted as f64 / count as f64;
    if accepted == 0 || (count >= 100_000 && rate < 1e-4) {
        return Err(CoreError::LowAcceptance { rate });
    }

    QuadratureRule::from_raw(
        RuleKind::MonteCarlo,
        nodes,
        raw_weights,
        chunk_offsets,
        None,
        Some(seed),
        Some(*domain),
        Some(lambda),
        rate,
    )
}

/// `count` independent draws from the Haar measure of U(n) x U(m), each
/// stored as the block-diagonal (n+m) x (n+m) unitary diag(U, V), with
/// uniform weights. Used for averaging over the maximal compact subgroup.
pub fn haar_unitary_sample(n: usize, m: usize, count: usize, seed: u64) -> Result<QuadratureRule> {
    if n == 0 || m == 0 {
        return Err(CoreError::InvalidDomain("haar sample needs n, m >= 1".into()));
    }
    if count == 0 {
        return Err(CoreError::EmptyInput("haar sample with count 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let mut nodes = Vec::with_capacity(count);
    for _ in 0..count {
        let u = haar_unitary(n, &mut rng);
        let v = haar_unitary(m, &mut rng);
        let mut k = DMatrix::<Complex64>::zeros(n + m, n + m);
        k.view_mut((0, 0), (n, n)).copy_from(&u);
        k.view_mut((n, n), (m, m)).copy_from(&v);
        nodes.push(DomainPoint::from_matrix(k));
    }
    QuadratureRule::from_raw(
        RuleKind::HaarSample,
        nodes,
        vec![1.0; count],
        vec![0],
        None,
        Some(seed),
        None,
        None,
        1.0,
    )
}

/// One Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phases folded into Q.
fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}
