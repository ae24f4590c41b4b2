//! Torus weights of monomials, the multiplicity census of truncated
//! monomial spaces, and the commutant-commutativity criterion that detects
//! multiplicity-freeness at truncated scale.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::domains::{DomainDescriptor, MultiIndex};
use crate::error::CoreError;
use crate::linalg::{nullspace, spectral_norm};
use crate::Result;

/// Character of the diagonal torus on a monomial: per-row and per-column
/// exponent sums. Raw vector equality is the right equivalence: the one
/// relation sum(s) + sum(t) = 0 could only identify (r, c) with
/// (r - q 1, c + q 1), and both vectors summing to the degree forces q = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub row_sums: Vec<u32>,
    pub col_sums: Vec<u32>,
}

impl Weight {
    pub fn degree(&self) -> u32 {
        self.row_sums.iter().sum()
    }
}

pub fn weight_of(alpha: &MultiIndex) -> Weight {
    Weight {
        row_sums: alpha.row_sums(),
        col_sums: alpha.col_sums(),
    }
}

/// One weight class of the census.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusEntry {
    pub weight: Weight,
    /// Monomials carrying the weight, in graded enumeration order.
    pub members: Vec<MultiIndex>,
}

/// Grouping of all monomials of degree <= cutoff by torus weight.
///
/// The weighted action carries an extra j^{lambda/p} character twist; it
/// shifts every weight of a fixed degree by the same amount, and weights
/// already determine degree, so the census ignores it: it cannot merge or
/// split classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub m: usize,
    pub cutoff: u32,
    pub n_monomials: usize,
    /// Sorted by (degree, row sums, column sums) for stable exports.
    pub entries: Vec<CensusEntry>,
    pub max_multiplicity: usize,
    /// First two members of every collision class.
    pub witness_pairs: Vec<(MultiIndex, MultiIndex)>,
    /// On 2 x 2 domains every collision class must be a chain of
    /// [[q, -q], [-q, q]] shifts; Some(true) once verified.
    pub q_shift_family_verified: Option<bool>,
}

/// On a 2 x 2 grid, a collision class is exactly an arithmetic chain under
/// alpha -> alpha + [[1, -1], [-1, 1]].
fn is_q_shift_chain(members: &[MultiIndex]) -> bool {
    let mut sorted: Vec<&MultiIndex> = members.iter().collect();
    sorted.sort_by_key(|mi| mi.entries[0]);
    for pair in sorted.windows(2) {
        let (a, b) = (&pair[0].entries, &pair[1].entries);
        let shifted = b[0] == a[0] + 1
            && a[1] == b[1] + 1
            && a[2] == b[2] + 1
            && b[3] == a[3] + 1;
        if !shifted {
            return false;
        }
    }
    true
}

pub fn weight_census(n: usize, m: usize, cutoff: u32) -> Result<CensusReport> {
    let domain = DomainDescriptor::matrix_ball(n, m)?;
    let indices = domain.multi_index_enumerate(cutoff);
    let n_monomials = indices.len();
    let mut classes: HashMap<Weight, Vec<MultiIndex>> = HashMap::new();
    for alpha in indices {
        classes.entry(weight_of(&alpha)).or_default().push(alpha);
    }
    let mut entries: Vec<CensusEntry> = classes
        .into_iter()
        .map(|(weight, members)| CensusEntry { weight, members })
        .collect();
    entries.sort_by(|a, b| {
        (a.weight.degree(), &a.weight.row_sums, &a.weight.col_sums).cmp(&(
            b.weight.degree(),
            &b.weight.row_sums,
            &b.weight.col_sums,
        ))
    });
    let max_multiplicity = entries.iter().map(|e| e.members.len()).max().unwrap_or(0);
    let witness_pairs: Vec<(MultiIndex, MultiIndex)> = entries
        .iter()
        .filter(|e| e.members.len() >= 2)
        .map(|e| (e.members[0].clone(), e.members[1].clone()))
        .collect();
    let q_shift_family_verified = (n == 2 && m == 2)
        .then(|| entries.iter().all(|e| is_q_shift_chain(&e.members)));
    Ok(CensusReport {
        n,
        m,
        cutoff,
        n_monomials,
        entries,
        max_multiplicity,
        witness_pairs,
        q_shift_family_verified,
    })
}

/// Whether the truncated torus restriction is multiplicity-free, with a
/// colliding pair when it is not.
pub fn is_multiplicity_free_torus(
    n: usize,
    m: usize,
    cutoff: u32,
) -> Result<(bool, Option<(MultiIndex, MultiIndex)>)> {
    let census = weight_census(n, m, cutoff)?;
    if census.max_multiplicity <= 1 {
        Ok((true, None))
    } else {
        Ok((false, census.witness_pairs.first().cloned()))
    }
}

/// Diagonal torus generators on a monomial list: one derivative matrix per
/// free angle (the last phase balances the determinant), plus one sampled
/// element per generator at rationally independent angles. All are exactly
/// diagonal because each monomial is a weight vector.
pub fn torus_generators(n: usize, m: usize, indices: &[MultiIndex]) -> Result<Vec<DMatrix<Complex64>>> {
    if indices.is_empty() {
        return Err(CoreError::EmptyInput("torus generators need monomials".into()));
    }
    for mi in indices {
        if mi.rows != n || mi.cols != m {
            return Err(CoreError::DimensionMismatch(
                "multi-index shape does not match the torus".into(),
            ));
        }
    }
    let free = n + m - 1;
    let dim = indices.len();
    // Exponent of monomial alpha in free parameter l after eliminating the
    // balancing angle t_m: s_j couples to r_j + c_m, t_k to c_m - c_k.
    let exponent = |alpha: &MultiIndex, l: usize| -> f64 {
        let rows = alpha.row_sums();
        let cols = alpha.col_sums();
        let cm = cols[m - 1] as f64;
        if l < n {
            rows[l] as f64 + cm
        } else {
            cm - cols[l - n] as f64
        }
    };
    let mut out = Vec::with_capacity(2 * free);
    for l in 0..free {
        let d = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::new(exponent(&indices[i], l), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        out.push(d);
    }
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    for l in 0..free {
        let theta = 2.0 * PI * ((l as f64 + 1.0) * GOLDEN).fract();
        let u = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, theta * exponent(&indices[i], l))
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        out.push(u);
    }
    Ok(out)
}

/// Basis of {X : X R_i = R_i X for all i}: the nullspace of the stacked
/// maps vec(X) -> vec(X R_i - R_i X) on d^2 coefficients, thresholded at
/// 1e-8 of the largest singular value.
pub fn commutant_basis(rep_matrices: &[DMatrix<Complex64>]) -> Result<Vec<DMatrix<Complex64>>> {
    let first = rep_matrices
        .first()
        .ok_or_else(|| CoreError::EmptyInput("commutant of no matrices".into()))?;
    let d = first.nrows();
    for r in rep_matrices {
        if r.nrows() != d || r.ncols() != d {
            return Err(CoreError::DimensionMismatch(
                "rep matrices must be square of one size".into(),
            ));
        }
    }
    let id = DMatrix::<Complex64>::identity(d, d);
    let mut stacked = DMatrix::<Complex64>::zeros(rep_matrices.len() * d * d, d * d);
    for (i, r) in rep_matrices.iter().enumerate() {
        // Column-major vec: vec(X R) = (R^T kron I) vec(X),
        // vec(R X) = (I kron R) vec(X).
        let block = r.transpose().kronecker(&id) - id.kronecker(r);
        stacked.view_mut((i * d * d, 0), (d * d, d * d)).copy_from(&block);
    }
    let basis_vectors = nullspace(&stacked, 1e-8);
    Ok(basis_vectors
        .column_iter()
        .map(|col| DMatrix::from_column_slice(d, d, col.as_slice()))
        .collect())
}

/// Max pairwise relative commutator norm over a basis, and whether it sits
/// below the 1e-8 commutativity threshold.
pub fn algebra_is_commutative(basis: &[DMatrix<Complex64>]) -> Result<(bool, f64)> {
    if basis.is_empty() {
        return Err(CoreError::EmptyInput("empty algebra basis".into()));
    }
    let d = basis[0].nrows();
    for b in basis {
        if b.nrows() != d || b.ncols() != d {
            return Err(CoreError::DimensionMismatch(
                "algebra basis matrices must share a dimension".into(),
            ));
        }
    }
    let norms: Vec<f64> = basis.iter().map(spectral_norm).collect();
    let mut worst: f64 = 0.0;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let scale = norms[i] * norms[j];
            if scale == 0.0 {
                continue;
            }
            let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
            worst = worst.max(spectral_norm(&comm) / scale);
        }
    }
    Ok((worst < 1e-8, worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(entries: &[u32], rows: usize, cols: usize) -> MultiIndex {
        MultiIndex::new(rows, cols, entries.to_vec()).unwrap()
    }

    fn count_upto(vars: usize, cutoff: u32) -> usize {
        // C(cutoff + vars, vars)
        let mut acc = 1usize;
        for i in 1..=vars {
            acc = acc * (cutoff as usize + i) / i;
        }
        acc
    }

    #[test]
    fn weight_of_examples() {
        let zero = mi(&[0, 0, 0, 0], 2, 2);
        assert_eq!(weight_of(&zero), Weight { row_sums: vec![0, 0], col_sums: vec![0, 0] });
        let diag = mi(&[1, 0, 0, 1], 2, 2);
        let anti = mi(&[0, 1, 1, 0], 2, 2);
        let w = weight_of(&diag);
        assert_eq!(w.row_sums, vec![1, 1]);
        assert_eq!(w.col_sums, vec![1, 1]);
        assert_eq!(w, weight_of(&anti));
        assert_eq!(w.degree(), 2);
    }

    #[test]
    fn one_by_one_census_is_multiplicity_free() {
        for cutoff in [0u32, 3, 9] {
            let c = weight_census(1, 1, cutoff).unwrap();
            assert_eq!(c.n_monomials, cutoff as usize + 1);
            assert_eq!(c.max_multiplicity, 1);
            assert!(c.witness_pairs.is_empty());
            assert!(c.q_shift_family_verified.is_none());
        }
        let (free, witness) = is_multiplicity_free_torus(1, 1, 6).unwrap();
        assert!(free && witness.is_none());
    }

    #[test]
    fn row_vectors_are_multiplicity_free() {
        // n = 1: the column sums are the full exponent vector.
        for m in 1..=3usize {
            let (free, _) = is_multiplicity_free_torus(1, m, 3).unwrap();
            assert!(free, "1 x {m} must be multiplicity-free");
        }
    }

    #[test]
    fn two_by_two_degree_two_slice() {
        let c = weight_census(2, 2, 2).unwrap();
        assert_eq!(c.n_monomials, count_upto(4, 2));
        assert_eq!(c.n_monomials, 15);
        let degree_two: Vec<&CensusEntry> = c
            .entries
            .iter()
            .filter(|e| e.weight.degree() == 2)
            .collect();
        assert_eq!(degree_two.len(), 9, "degree-2 weights");
        let mult2: Vec<&&CensusEntry> = degree_two
            .iter()
            .filter(|e| e.members.len() == 2)
            .collect();
        assert_eq!(mult2.len(), 1, "exactly one doubled weight");
        let members = &mult2[0].members;
        let expect_a = mi(&[1, 0, 0, 1], 2, 2);
        let expect_b = mi(&[0, 1, 1, 0], 2, 2);
        assert!(members.contains(&expect_a) && members.contains(&expect_b));
        assert_eq!(c.q_shift_family_verified, Some(true));
        // Census mass balances.
        let total: usize = c.entries.iter().map(|e| e.members.len()).sum();
        assert_eq!(total, c.n_monomials);
    }

    #[test]
    fn two_by_two_multiplicity_by_cutoff() {
        let (free1, _) = is_multiplicity_free_torus(2, 2, 1).unwrap();
        assert!(free1);
        let (free2, witness) = is_multiplicity_free_torus(2, 2, 2).unwrap();
        assert!(!free2);
        let (a, b) = witness.unwrap();
        assert_eq!(weight_of(&a), weight_of(&b));
        assert_ne!(a, b);
        // Larger cutoffs keep the q-shift structure and grow multiplicity.
        let c4 = weight_census(2, 2, 4).unwrap();
        assert!(c4.max_multiplicity >= 2);
        assert_eq!(c4.q_shift_family_verified, Some(true));
        assert_eq!(c4.n_monomials, count_upto(4, 4));
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        let id = DMatrix::<Complex64>::identity(3, 3);
        let basis = commutant_basis(&[id]).unwrap();
        assert_eq!(basis.len(), 9);
    }

    #[test]
    fn commutant_of_distinct_diagonal_is_diagonal() {
        let d = DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new(i as f64 + 1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let basis = commutant_basis(&[d]).unwrap();
        assert_eq!(basis.len(), 4);
        for b in &basis {
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        assert!(b[(i, j)].norm() < 1e-10);
                    }
                }
            }
        }
        let (comm, worst) = algebra_is_commutative(&basis).unwrap();
        assert!(comm, "diagonal commutant commutes, worst {worst}");
    }

    #[test]
    fn elementary_matrices_fail_commutativity() {
        let mut e12 = DMatrix::<Complex64>::zeros(2, 2);
        e12[(0, 1)] = Complex64::new(1.0, 0.0);
        let mut e21 = DMatrix::<Complex64>::zeros(2, 2);
        e21[(1, 0)] = Complex64::new(1.0, 0.0);
        let (comm, worst) = algebra_is_commutative(&[e12, e21]).unwrap();
        assert!(!comm);
        assert!(worst > 0.5);
        assert!(algebra_is_commutative(&[]).is_err());
    }

    #[test]
    fn torus_commutant_dimension_is_sum_of_squared_multiplicities() {
        for (n, m, cutoff) in [
            (1usize, 1usize, 3u32),
            (1, 2, 2),
            (2, 1, 2),
            (2, 2, 2),
            (2, 2, 3),
        ] {
            let domain = DomainDescriptor::matrix_ball(n, m).unwrap();
            let indices = domain.multi_index_enumerate(cutoff);
            let gens = torus_generators(n, m, &indices).unwrap();
            let basis = commutant_basis(&gens).unwrap();
            let census = weight_census(n, m, cutoff).unwrap();
            let expect: usize = census.entries.iter().map(|e| e.members.len().pow(2)).sum();
            assert_eq!(
                basis.len(),
                expect,
                "commutant dim at ({n},{m}) cutoff {cutoff}"
            );
        }
    }

    #[test]
    fn torus_commutant_dim_17_and_noncommutative_at_cutoff_two() {
        let domain = DomainDescriptor::matrix_ball(2, 2).unwrap();
        let indices = domain.multi_index_enumerate(2);
        assert_eq!(indices.len(), 15);
        let gens = torus_generators(2, 2, &indices).unwrap();
        for g in &gens {
            for i in 0..15 {
                for j in 0..15 {
                    if i != j {
                        assert_eq!(g[(i, j)], Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
        let basis = commutant_basis(&gens).unwrap();
        // 1 + 4 + (8 + 2^2): degrees 0 and 1 are simple; degree 2 has eight
        // singletons and one doubled weight.
        assert_eq!(basis.len(), 17);
        let (comm, worst) = algebra_is_commutative(&basis).unwrap();
        assert!(!comm, "the 2x2 block forces noncommutativity");
        assert!(worst > 1e-3);
    }

    #[test]
    fn criteria_agree_on_small_cases() {
        for (n, m, cutoff) in [
            (1usize, 1usize, 4u32),
            (1, 2, 3),
            (2, 1, 3),
            (2, 2, 1),
            (2, 2, 2),
        ] {
            let domain = DomainDescriptor::matrix_ball(n, m).unwrap();
            let indices = domain.multi_index_enumerate(cutoff);
            let gens = torus_generators(n, m, &indices).unwrap();
            let commutant = commutant_basis(&gens).unwrap();
            let (algebra_comm, _) = algebra_is_commutative(&commutant).unwrap();
            let (free, _) = is_multiplicity_free_torus(n, m, cutoff).unwrap();
            assert_eq!(
                algebra_comm, free,
                "criteria disagree at ({n},{m}) cutoff {cutoff}"
            );
        }
    }

    #[test]
    fn generator_shape_validation() {
        let domain = DomainDescriptor::matrix_ball(2, 2).unwrap();
        let indices = domain.multi_index_enumerate(1);
        assert!(torus_generators(1, 2, &indices).is_err());
        assert!(torus_generators(2, 2, &[]).is_err());
    }
}
