//! Weights, factors, and verification of separable decompositions.
//!
//! Given product vectors `y^(l)` in the range and eigenvalues `lambda_j`,
//! nonnegative weights `p_l` with
//! `sum_l p_l y_j^(l) conj(y_j'^(l)) = lambda_j delta_jj'` make the matrix
//! `M_lj = sqrt(p_l / lambda_j) y_j^(l)` a left isometry (`M^dagger M = I`),
//! and then `rho = sum_l p_l |psi_l><psi_l|` with `|psi_l> = sum_j y_j^(l) |phi_j>`.

mod nnls;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::search::{assemble_range_vector, state_purity_defect, CandidateSet, RangeVector};
use crate::tensor::{
    gauge_fix_slice, hermitian_eigensystem, kron_vectors, max_abs_entry, ComplexMatrix,
    ComplexVector, DensityMatrix, PartyStructure, SpectralBasis, StateVector,
};

/// Tolerances for weight solving and factor extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionConfig {
    /// Largest accepted Frobenius residual of the Gram condition.
    pub weight_tol: f64,
    /// Largest per-party purity defect accepted when factoring a term.
    pub factor_tol: f64,
    /// Largest accepted max-entry reconstruction residual.
    pub decomp_tol: f64,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        Self {
            weight_tol: 1e-9,
            factor_tol: 1e-12,
            decomp_tol: 1e-8,
        }
    }
}

/// Nonnegative weights, one per candidate, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    p: Vec<f64>,
}

impl WeightVector {
    pub fn values(&self) -> &[f64] {
        &self.p
    }

    /// Indices of strictly positive weights.
    pub fn support(&self) -> Vec<usize> {
        (0..self.p.len()).filter(|&i| self.p[i] > 0.0).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSolution {
    Feasible {
        weights: WeightVector,
        residual: f64,
    },
    /// No nonnegative combination of the pool reaches the tolerance.
    Infeasible { residual: f64 },
}

/// Real linear system for the Gram condition: diagonal entries first, then
/// `sqrt2 * Re` and `sqrt2 * Im` of each upper off-diagonal entry, so the
/// Euclidean residual equals the Frobenius norm of the Hermitian defect.
fn gram_system(vectors: &[RangeVector], eigenvalues: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
    let k = eigenvalues.len();
    let s2 = std::f64::consts::SQRT_2;
    let mut a = DMatrix::zeros(k * k, vectors.len());
    let mut b = DVector::zeros(k * k);
    for (j, &l) in eigenvalues.iter().enumerate() {
        b[j] = l;
    }
    for (col, v) in vectors.iter().enumerate() {
        let y = v.coefficients();
        let mut row = 0;
        for j in 0..k {
            a[(row, col)] = y[j].norm_sqr();
            row += 1;
        }
        for j in 0..k {
            for jp in j + 1..k {
                let g = y[j] * y[jp].conj();
                a[(row, col)] = s2 * g.re;
                a[(row + 1, col)] = s2 * g.im;
                row += 2;
            }
        }
    }
    (a, b)
}

/// Nonnegative weights for the Gram condition over the candidate pool.
///
/// Solutions with more than `k^2` positive weights are reduced to a
/// solution with at most `k^2` terms and re-solved on that support.
pub fn solve_weights(
    candidates: &CandidateSet,
    eigenvalues: &[f64],
    weight_tol: f64,
) -> Result<WeightSolution> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let k = eigenvalues.len();
    if let Some(bad) = candidates.vectors.iter().find(|v| v.len() != k) {
        return Err(Error::LengthMismatch {
            expected: k,
            actual: bad.len(),
        });
    }
    let (a, b) = gram_system(&candidates.vectors, eigenvalues);
    let mut p = nnls::nnls(&a, &b);
    let residual = (&a * &p - &b).norm();

    let max_support = k * k;
    if p.iter().filter(|&&v| v > 0.0).count() > max_support {
        let mut reduced = p.clone();
        nnls::reduce_support(&a, &mut reduced, max_support);
        let support: Vec<usize> = (0..reduced.len()).filter(|&i| reduced[i] > 0.0).collect();
        let polished = nnls::nnls(&a.select_columns(&support), &b);
        let mut candidate = DVector::zeros(p.len());
        for (t, &i) in support.iter().enumerate() {
            candidate[i] = polished[t];
        }
        if (&a * &candidate - &b).norm() <= residual + 1e-10 {
            p = candidate;
        }
    }

    let residual = (&a * &p - &b).norm();
    let total: f64 = p.iter().sum();
    if residual > weight_tol || (total - 1.0).abs() > 1e-9 {
        return Ok(WeightSolution::Infeasible { residual });
    }
    Ok(WeightSolution::Feasible {
        weights: WeightVector {
            p: p.iter().copied().collect(),
        },
        residual,
    })
}

/// `M_lj = sqrt(p_l / lambda_j) y_j^(l)` over the whole pool.
pub fn isometry_matrix(
    candidates: &CandidateSet,
    weights: &WeightVector,
    eigenvalues: &[f64],
) -> ComplexMatrix {
    ComplexMatrix::from_fn(candidates.len(), eigenvalues.len(), |l, j| {
        candidates.vectors[l].coefficients()[j] * (weights.p[l] / eigenvalues[j]).sqrt()
    })
}

/// `|M^dagger M - I|_F`.
pub fn isometry_defect(m: &ComplexMatrix) -> f64 {
    let k = m.ncols();
    (m.adjoint() * m - ComplexMatrix::identity(k, k)).norm()
}

/// Local pure factors of a product state.
///
/// Each factor is the leading eigenvector of the party's reduced state.
/// Factors of parties `1..m-1` are phase-fixed (first significant
/// component real and nonnegative); the remaining global phase is carried
/// by the last party's factor, so their tensor product equals `joint`.
pub fn extract_factors(joint: &StateVector, factor_tol: f64) -> Result<Vec<ComplexVector>> {
    let defect = state_purity_defect(joint);
    let worst = defect.per_party.iter().copied().fold(0.0, f64::max);
    if worst > factor_tol {
        return Err(Error::NotProduct(worst));
    }
    let m = joint.structure().parties();
    let mut factors = Vec::with_capacity(m);
    for party in 0..m {
        let eig = hermitian_eigensystem(&joint.reduced(party))?;
        let mut v: Vec<Complex64> = eig.vectors.column(0).iter().copied().collect();
        gauge_fix_slice(&mut v);
        factors.push(ComplexVector::from_vec(v));
    }
    let overlap = kron_vectors(&factors).dotc(joint.amplitudes());
    if overlap.norm() == 0.0 {
        return Err(Error::NotProduct(worst));
    }
    let phase = overlap / overlap.norm();
    factors[m - 1] *= phase;
    let mismatch = (kron_vectors(&factors) - joint.amplitudes()).norm();
    if mismatch > 1e-8 {
        return Err(Error::NotProduct(worst.max(mismatch * mismatch)));
    }
    Ok(factors)
}

/// One pure product term of a separable decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub y: RangeVector,
    pub joint: StateVector,
    pub factors: Vec<ComplexVector>,
}

/// `rho = sum_l p_l |psi_l^1 ... psi_l^m><psi_l^1 ... psi_l^m|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableDecomposition {
    structure: PartyStructure,
    terms: Vec<DecompositionTerm>,
    residual: f64,
}

impl SeparableDecomposition {
    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn terms(&self) -> &[DecompositionTerm] {
        &self.terms
    }

    pub fn weights(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.weight).collect()
    }

    /// Max-entry distance to the spectral reconstruction it was built from.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `sum_l p_l |x_l><x_l|` with `x_l` the tensor product of the factors.
    pub fn reconstruct_from_factors(&self) -> ComplexMatrix {
        let n = self.structure.total_dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for t in &self.terms {
            let v = kron_vectors(&t.factors);
            out += &v * v.adjoint() * Complex64::new(t.weight, 0.0);
        }
        out
    }
}

/// Assembles the terms on the support of `weights`.
pub fn build_decomposition(
    basis: &SpectralBasis,
    candidates: &CandidateSet,
    weights: &WeightVector,
    cfg: &DecompositionConfig,
) -> Result<SeparableDecomposition> {
    if weights.p.len() != candidates.len() {
        return Err(Error::LengthMismatch {
            expected: candidates.len(),
            actual: weights.p.len(),
        });
    }
    let n = basis.structure().total_dim();
    let mut terms = Vec::new();
    let mut approx = ComplexMatrix::zeros(n, n);
    for l in weights.support() {
        let y = candidates.vectors[l].clone();
        let joint = assemble_range_vector(&y, basis)?;
        let factors = extract_factors(&joint, cfg.factor_tol)?;
        approx += joint.projector() * Complex64::new(weights.p[l], 0.0);
        terms.push(DecompositionTerm {
            weight: weights.p[l],
            y,
            joint,
            factors,
        });
    }
    let residual = max_abs_entry(&(approx - basis.reconstruct()));
    Ok(SeparableDecomposition {
        structure: basis.structure().clone(),
        terms,
        residual,
    })
}

/// Max-entry distance between `rho` and the mixture rebuilt from the
/// stored factors alone.
pub fn verify_decomposition(decomp: &SeparableDecomposition, rho: &DensityMatrix) -> Result<f64> {
    if decomp.structure() != rho.structure() {
        return Err(Error::DimensionMismatch {
            expected: rho.structure().total_dim(),
            actual: decomp.structure().total_dim(),
        });
    }
    Ok(max_abs_entry(
        &(decomp.reconstruct_from_factors() - rho.matrix()),
    ))
}
