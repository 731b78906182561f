//! Product vectors in the range of a density matrix.
//!
//! A coefficient vector `y` over the spectral basis describes the range
//! vector `|Psi> = sum_i y_i |phi_i>`. The state can appear in a separable
//! decomposition only if every single-party reduction of `|Psi>` is pure.

mod defect;
mod numeric;
mod pencil;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{gauge_fix_slice, ComplexVector, SpectralBasis, StateVector};

pub use defect::PurityDefect;
pub(crate) use defect::{Flattenings, RangeObjective};
pub use numeric::find_product_vectors_numeric;
pub use pencil::find_product_vectors_rank2_bipartite;

/// Unit-norm coefficient vector over a spectral basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeVector {
    y: ComplexVector,
    gauge_fixed: bool,
}

impl RangeVector {
    /// Normalizes `y`.
    pub fn new(y: ComplexVector) -> Result<Self> {
        let norm = y.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            y: y / Complex64::new(norm, 0.0),
            gauge_fixed: false,
        })
    }

    pub fn from_slice(y: &[Complex64]) -> Result<Self> {
        Self::new(ComplexVector::from_column_slice(y))
    }

    pub fn coefficients(&self) -> &ComplexVector {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn is_gauge_fixed(&self) -> bool {
        self.gauge_fixed
    }

    /// Same ray, with the first significant component real and nonnegative.
    pub fn gauge_fixed(&self) -> Result<Self> {
        let mut v: Vec<Complex64> = self.y.iter().copied().collect();
        if !gauge_fix_slice(&mut v) {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            y: ComplexVector::from_vec(v),
            gauge_fixed: true,
        })
    }

    fn canonical_key(&self) -> Vec<(i64, i64)> {
        self.y
            .iter()
            .map(|z| ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64))
            .collect()
    }
}

/// How much of the solution set a [`CandidateSet`] is known to cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    /// Every product vector in the range is listed.
    CertifiedComplete,
    /// Found by sampling; more solutions may exist.
    SampledIncomplete,
    /// The range provably contains no product vector.
    CertifiedEmpty,
}

/// Gauge-fixed, pairwise distinct, canonically ordered product vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub vectors: Vec<RangeVector>,
    pub completeness: Completeness,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Parameters of the numerical product-vector search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Number of random starts; `None` means `64 * k`.
    pub starts: Option<usize>,
    pub seed: u64,
    /// Acceptance threshold on the summed purity defect.
    pub defect_tol: f64,
    /// Minimum distance between distinct gauge-fixed candidates.
    pub dedup_tol: f64,
    pub max_iters: usize,
    /// Tangent-gradient norm at which a descent stops.
    pub grad_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: None,
            seed: 0,
            defect_tol: 1e-18,
            dedup_tol: 1e-6,
            max_iters: 500,
            grad_tol: 1e-10,
        }
    }
}

impl SearchConfig {
    pub fn starts_for(&self, rank: usize) -> usize {
        self.starts.unwrap_or(64 * rank)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.starts == Some(0) {
            return bad("starts must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if !(self.defect_tol > 0.0 && self.dedup_tol > 0.0 && self.grad_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.defect_tol >= self.dedup_tol * self.dedup_tol {
            return bad("defect_tol must be below dedup_tol squared");
        }
        Ok(())
    }
}

fn check_len(y: &RangeVector, basis: &SpectralBasis) -> Result<()> {
    if y.len() != basis.rank() {
        return Err(Error::LengthMismatch {
            expected: basis.rank(),
            actual: y.len(),
        });
    }
    Ok(())
}

/// `sum_i y_i |phi_i>`.
pub fn assemble_range_vector(y: &RangeVector, basis: &SpectralBasis) -> Result<StateVector> {
    check_len(y, basis)?;
    StateVector::normalized(
        basis.structure().clone(),
        basis.vectors() * y.coefficients(),
    )
}

/// Purity defects `1 - tr(sigma_a^2)` of the range vector `y`. The total
/// vanishes exactly when every reduced state is a rank-one projector,
/// which for unit-trace PSD `sigma_a` is the same as `det(sigma_a - I) = 0`.
pub fn purity_defect(y: &RangeVector, basis: &SpectralBasis) -> Result<PurityDefect> {
    check_len(y, basis)?;
    let state = basis.vectors() * y.coefficients();
    Ok(Flattenings::new(basis.structure()).defect(state.as_slice()))
}

/// Purity defects of a joint pure state.
pub fn state_purity_defect(state: &StateVector) -> PurityDefect {
    Flattenings::new(state.structure()).defect(state.amplitudes().as_slice())
}

/// Gradient of the total purity defect with respect to the interleaved
/// real coordinates `(Re y_1, Im y_1, Re y_2, ...)`, projected onto the
/// tangent space of the unit sphere.
pub fn purity_defect_gradient(y: &RangeVector, basis: &SpectralBasis) -> Result<Vec<f64>> {
    check_len(y, basis)?;
    let objective = RangeObjective::new(basis.structure(), basis.vectors());
    Ok(defect::interleave(&objective.gradient(y.coefficients())))
}

/// Removes the global phase of each vector, drops vectors within
/// `dedup_tol` of one already kept, and sorts the survivors
/// lexicographically on their components rounded to 1e-8.
pub fn gauge_fix_dedup(raw: &[RangeVector], dedup_tol: f64) -> Result<Vec<RangeVector>> {
    let mut fixed: Vec<(Vec<(i64, i64)>, RangeVector)> = raw
        .iter()
        .map(|v| v.gauge_fixed().map(|g| (g.canonical_key(), g)))
        .collect::<Result<_>>()?;
    fixed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut kept: Vec<RangeVector> = Vec::new();
    for (_, v) in fixed {
        let duplicate = kept
            .iter()
            .any(|k| (k.coefficients() - v.coefficients()).norm() <= dedup_tol);
        if !duplicate {
            kept.push(v);
        }
    }
    Ok(kept)
}
