//! End-to-end classification with certificates.
//!
//! Order of evaluation:
//! 1. spectral decomposition;
//! 2. criteria filters (any violation certifies entanglement);
//! 3. product-vector search (analytic pencil for rank-2 bipartite states,
//!    trivial check for rank 1, multistart descent otherwise);
//! 4. weight solve, decomposition and independent re-verification.
//!
//! `Separable` is only ever returned with a decomposition that re-verifies
//! from its factors. `Entangled` is only returned from a criterion
//! violation, a certified-empty product set, or infeasible weights over a
//! certified-complete product set.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::criteria::{run_criteria, CriterionOutcome, CriterionVerdict, CutMode};
use crate::decomposition::{
    build_decomposition, solve_weights, verify_decomposition, DecompositionConfig,
    SeparableDecomposition, WeightSolution,
};
use crate::error::{Error, Result};
use crate::search::{
    find_product_vectors_numeric, find_product_vectors_rank2_bipartite, gauge_fix_dedup,
    purity_defect, CandidateSet, Completeness, RangeVector, SearchConfig,
};
use crate::tensor::{spectral_decompose, DensityMatrix, SpectralBasis, Tolerances};

pub const PPT_SUFFICIENT_NOTE: &str = "PPT-sufficient, decomposition not found at this budget";

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyConfig {
    pub search: SearchConfig,
    pub tolerances: Tolerances,
    pub decomposition: DecompositionConfig,
    pub cuts: CutMode,
    pub max_rank: usize,
    pub max_total_dim: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            search: SearchConfig::default(),
            tolerances: Tolerances::default(),
            decomposition: DecompositionConfig::default(),
            cuts: CutMode::Single,
            max_rank: 16,
            max_total_dim: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Separable,
    Entangled,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Decomposition(SeparableDecomposition),
    CriterionViolation(CriterionVerdict),
    EmptyProductSet,
    InfeasibleWeightsOverCompleteSet { residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchPath {
    RankOne,
    AnalyticPencil,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub eigenvalues: Vec<f64>,
    pub criteria: Vec<CriterionVerdict>,
    pub search_path: Option<SearchPath>,
    pub candidate_count: Option<usize>,
    /// Gauge-fixed product vectors found by the search, in canonical order.
    pub candidates: Vec<RangeVector>,
    pub completeness: Option<Completeness>,
    pub weight_residual: Option<f64>,
    pub verification_residual: Option<f64>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Absent only for `Inconclusive`.
    pub certificate: Option<Certificate>,
    pub diagnostics: Diagnostics,
}

impl Verdict {
    pub fn decomposition(&self) -> Option<&SeparableDecomposition> {
        match &self.certificate {
            Some(Certificate::Decomposition(d)) => Some(d),
            _ => None,
        }
    }
}

/// Decides separability of `rho`.
pub fn classify(rho: &DensityMatrix, cfg: &ClassifyConfig) -> Result<Verdict> {
    let n = rho.structure().total_dim();
    if n > cfg.max_total_dim {
        return Err(Error::OutsideEnvelope(format!(
            "total dimension {n} exceeds {}",
            cfg.max_total_dim
        )));
    }
    let basis = spectral_decompose(rho, cfg.tolerances.rank)?;
    classify_with_basis(rho, &basis, cfg)
}

/// Like [`classify`] but with a caller-supplied spectral basis, e.g. one
/// whose degenerate eigenspaces were rotated.
pub fn classify_with_basis(
    rho: &DensityMatrix,
    basis: &SpectralBasis,
    cfg: &ClassifyConfig,
) -> Result<Verdict> {
    let started = Instant::now();
    if basis.rank() > cfg.max_rank {
        return Err(Error::OutsideEnvelope(format!(
            "rank {} exceeds {}",
            basis.rank(),
            cfg.max_rank
        )));
    }
    cfg.search.validate()?;
    let mut diag = Diagnostics {
        eigenvalues: basis.eigenvalues().to_vec(),
        ..Diagnostics::default()
    };
    if let Some(l) = basis.unstable_cut() {
        diag.notes.push(format!(
            "eigenvalue {l:e} lies within a decade of the rank cutoff"
        ));
    }

    let finish = |outcome, certificate, mut diag: Diagnostics| {
        diag.elapsed = started.elapsed();
        Ok(Verdict {
            outcome,
            certificate,
            diagnostics: diag,
        })
    };

    diag.criteria = run_criteria(rho, cfg.cuts, &cfg.tolerances)?;
    if let Some(v) = diag.criteria.iter().find(|v| v.is_violation()).cloned() {
        return finish(
            Outcome::Entangled,
            Some(Certificate::CriterionViolation(v)),
            diag,
        );
    }
    let ppt_sufficient = diag
        .criteria
        .iter()
        .any(|v| v.outcome == CriterionOutcome::SufficientSeparable);

    let (path, candidates) = search(basis, &cfg.search, &mut diag.notes)?;
    diag.search_path = Some(path);
    diag.candidate_count = Some(candidates.len());
    diag.candidates = candidates.vectors.clone();
    diag.completeness = Some(candidates.completeness);

    let inconclusive = |mut diag: Diagnostics, note: &str| {
        if ppt_sufficient {
            diag.notes.push(PPT_SUFFICIENT_NOTE.to_string());
        }
        if !note.is_empty() {
            diag.notes.push(note.to_string());
        }
        finish(Outcome::Inconclusive, None, diag)
    };

    if candidates.completeness == Completeness::CertifiedEmpty {
        if ppt_sufficient {
            return inconclusive(
                diag,
                "certified-empty product set conflicts with PPT sufficiency",
            );
        }
        return finish(Outcome::Entangled, Some(Certificate::EmptyProductSet), diag);
    }
    if candidates.is_empty() {
        return inconclusive(diag, "no product vectors found in the range");
    }

    match solve_weights(
        &candidates,
        basis.eigenvalues(),
        cfg.decomposition.weight_tol,
    )? {
        WeightSolution::Feasible { weights, residual } => {
            diag.weight_residual = Some(residual);
            let decomp = build_decomposition(basis, &candidates, &weights, &cfg.decomposition)?;
            let check = verify_decomposition(&decomp, rho)?;
            diag.verification_residual = Some(check);
            if check <= cfg.decomposition.decomp_tol {
                finish(
                    Outcome::Separable,
                    Some(Certificate::Decomposition(decomp)),
                    diag,
                )
            } else {
                inconclusive(diag, "decomposition failed re-verification")
            }
        }
        WeightSolution::Infeasible { residual } => {
            diag.weight_residual = Some(residual);
            if candidates.completeness == Completeness::CertifiedComplete {
                if ppt_sufficient {
                    return inconclusive(diag, "infeasible weights conflict with PPT sufficiency");
                }
                finish(
                    Outcome::Entangled,
                    Some(Certificate::InfeasibleWeightsOverCompleteSet { residual }),
                    diag,
                )
            } else {
                inconclusive(diag, "no feasible weights over the sampled product vectors")
            }
        }
    }
}

fn search(
    basis: &SpectralBasis,
    cfg: &SearchConfig,
    notes: &mut Vec<String>,
) -> Result<(SearchPath, CandidateSet)> {
    let k = basis.rank();
    if k == 1 {
        // The range is a single ray: its one vector either is a product or not.
        let y = RangeVector::from_slice(&[Complex64::new(1.0, 0.0)])?;
        let product = purity_defect(&y, basis)?.total <= cfg.defect_tol;
        let set = if product {
            CandidateSet {
                vectors: vec![y.gauge_fixed()?],
                completeness: Completeness::CertifiedComplete,
            }
        } else {
            CandidateSet {
                vectors: vec![],
                completeness: Completeness::CertifiedEmpty,
            }
        };
        return Ok((SearchPath::RankOne, set));
    }
    if k == 2 && basis.structure().parties() == 2 {
        let analytic = find_product_vectors_rank2_bipartite(basis, cfg)?;
        if analytic.completeness != Completeness::SampledIncomplete {
            return Ok((SearchPath::AnalyticPencil, analytic));
        }
        notes.push("analytic pencil path inconclusive; merged with numeric search".into());
        let numeric = find_product_vectors_numeric(basis, cfg)?;
        let merged: Vec<RangeVector> = analytic
            .vectors
            .into_iter()
            .chain(numeric.vectors)
            .collect();
        return Ok((
            SearchPath::AnalyticPencil,
            CandidateSet {
                vectors: gauge_fix_dedup(&merged, cfg.dedup_tol)?,
                completeness: Completeness::SampledIncomplete,
            },
        ));
    }
    Ok((
        SearchPath::Numeric,
        find_product_vectors_numeric(basis, cfg)?,
    ))
}
