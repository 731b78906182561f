//! Machine-readable analysis reports.

use serde::{Deserialize, Serialize};

use separability::criteria::CriterionVerdict;
use separability::pipeline::SearchPath;
use separability::{
    Certificate, ClassifyConfig, Completeness, Complex64, CriterionName, CutMode, DensityMatrix,
    Outcome, Verdict,
};

pub const REPORT_VERSION: &str = concat!("separability ", env!("CARGO_PKG_VERSION"));

/// A complex number as `[re, im]`.
pub type Pair = [f64; 2];

fn pair(z: &Complex64) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateReport {
    Decomposition {
        weights: Vec<f64>,
        /// `factors[term][party]` holds that party's amplitudes.
        factors: Vec<Vec<Vec<Pair>>>,
        residual: f64,
    },
    Criterion {
        name: CriterionName,
        cut: String,
        witness: f64,
    },
    EmptyProductSet,
    InfeasibleCompleteSet {
        residual: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub criteria: Vec<CriterionVerdict>,
    pub search_path: Option<SearchPath>,
    pub candidate_count: Option<usize>,
    pub completeness: Option<Completeness>,
    /// Gauge-fixed coordinates of each candidate in the eigenbasis.
    pub candidates: Vec<Vec<Pair>>,
    pub weight_residual: Option<f64>,
    pub verification_residual: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigReport {
    pub seed: u64,
    pub starts: usize,
    pub max_iters: usize,
    pub defect_tol: f64,
    pub dedup_tol: f64,
    pub grad_tol: f64,
    pub weight_tol: f64,
    pub factor_tol: f64,
    pub decomp_tol: f64,
    pub rank_tol: f64,
    pub psd_tol: f64,
    pub cuts: CutMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub timestamp_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub dims: Vec<usize>,
    pub rank: usize,
    pub eigenvalues: Vec<f64>,
    pub verdict: Outcome,
    pub certificate: Option<CertificateReport>,
    pub diagnostics: DiagnosticsReport,
    pub config: ConfigReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    /// Builds the report for `verdict`; `timing` is left empty.
    pub fn new(rho: &DensityMatrix, verdict: &Verdict, cfg: &ClassifyConfig) -> Self {
        let diag = &verdict.diagnostics;
        let certificate = verdict.certificate.as_ref().map(|c| match c {
            Certificate::Decomposition(d) => CertificateReport::Decomposition {
                weights: d.weights(),
                factors: d
                    .terms()
                    .iter()
                    .map(|t| {
                        t.factors
                            .iter()
                            .map(|f| f.iter().map(pair).collect())
                            .collect()
                    })
                    .collect(),
                residual: diag.verification_residual.unwrap_or(d.residual()),
            },
            Certificate::CriterionViolation(v) => CertificateReport::Criterion {
                name: v.name,
                cut: v.cut.clone(),
                witness: v.witness,
            },
            Certificate::EmptyProductSet => CertificateReport::EmptyProductSet,
            Certificate::InfeasibleWeightsOverCompleteSet { residual } => {
                CertificateReport::InfeasibleCompleteSet {
                    residual: *residual,
                }
            }
        });
        let rank = diag.eigenvalues.len();
        Self {
            version: REPORT_VERSION.to_string(),
            dims: rho.structure().dims().to_vec(),
            rank,
            eigenvalues: diag.eigenvalues.clone(),
            verdict: verdict.outcome,
            certificate,
            diagnostics: DiagnosticsReport {
                criteria: diag.criteria.clone(),
                search_path: diag.search_path,
                candidate_count: diag.candidate_count,
                completeness: diag.completeness,
                candidates: diag
                    .candidates
                    .iter()
                    .map(|y| y.coefficients().iter().map(pair).collect())
                    .collect(),
                weight_residual: diag.weight_residual,
                verification_residual: diag.verification_residual,
                notes: diag.notes.clone(),
            },
            config: ConfigReport {
                seed: cfg.search.seed,
                starts: cfg.search.starts_for(rank),
                max_iters: cfg.search.max_iters,
                defect_tol: cfg.search.defect_tol,
                dedup_tol: cfg.search.dedup_tol,
                grad_tol: cfg.search.grad_tol,
                weight_tol: cfg.decomposition.weight_tol,
                factor_tol: cfg.decomposition.factor_tol,
                decomp_tol: cfg.decomposition.decomp_tol,
                rank_tol: cfg.tolerances.rank,
                psd_tol: cfg.tolerances.psd,
                cuts: cfg.cuts,
            },
            timing: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Process exit code for a verdict.
pub fn exit_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Separable => 0,
        Outcome::Entangled => 2,
        Outcome::Inconclusive => 3,
    }
}
