//! Constructive separability decisions for multipartite density matrices.
//!
//! A state is separable exactly when its range contains product vectors
//! `y^(l)` (in coordinates of its eigenbasis) and nonnegative weights `p_l`
//! such that `sum_l p_l y^(l) y^(l)^dagger = diag(lambda)`. This crate
//! searches for such product vectors, solves for the weights, and returns
//! either an explicit decomposition that has been re-verified against the
//! input or an entanglement certificate.
//!
//! Joint indices use party 1 as the slowest-varying digit; see [`tensor`].

#![forbid(unsafe_code)]

pub mod criteria;
pub mod decomposition;
mod error;
pub mod pipeline;
pub mod search;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use criteria::{CriterionName, CriterionOutcome, CriterionVerdict, CutMode};
pub use decomposition::{
    DecompositionConfig, SeparableDecomposition, WeightSolution, WeightVector,
};
pub use pipeline::{classify, classify_with_basis, Certificate, ClassifyConfig, Outcome, Verdict};
pub use search::{CandidateSet, Completeness, RangeVector, SearchConfig};
pub use states::{generate, StateSpec};
pub use tensor::{
    spectral_decompose, validate_density, ComplexMatrix, ComplexVector, DensityMatrix,
    PartyStructure, SpectralBasis, StateVector, Tolerances,
};
