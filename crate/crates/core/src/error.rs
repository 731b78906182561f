use thiserror::Error;

/// Errors raised by the separability toolkit.
///
/// Validation failures carry the measured magnitude of the violated
/// invariant so callers can report how far off the input was.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid party structure: {0}")]
    InvalidStructure(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is not one (got {0})")]
    TraceNotOne(f64),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("party set must be a nonempty proper subset of the parties")]
    EmptyOrFullPartySet,

    #[error("party index {index} out of range for {parties} parties")]
    PartyOutOfRange { index: usize, parties: usize },

    #[error("invalid bipartition: {0}")]
    InvalidCut(String),

    #[error("spectral reconstruction failed: residual {0:e}")]
    Reconstruction(f64),

    #[error("eigenvectors are not orthonormal (defect {0:e})")]
    NotOrthonormal(f64),

    #[error("coefficient vector has length {actual}, basis has rank {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("analytic pencil path requires rank 2, got rank {0}")]
    NotRank2(usize),

    #[error("analytic pencil path requires two parties, got {0}")]
    NotBipartite(usize),

    #[error("candidate set is empty")]
    EmptyCandidates,

    #[error("state is not a product (worst purity defect {0:e})")]
    NotProduct(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input outside the supported envelope: {0}")]
    OutsideEnvelope(String),
}

pub type Result<T> = std::result::Result<T, Error>;
