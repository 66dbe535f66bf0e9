use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("non-finite entries")]
    NonFinite,
    #[error("need 0 < n <= r, got n={n}, r={r}")]
    InvalidDimensions { n: usize, r: usize },
    #[error("basis dimension C({r},{n}) = {dim} exceeds the cap of {cap}")]
    CapExceeded { n: usize, r: usize, dim: u128, cap: usize },
    #[error("invalid determinant index {orbitals:?}: {reason}")]
    InvalidDeterminant { orbitals: Vec<usize>, reason: String },
    #[error("state mismatch: ({n1}, {r1}) vs ({n2}, {r2})")]
    StateMismatch { n1: usize, r1: usize, n2: usize, r2: usize },
    #[error("state is not normalized (norm {0:.12})")]
    NotNormalized(f64),
    #[error("operation needs at least {need} particles, state has {have}")]
    TooFewParticles { need: usize, have: usize },
    #[error("invalid density matrix: {0}")]
    InvalidRdm(String),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("spectrum is not sorted non-increasing")]
    Unsorted,
    #[error("degenerate spectrum: {0}")]
    Degenerate(String),
    #[error("spectrum violates the Borland-Dennis conditions: {0}")]
    BdViolation(String),
    #[error("spectrum is not pairwise degenerate: {0}")]
    PairingFailure(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("anomaly: {0}")]
    Anomaly(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
