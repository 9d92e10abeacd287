use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive form")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("columns are not linearly independent")]
    NotIndependent,
    #[error("empty point set")]
    EmptyInput,
    #[error("polytope is not full-dimensional: affine dimension {affine_dim} in ambient dimension {ambient_dim}")]
    NotFullDimensional { affine_dim: usize, ambient_dim: usize },
    #[error("origin is not contained in {side}")]
    OriginMissing { side: String },
    #[error("resource cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: u64 },
    #[error("Ehrhart interpolation disagrees with direct count at n={n}: interpolated {interpolated}, counted {counted}")]
    InterpolationMismatch {
        n: usize,
        interpolated: String,
        counted: String,
    },
    #[error("delta coefficient {index} is {value}, expected 0")]
    DeltaTailNonzero { index: usize, value: String },
    #[error("Hilbert function not stabilized within cap {cap} ({computed} values computed)")]
    HilbertNotStabilized { cap: usize, computed: usize },
    #[error("lattice-point condition methods disagree: direct={direct}, witness-set criterion={witness_sets}")]
    MethodsDisagree { direct: bool, witness_sets: bool },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that signal a bug in this crate (or a counterexample), as
    /// opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InterpolationMismatch { .. }
                | Error::DeltaTailNonzero { .. }
                | Error::MethodsDisagree { .. }
        )
    }

    pub(crate) fn cap(what: impl Into<String>, limit: u64) -> Self {
        Error::CapExceeded {
            what: what.into(),
            limit,
        }
    }
}
