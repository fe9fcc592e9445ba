use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Every variant maps onto one of the CLI exit classes via [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported algebra {family}{rank}: {reason}")]
    UnsupportedAlgebra {
        family: String,
        rank: usize,
        reason: String,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("element is not fixed by the diagram automorphism (residual {0:.3e})")]
    NotTwistFixed(f64),
    #[error("point outside the open alcove: {0}")]
    OutsideAlcove(String),
    #[error("singular argument x = {0} (too close to 2πℤ)")]
    SingularArgument(f64),
    #[error("momentum constraint infeasible: 𝒦-component has norm {0:.3e}")]
    ConstraintInfeasible(f64),
    #[error("non-generic point: {0}")]
    NonGeneric(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cutoff exceeded: {0}")]
    CutoffExceeded(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// 1 validation, 2 numerical failure, 3 non-generic input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OutsideAlcove(_) | Error::SingularArgument(_) | Error::NonGeneric(_) => 3,
            Error::Numerical(_) | Error::CutoffExceeded(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
