use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} = {got} exceeds the limit of {limit}")]
    SizeGuard {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("coupling graph is not bipartite (odd cycle through spin {spin})")]
    NotBipartite { spin: usize },

    #[error("spin glass has no nonzero couplings")]
    EmptyCouplings,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("energy has imaginary part {0:e}")]
    ImaginaryEnergy(f64),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad input rather than by the machinery itself.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::SizeGuard { .. }
                | Error::NotBipartite { .. }
                | Error::EmptyCouplings
                | Error::InvalidInstance(_)
                | Error::InvalidArgument(_)
                | Error::Json(_)
        )
    }
}
