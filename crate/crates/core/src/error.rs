use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chain needs an even number of sites >= 2, got {0}")]
    InvalidSiteCount(usize),

    #[error("{what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("skew-symmetric matrix must have even dimension, got {0}")]
    OddDimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("string distance {distance} outside 1..={max}")]
    DistanceOutOfRange { distance: usize, max: usize },

    #[error("start site {site} outside a chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("singular value decomposition did not converge")]
    NoConvergence,

    #[error("the initial Bogoliubov vacuum lies in the odd-parity sector")]
    OddGroundParity,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scaling fit needs at least {needed} samples in the window, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("{failed} of {total} disorder realizations failed (first error: {first})")]
    EnsembleFailure {
        failed: usize,
        total: usize,
        first: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(values: &[f64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
