use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(toric_qfi::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("self-test failed: {0}")]
    Selftest(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
            CliError::Selftest(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<toric_qfi::Error> for CliError {
    /// Parameter and range errors are configuration problems; the rest are
    /// numerical failures.
    fn from(e: toric_qfi::Error) -> Self {
        use toric_qfi::Error as E;
        match e {
            E::InvalidSiteCount(_)
            | E::LengthMismatch { .. }
            | E::DistanceOutOfRange { .. }
            | E::SiteOutOfRange { .. }
            | E::InvalidParameter(_)
            | E::TooFewSamples { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_qfi::Error as E;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(E::InvalidParameter("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(E::InvalidSiteCount(3)).exit_code(), 2);
        assert_eq!(CliError::from(E::NoConvergence).exit_code(), 3);
        assert_eq!(CliError::from(E::OddGroundParity).exit_code(), 3);
        let ens = E::EnsembleFailure {
            failed: 3,
            total: 10,
            first: Box::new(E::NoConvergence),
        };
        assert_eq!(CliError::from(ens).exit_code(), 3);
        assert_eq!(CliError::Selftest("x".into()).exit_code(), 4);
    }
}
