use std::path::PathBuf;

use dirac_tunneling::Error as PhysicsError;

/// Failures surfaced by the command-line driver.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Argument errors and help/version output, rendered by clap.
    #[error("{0}")]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Physics(#[from] PhysicsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 0 success, 1 I/O, 2 invalid input, 3 internal consistency.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Format(_) => 1,
            CliError::Usage(_) => 2,
            // 0 for --help and --version, 2 for malformed arguments
            CliError::Clap(e) => e.exit_code() as u8,
            CliError::Physics(e) => match e {
                PhysicsError::InvalidParameter { .. }
                | PhysicsError::Regime { .. }
                | PhysicsError::OutOfWindow { .. }
                | PhysicsError::SweepPoint { .. }
                | PhysicsError::InvalidSweep(_)
                | PhysicsError::StepUnderflow { .. } => 2,
                PhysicsError::Inconsistent { .. }
                | PhysicsError::Singular
                | PhysicsError::Underflow
                | PhysicsError::QuadratureNonconvergence { .. } => 3,
            },
            CliError::Verification(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
