//! Library half of the `tavis-sim` command: config loading, file emission,
//! figure presets and the oracle verification harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod figures;
pub mod output;
pub mod verify;

use thiserror::Error;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "TAVIS_SIM_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Core(#[from] tavis_core::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {failed} of {total} checks")]
    VerifyFailed { failed: usize, total: usize },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        use tavis_core::Error as E;
        match self {
            CliError::Schema { .. } | CliError::Usage(_) => 2,
            CliError::Core(E::Truncation { .. }) => 3,
            CliError::Core(E::DimensionCap { .. }) => 4,
            CliError::Core(E::InvalidParameter { .. } | E::UndefinedObservable { .. }) => 2,
            CliError::Core(_) | CliError::Io { .. } | CliError::VerifyFailed { .. } => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Applies [`THREADS_ENV`] to the global rayon pool.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))
}
