//! Config-driven pipeline behind the `clusteragg` binary.

pub mod compare;
pub mod config;
pub mod pipeline;
pub mod plots;
pub mod report;
pub mod tune;

pub use config::RunConfig;
pub use pipeline::run;
pub use report::RunReport;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad config, bad arguments or unreadable inputs; exit code 2.
    #[error("{0}")]
    Validation(String),

    /// A pipeline stage failed; exit code 1.
    #[error("{stage}: {source}")]
    Runtime {
        stage: String,
        #[source]
        source: clusteragg::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime { .. } | CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn stage(stage: impl Into<String>) -> impl FnOnce(clusteragg::Error) -> CliError {
        let stage = stage.into();
        move |source| CliError::Runtime { stage, source }
    }

    pub(crate) fn io(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub(crate) fn write_file(path: &std::path::Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(CliError::io(path))
}
