use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] fbn_probe::Error),

    #[error("oracle validation failed: {0}")]
    Oracle(String),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("no embedded run configuration in {0}")]
    MissingConfig(PathBuf),

    #[error("malformed run configuration: {0}")]
    BadConfig(#[from] serde_json::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit status: 2 for bad input, 3 when a requested threshold
    /// does not exist, 4 when an oracle check fails.
    pub fn exit_code(&self) -> u8 {
        use fbn_probe::Error as E;
        match self {
            CliError::Usage(_)
            | CliError::MissingConfig(_)
            | CliError::BadConfig(_)
            | CliError::Read { .. } => 2,
            CliError::Model(E::NoThreshold { .. }) => 3,
            CliError::Model(
                E::InvalidHurst(_)
                | E::InvalidCoupling(_)
                | E::InvalidState(_)
                | E::InvalidArgument(_)
                | E::Domain { .. },
            ) => 2,
            CliError::Oracle(_) => 4,
            CliError::Model(_) | CliError::Write { .. } | CliError::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
