//! File formats and plotting around [`pulsefront_core`]: JSON profile
//! descriptors, CSV tables and SVG line plots.

pub mod config;
pub mod plot;
pub mod table;

use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{name}: {source}", name = source.name())]
    Model {
        #[from]
        source: pulsefront_core::Error,
    },

    #[error("InvalidConfig: {0}")]
    Config(String),

    #[error("Io: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("Csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("MissingColumn: no column {name:?} (have {available:?})")]
    MissingColumn {
        name: String,
        available: Vec<String>,
    },

    #[error("EmptyCsv: {0} has no data rows")]
    EmptyCsv(PathBuf),

    #[error("BadValue: row {row}, column {column:?}: {value:?} is not a finite number")]
    BadValue {
        row: usize,
        column: String,
        value: String,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 3 for numerical failures, 2 for everything the
    /// caller can fix by changing the input.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Model { source } if source.class() == pulsefront_core::ErrorClass::Numerical => 3,
            _ => 2,
        }
    }
}
