use std::io;
use std::path::PathBuf;

use vcdsim_core::backhaul::TopologyError;
use vcdsim_core::{PlacementError, RadioError, SimError, TraceError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: u64, msg: String },
    #[error("{file}: {source}")]
    Trace { file: String, source: TraceError },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Json(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Placement(#[from] PlacementError),
    #[error(transparent)]
    Radio(#[from] RadioError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn parse(file: &str, line: u64, msg: impl Into<String>) -> Self {
        Error::Parse { file: file.to_owned(), line, msg: msg.into() }
    }

    /// Process exit status: 2 for problems with what the user asked for,
    /// 1 for failures while doing it.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Io { source, .. } if source.kind() == io::ErrorKind::NotFound => 2,
            Error::Config(_) => 2,
            _ => 1,
        }
    }
}
