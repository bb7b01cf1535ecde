//! Error type shared by every module of the simulator.

use std::path::PathBuf;

/// Errors raised by geometry, channel, field, network and CLI operations.
///
/// Messages are prefixed with the originating module so that failures
/// propagated up to the command line stay attributable.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{module}: invalid argument: {message}")]
    InvalidArgument {
        module: &'static str,
        message: String,
    },

    #[error("{module}: degenerate geometry: {message}")]
    DegenerateGeometry {
        module: &'static str,
        message: String,
    },

    #[error("channel: outside model domain: {0}")]
    ModelDomain(String),

    #[error("field: lens plane undersampled ({message}); need at least {required} samples per axis")]
    Sampling { message: String, required: usize },

    #[error("field: grid carries no energy")]
    EmptyField,

    #[error("field: phase undefined along circle: {0}")]
    UndefinedPhase(String),

    #[error("config: `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(module: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            module,
            message: message.into(),
        }
    }

    pub(crate) fn degenerate(module: &'static str, message: impl Into<String>) -> Self {
        Error::DegenerateGeometry {
            module,
            message: message.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
