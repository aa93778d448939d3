use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse error classes, used by the CLI to pick an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Size,
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("duplicate vertex index {index} in {side} list")]
    DuplicateIndex { side: &'static str, index: usize },

    #[error("unknown coloring family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("size error: {required} cells required, {allowed} allowed")]
    SizeCap { required: u128, allowed: u128 },

    #[error("work cap exceeded: {required} elementary checks required, cap is {cap}")]
    WorkCap { required: u128, cap: u128 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("threshold comparison undecided after {bits} bits of precision")]
    Undecided { bits: u32 },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SizeCap { .. } | Error::WorkCap { .. } => ErrorKind::Size,
            Error::Internal(_) | Error::Undecided { .. } => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
