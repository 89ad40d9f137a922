// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors produced by the library.
///
/// Each variant maps to a stable category string used by the CLI
/// (`error: <category>: <detail>`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Parameter(String),

    /// CSV ingestion failure. `row` is the 1-based data row (header excluded).
    #[error("{}", match .row { Some(r) => format!("row {r}: {}", .message), None => .message.clone() })]
    Ingestion { row: Option<usize>, message: String },

    #[error("distributions have different bin edges")]
    BinningMismatch,

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Internal(String),
}

impl Error {
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Parameter(_) => "parameter",
            Error::Ingestion { .. } => "ingestion",
            Error::BinningMismatch => "binning",
            Error::Io(_) => "io",
            Error::Internal(_) => "internal",
        }
    }

    /// Exit status used by the CLI: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn ingestion(row: Option<usize>, message: impl Into<String>) -> Self {
        Error::Ingestion {
            row,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
