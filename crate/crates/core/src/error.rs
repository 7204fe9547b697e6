use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SeisError> = std::result::Result<T, E>;

/// Which input of a paired comparison an error belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Reference,
    Alternate,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Reference => f.write_str("reference"),
            Side::Alternate => f.write_str("alternate"),
        }
    }
}

#[derive(Debug, Error)]
pub enum SeisError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("unsupported dtype: {0}")]
    Dtype(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("degenerate rank: {0}")]
    DegenerateRank(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("invalid condition kind: {0}")]
    InvalidKind(String),

    #[error("{side} side: {source}")]
    OnSide {
        side: Side,
        #[source]
        source: Box<SeisError>,
    },

    #[error("condition {condition}, trial {trial}: {source}")]
    InTrial {
        condition: String,
        trial: usize,
        #[source]
        source: Box<SeisError>,
    },
}

impl SeisError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SeisError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn on_side(self, side: Side) -> Self {
        SeisError::OnSide {
            side,
            source: Box::new(self),
        }
    }

    /// Strips side/trial annotations.
    pub fn root(&self) -> &SeisError {
        match self {
            SeisError::OnSide { source, .. } | SeisError::InTrial { source, .. } => source.root(),
            other => other,
        }
    }
}
