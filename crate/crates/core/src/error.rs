use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the surface kernel.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument fell outside the range an operation accepts.
    #[error("{what} = {value} is outside its domain {expected}")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A domain point lies outside the polygon.
    #[error("point ({u}, {v}) is outside the domain polygon (fails the test for edge {edge})")]
    OutsideDomain { u: f64, v: f64, edge: usize },

    #[error("side index {index} out of range for a {n}-sided network")]
    SideIndex { index: usize, n: usize },

    /// Wrong number of sides, malformed curve, non-convex domain and the like.
    #[error("invalid structure: {0}")]
    Structure(String),

    /// Two or more square-domain parameters vanish at once.
    #[error("blend is singular: {0} parameters are zero")]
    Singular(usize),

    #[error("network has {network} sides but the domain polygon has {domain}")]
    SideCountMismatch { network: usize, domain: usize },

    #[error("meshes differ in topology: {0}")]
    Topology(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed network file: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed mesh file: {0}")]
    MeshFormat(String),

    #[error("benchmark setup: {0}")]
    Bench(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
