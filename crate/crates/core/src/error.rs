use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside its legal range {range}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("classifier requires zero inertia (delta = {0})")]
    NonZeroInertia(f64),

    #[error("ambiguous at theta0 = 0.5: no initially more popular choice")]
    AmbiguousInitialState,

    #[error("degenerate initial state: {0} component equals 0.5 exactly")]
    DegenerateInitialState(&'static str),

    #[error("boundary regime: parameters sit on a regime boundary")]
    BoundaryRegime,

    #[error("point ({0}, {1}) is not stationary")]
    NonStationary(f64, f64),

    #[error("network must have at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("graph has no edges")]
    EdgelessGraph,

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("trajectory time ranges are disjoint: [{0}, {1}] vs [{2}, {3}]")]
    DisjointTimeRanges(f64, f64, f64, f64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: node {node} has no party label")]
    MissingParty { path: PathBuf, node: usize },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
