use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The attack radius computed under a log-distance model falls inside the
    /// reference distance, where the model is undefined.
    #[error(
        "attack infeasible beyond reference distance: d_rogue = {d_rogue:.3} m < d0 = {d0:.3} m"
    )]
    BelowReferenceDistance { d_rogue: f64, d0: f64 },

    #[error("no protection ratio entries for {0}")]
    NoEntries(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("grid of {cells} cells exceeds the cap of {cap} cells")]
    CellCapExceeded { cells: u64, cap: u64 },

    #[error("region contains no grid cells")]
    EmptyRegion,

    #[error("impulse response record needs at least two paths, got {0}")]
    InsufficientPaths(usize),

    #[error("ambiguous path assignment: {0}")]
    AmbiguousAssignment(String),

    #[error("no echo path found: {0}")]
    EchoNotFound(String),

    #[error("invalid impulse response record: {0}")]
    InvalidRecord(String),

    #[error("measurement transition not observed: {0}")]
    TransitionNotObserved(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to parse {what}: {source}")]
    Json {
        what: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("malformed raster CSV at line {line}: {msg}")]
    RasterParse { line: usize, msg: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the environment rather than by the inputs.
    pub fn is_runtime(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
