use thiserror::Error;

/// Errors surfaced by any stage of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    // ingest
    #[error("required header column `{0}` is missing")]
    MissingHeader(String),
    #[error("unparseable date cell `{value}` at row {row}")]
    MalformedDate { row: usize, value: String },
    #[error("input file contains no data rows")]
    EmptyFile,
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("no rows in the requested date range")]
    EmptyRange,

    // outlier
    #[error("rolling window must be at least 3, got {0}")]
    WindowTooSmall(usize),

    // derive
    #[error("dependency graph contains a cycle or an order inversion at `{0}`")]
    CyclicGraph(String),
    #[error("input column `{input}` for target `{target}` is missing or incomplete")]
    MissingInput { target: String, input: String },
    #[error("population must be positive")]
    NonpositivePopulation,

    // select
    #[error("vectors have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("feature selection removed every feature")]
    Degenerate,

    // model / eval
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("too few rows: got {got}, need at least {need}")]
    TooFewRows { got: usize, need: usize },
    #[error("empty input")]
    Empty,
    #[error("target has zero variance")]
    ZeroVariance,

    // pipeline
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("comparison requires both pipeline runs to have completed")]
    MissingRun,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Tag an error with the pipeline stage it came from.
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
