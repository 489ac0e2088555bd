use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),

    #[error("unknown model `{0}` (expected one of unitary-qm, collapse, toy-theta, lhv)")]
    UnknownModel(String),

    #[error("unknown scenario `{0}` (expected bell or ewfs)")]
    UnknownScenario(String),

    #[error("trial index {index} out of range for {trials} trials")]
    TrialOutOfRange { index: u64, trials: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid run log: {0}")]
    Log(String),

    #[error("empty cell for setting pair ({x}, {y})")]
    EmptyCell { x: u8, y: u8 },

    #[error("missing setting coverage: {0}")]
    MissingCoverage(String),

    #[error("cannot write output `{path}`: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
