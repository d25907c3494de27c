use cantor_zeros::{AnalysisError, CantorError, EventsError, SequenceError};
use thiserror::Error;

/// Malformed or invalid experiment configuration.
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate key `{0}`")]
    Duplicate(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: cannot parse `{value}`")]
    BadValue { key: String, value: String },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("{0}")]
    Invalid(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{stage}: non-finite value in `{field}`")]
    Numeric { stage: &'static str, field: String },
    #[error("{stage}: {source}")]
    Events {
        stage: &'static str,
        source: EventsError,
    },
    #[error("{stage}: {source}")]
    Analysis {
        stage: &'static str,
        source: AnalysisError,
    },
    #[error("{stage}: {source}")]
    Cantor {
        stage: &'static str,
        source: CantorError,
    },
    #[error("spec `{id}`: {source}")]
    Sequence { id: String, source: SequenceError },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("report: {0}")]
    Report(String),
}

impl LabError {
    /// Process exit code: 2 config, 3 numeric failure, 4 oracle cap, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) | LabError::Sequence { .. } => 2,
            LabError::Cantor {
                source: CantorError::DegenerateGap { .. } | CantorError::Sequence(_),
                ..
            } => 2,
            LabError::Cantor {
                source: CantorError::DepthTooLarge { .. },
                ..
            } => 2,
            LabError::Analysis {
                source: AnalysisError::AnchorNotEndpoint(_),
                ..
            } => 2,
            LabError::Numeric { .. } => 3,
            LabError::Events {
                source: EventsError::OracleCapExceeded { .. },
                ..
            } => 4,
            LabError::Events {
                source: EventsError::ZeroSecondMoment,
                ..
            } => 3,
            _ => 1,
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T, LabError>;
}

impl<T> StageExt<T> for Result<T, EventsError> {
    fn stage(self, stage: &'static str) -> Result<T, LabError> {
        self.map_err(|source| LabError::Events { stage, source })
    }
}

impl<T> StageExt<T> for Result<T, AnalysisError> {
    fn stage(self, stage: &'static str) -> Result<T, LabError> {
        self.map_err(|source| LabError::Analysis { stage, source })
    }
}

impl<T> StageExt<T> for Result<T, CantorError> {
    fn stage(self, stage: &'static str) -> Result<T, LabError> {
        self.map_err(|source| LabError::Cantor { stage, source })
    }
}
