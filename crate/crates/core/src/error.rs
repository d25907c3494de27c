//! Error types for every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SequenceError {
    #[error("a_{index} = {value} is not a positive finite number")]
    NonPositiveEntry { index: usize, value: f64 },
    #[error("table has {got} entries, {needed} needed")]
    TableTooShort { needed: usize, got: usize },
    #[error("branching factor {0} is below 2")]
    BranchingTooSmall(u32),
    #[error("epsilon {0} is outside (0, 1)")]
    EpsilonOutOfRange(f64),
    #[error("{0}")]
    InvalidParameter(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CantorError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("gap between siblings closes at level {level}: b_n - k b_(n+1) = {gap}")]
    DegenerateGap { level: usize, gap: f64 },
    #[error("depth {depth} exceeds the supported maximum {max}")]
    DepthTooLarge { depth: usize, max: usize },
    #[error("level {level} exceeds the built depth {depth}")]
    LevelExceedsDepth { level: usize, depth: usize },
    #[error("intervals live on levels {left} and {right}")]
    MismatchedLevels { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BrownianError {
    #[error("time grid must start at 0 and be strictly increasing")]
    InvalidGrid,
    #[error("segment ({0}, {1}) is not a valid pair of grid indices")]
    InvalidSegment(usize, usize),
    #[error("time {0} is not strictly inside the segment")]
    TimesOutsideSegment(f64),
    #[error("time {0} is not a grid point")]
    TimesNotOnGrid(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EventsError {
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("path grid lacks the endpoint {0}")]
    GridMisaligned(f64),
    #[error("level {level} needs {intervals} intervals, oracle cap is {cap}")]
    OracleCapExceeded {
        level: usize,
        intervals: u64,
        cap: u64,
    },
    #[error("second moment is zero")]
    ZeroSecondMoment,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error(transparent)]
    Events(#[from] EventsError),
    #[error("anchor {0} is not an interval endpoint")]
    AnchorNotEndpoint(f64),
    #[error("sum of a_n does not appear to converge")]
    RegimeMismatch,
    #[error("{0}")]
    InvalidArgument(&'static str),
}
