use std::path::PathBuf;

use thiserror::Error;

use crate::types::Stock;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("agent count must be odd, got {0}")]
    EvenAgentCount(usize),

    #[error("{name} = {value} is outside {range}")]
    CoefficientOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("half-width {name} = {value} must be non-negative")]
    NegativeHalfWidth { name: &'static str, value: f64 },

    #[error("event probability {0} must lie in [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("event strength {0} must be non-negative")]
    NegativeStrength(f64),

    #[error("{0} must be positive")]
    NonPositive(&'static str),

    #[error("{0} must be finite")]
    NonFinite(&'static str),

    #[error("price of stock {stock} fell to {price} at step {step}")]
    NonPositivePrice { stock: Stock, step: usize, price: f64 },

    #[error("history has {got} bits, memory is {expected}")]
    HistoryLength { expected: usize, got: usize },

    #[error("strategy table length {0} is not 2^(m+1) for any m >= 1")]
    BadTableLength(usize),

    #[error("degenerate series: {0}")]
    DegenerateSeries(&'static str),

    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("sign-case analysis only covers a = (1, 1), got ({0}, {1})")]
    UnsupportedOwnWeight(f64, f64),

    #[error("coupling ({0}, {1}) is not inside the regime box")]
    OutsideRegime(f64, f64),

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },

    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },

    #[error("axis {name}: {reason}")]
    BadAxis { name: String, reason: String },

    #[error("run {run_index} failed")]
    Run {
        run_index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("cell ({x}, {y}) failed")]
    Cell {
        x: f64,
        y: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
