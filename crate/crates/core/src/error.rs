use thiserror::Error;

/// Errors produced by the ground-truth pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frame mismatch: expected `{expected}`, found `{found}`")]
    FrameMismatch { expected: String, found: String },

    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },

    #[error("length mismatch: {left} source points vs {right} destination points")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate point set: conditioning ratio {ratio:e} is below {threshold:e}")]
    Degenerate { ratio: f64, threshold: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid value: {0}")]
    Invalid(String),

    #[error("time {t} s is outside the sample range [{first}, {last}] s")]
    OutOfRange { t: f64, first: f64, last: f64 },

    #[error("interpolation gap of {gap} s at t = {t} s exceeds max_gap {max_gap} s")]
    Gap { t: f64, gap: f64, max_gap: f64 },

    #[error("line {line}: malformed header: {message}")]
    Header { line: usize, message: String },

    #[error("{skipped} of {total} rows rejected (more than 10%); first failure at line {first_line}: {first_reason}")]
    TooManyRejected {
        skipped: usize,
        total: usize,
        first_line: usize,
        first_reason: String,
    },

    #[error("index {index} out of range for {len} records")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cannot summarize an empty error list")]
    EmptySummary,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
