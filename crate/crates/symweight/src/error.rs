use thiserror::Error;

/// Errors reported by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid codeword: {0}")]
    InvalidCodeword(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("minimum distance is undefined for a code with {0} word(s)")]
    UndefinedDistance(usize),
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duration set is empty or contains a zero duration")]
    InvalidDurations,
    #[error("unsupported length {n} for field of size {q}")]
    UnsupportedLength { n: usize, q: usize },
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("invalid error plan: {0}")]
    InvalidPlan(String),
    #[error("framing error: {len} samples is not a multiple of {frame}")]
    Framing { len: usize, frame: usize },
    #[error("enumeration of {estimate} cases exceeds the cap of {cap}")]
    CapExceeded { estimate: u128, cap: u128 },
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: i64, lo: i64, hi: i64) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::OutOfRange {
            what,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}
