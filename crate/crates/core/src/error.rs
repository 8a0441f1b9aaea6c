use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unresolved single-qubit placeholder")]
    UnresolvedPlaceholder,
    #[error("width mismatch: circuit has {circuit} qubits, state has {state}")]
    WidthMismatch { circuit: u32, state: u32 },
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("not diagonal: basis input {basis} leaks weight {leak:e}")]
    NotDiagonal { basis: usize, leak: f64 },
    #[error("precision unreachable: no word within depth {depth} reaches eps = {eps:e}")]
    PrecisionUnreachable { eps: f64, depth: usize },
    #[error("word overflow: {blocks} blocks do not fit in {pad}")]
    WordOverflow { blocks: usize, pad: usize },
    #[error("flattening failed: best overlap {best} below floor {floor}")]
    FlatteningFailed { best: f64, floor: f64 },
    #[error("flag amplitude too small: xi = {xi}")]
    FlagAmplitudeTooSmall { xi: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
