use thiserror::Error;

/// Errors raised by the encoding, compilation and simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("assignment has {got} entries, instance has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },

    #[error("assignment entry {index} has value {value}, instance allows 0..{m}")]
    AssignmentValue { index: usize, value: usize, m: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("variable pair ({0}, {1}) is not a valid pair of distinct variables")]
    InvalidPair(usize, usize),

    #[error("penalty weight must be positive and finite, got {0}")]
    InvalidPenalty(f64),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{qubits} qubits exceeds the dense limit of {cap}")]
    QubitCap { qubits: usize, cap: usize },

    #[error("qubit {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("width mismatch: expected {expected} qubits, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("parameter length mismatch: {gammas} gammas vs {betas} betas")]
    ParameterLength { gammas: usize, betas: usize },

    #[error("search space of {size} assignments exceeds the limit of {limit}")]
    SearchSpace { size: f64, limit: f64 },

    #[error("no feasible assignment exists")]
    NoFeasibleAssignment,

    #[error("non-finite expectation {value} at iteration {iteration}")]
    NonFinite { value: f64, iteration: usize },

    #[error("run {run} failed: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
