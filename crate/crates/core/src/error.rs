use thiserror::Error;

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-stochastic row (x={x}, y={y}, s={s}): sum = {sum}")]
    NonStochasticRow { x: usize, y: usize, s: usize, sum: f64 },

    #[error("negative transition probability at (x={x}, y={y}, s={s}, z={z})")]
    NegativeProbability { x: usize, y: usize, s: usize, z: usize },

    #[error("invalid cost in `{table}` at index {index}: {value}")]
    InvalidCost { table: &'static str, index: usize, value: f64 },

    #[error("infeasible input budget user {user}: budget {budget} below cheapest symbol cost {min_cost}")]
    InfeasibleInputBudget { user: u8, budget: f64, min_cost: f64 },

    #[error("invalid budget `{name}`: {value}")]
    InvalidBudget { name: &'static str, value: f64 },

    #[error("empty alphabet `{0}`")]
    EmptyAlphabet(&'static str),

    #[error("channel file: {0}")]
    ChannelFile(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("sequence length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("symbol {symbol} out of alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("edge count {requested} exceeds the enumeration cap {cap}")]
    EdgeCountAboveCap { requested: usize, cap: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("input distribution does not factorize: {0}")]
    NonFactorizedInput(String),

    #[error("empty feasible input grid: {0}")]
    EmptyGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("composition infeasible at blocklength {n}: {reason}")]
    CompositionInfeasible { n: usize, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("inner and outer bounds failed to collapse: {0}")]
    CollapseViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
