use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("unsupported regime: beta = {beta} must exceed 2")]
    UnsupportedRegime { beta: String },

    /// The orbit landed on a partition endpoint at the given (1-based) step.
    #[error("orbit hit a partition endpoint at step {step} (x = {x})")]
    Boundary { step: usize, x: String },

    #[error("vertex budget of {0} exceeded while building the diagram")]
    VertexBudgetExceeded(usize),

    #[error("diagram depth insufficient: {0}")]
    DepthInsufficient(String),

    #[error("word {0} is not realized by a closed diagram path")]
    Inadmissible(String),

    #[error("matrix is not irreducible on its support")]
    NotIrreducible,

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("requested depth {requested} exceeds available depth {available}")]
    DepthTooLarge { requested: usize, available: usize },

    #[error("prefix tree is empty")]
    EmptyTree,

    #[error("schedule materialized through level {available}, {requested} requested")]
    ScheduleTooShort { requested: usize, available: usize },

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("word set too small: {found} words, {required:.3} required")]
    CardinalityShortfall { found: f64, required: f64 },

    #[error("target unreachable: {0}")]
    TargetUnreachable(String),

    #[error("selector out of range at level {level}")]
    SelectorOutOfRange { level: usize },

    #[error("prefix of length {len} does not reach checkpoint {checkpoint}")]
    PrefixTooShort { len: usize, checkpoint: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
