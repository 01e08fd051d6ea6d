use thiserror::Error;

/// Errors raised while building, loading or validating a game.
#[derive(Debug, Error)]
pub enum GameError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid game field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("index out of range: {what} = {index} (size {size})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },
    #[error("unknown game `{0}`")]
    UnknownGame(String),
}

impl GameError {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        GameError::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// Errors raised by belief arithmetic.
#[derive(Debug, Error, PartialEq)]
pub enum BeliefError {
    #[error("invalid belief: {0}")]
    Invalid(String),
    #[error("observed action is infeasible under every type (normalizer {normalizer:e})")]
    Infeasible { normalizer: f64 },
    #[error("belief grid is empty")]
    EmptyGrid,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Errors raised by the training engine.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error("invalid learner config: {0}")]
    Config(String),
    #[error("non-finite {quantity} at round {round}, point {point}, state {state}")]
    NonFinite {
        quantity: &'static str,
        round: usize,
        point: usize,
        state: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("checkpoint was trained on a different game (expected {expected}, found {found})")]
    GameMismatch { expected: String, found: String },
}

/// Errors raised by the evaluation layer.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error("history does not match the game: {0}")]
    HistoryMismatch(String),
    #[error("enumeration budget exceeded: {needed} histories > budget {budget}; use induced-game evaluation")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid depth {depth} for horizon {horizon}")]
    InvalidDepth { depth: usize, horizon: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}
