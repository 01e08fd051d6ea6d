use std::fmt;
use std::process::ExitCode;

use tisp::error::{EvalError, GameError, SolverError};

/// Stable process exit codes; each failure also prints
/// `error: <CODE>: <message>` as a single line on stderr.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Code {
    /// Unknown built-in game name.
    GameNotFound,
    /// Malformed or inconsistent game file or parameters.
    GameInvalid,
    /// Invalid learner or run configuration.
    ConfigInvalid,
    /// Checkpoint missing, unreadable or internally inconsistent.
    CkptInvalid,
    /// Checkpoint fingerprint differs from the named game.
    CkptGameMismatch,
    /// Full history enumeration exceeds the budget.
    BudgetExceeded,
    /// Induced-game depth not below the horizon.
    InvalidDepth,
    /// Malformed inspect query or history.
    BadQuery,
    /// Output could not be written.
    IoError,
    /// Training produced a non-finite quantity.
    TrainingFailed,
}

impl Code {
    pub fn name(self) -> &'static str {
        match self {
            Code::GameNotFound => "GAME_NOT_FOUND",
            Code::GameInvalid => "GAME_INVALID",
            Code::ConfigInvalid => "CONFIG_INVALID",
            Code::CkptInvalid => "CKPT_INVALID",
            Code::CkptGameMismatch => "CKPT_GAME_MISMATCH",
            Code::BudgetExceeded => "BUDGET_EXCEEDED",
            Code::InvalidDepth => "INVALID_DEPTH",
            Code::BadQuery => "BAD_QUERY",
            Code::IoError => "IO_ERROR",
            Code::TrainingFailed => "TRAINING_FAILED",
        }
    }

    /// Exit status; 2 is left to argument-parsing errors.
    pub fn status(self) -> u8 {
        match self {
            Code::GameNotFound => 3,
            Code::GameInvalid => 4,
            Code::ConfigInvalid => 5,
            Code::CkptInvalid => 6,
            Code::CkptGameMismatch => 7,
            Code::BudgetExceeded => 8,
            Code::InvalidDepth => 9,
            Code::BadQuery => 10,
            Code::IoError => 11,
            Code::TrainingFailed => 12,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: Code,
    pub message: String,
}

impl CliError {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn exit(&self) -> ExitCode {
        eprintln!("{self}");
        ExitCode::from(self.code.status())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message.replace('\n', " ");
        write!(f, "error: {}: {}", self.code.name(), one_line)
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        let code = match e {
            GameError::UnknownGame(_) => Code::GameNotFound,
            GameError::Io(_) => Code::IoError,
            _ => Code::GameInvalid,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::GameMismatch { .. } => Code::CkptGameMismatch,
            SolverError::Checkpoint(_) | SolverError::Shape(_) => Code::CkptInvalid,
            SolverError::Config(_) | SolverError::Belief(_) => Code::ConfigInvalid,
            SolverError::NonFinite { .. } => Code::TrainingFailed,
            SolverError::Game(g) => return g.into(),
        };
        CliError::new(code, e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        let code = match e {
            EvalError::Solver(s) => return s.into(),
            EvalError::BudgetExceeded { .. } => Code::BudgetExceeded,
            EvalError::InvalidDepth { .. } => Code::InvalidDepth,
            EvalError::HistoryMismatch(_) | EvalError::Belief(_) => Code::BadQuery,
            EvalError::Invalid(_) => Code::ConfigInvalid,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(Code::IoError, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
