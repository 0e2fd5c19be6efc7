use thiserror::Error;

use crate::board::Coord;
use crate::dsl::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("board dimensions must be at least 1x1, got {rows}x{cols}")]
    InvalidDimensions { rows: usize, cols: usize },

    #[error("coordinate {coord} is outside the {rows}x{cols} board")]
    OutOfBounds { coord: Coord, rows: usize, cols: usize },

    #[error("cell {0} is locked")]
    LockedCell(Coord),

    #[error("invalid game definition ({} diagnostics)", .0.len())]
    InvalidDefinition(Vec<Diagnostic>),

    #[error("operation not allowed in state {0}")]
    WrongState(String),

    #[error("game is full ({0} players)")]
    GameFull(usize),

    #[error("command out of order: expected seq {expected}, got {got}")]
    OutOfOrder { expected: u64, got: u64 },

    #[error("corrupt snapshot: {0}")]
    CorruptSnapshot(String),

    #[error("condition {0} needs a tile coordinate but the event carries none")]
    MissingContext(String),

    #[error("semantics error: {0}")]
    Semantics(String),

    #[error("unknown rule {0:?}")]
    UnknownRule(String),

    #[error("value {0} is outside the value domain")]
    InvalidValue(u32),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("givens are inconsistent: {0}")]
    InvalidGivens(String),
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;
