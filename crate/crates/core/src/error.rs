use thiserror::Error;

use crate::geometry::{Dims, Square};

/// Rule violations and malformed positions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("bad board dimensions {0}: {1}")]
    BadDims(Dims, &'static str),
    #[error("square {0} is off the board")]
    OutOfBounds(Square),
    #[error("square {0} is occupied")]
    Occupied(Square),
    #[error("square {0} holds more than one piece")]
    Overlap(Square),
    #[error("no white stone on {0}")]
    NotWhite(Square),
    #[error("no {0} stones left in hand")]
    EmptyHand(&'static str),
    #[error("it is {0}'s turn")]
    WrongTurn(char),
    #[error("the Duke cannot step {0}: {1}")]
    BlockedStep(char, &'static str),
    #[error("passing and relocating are only allowed in the wandering-stone variant")]
    VariantOnly,
    #[error("the game is already over")]
    GameOver,
    #[error("{0}")]
    Syntax(String),
}

/// Errors from the textual position notation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpnError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid position: {0}")]
    Invalid(#[from] RuleError),
}
