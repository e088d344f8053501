//! G-side strategies: letter diagrams played by table lookup, strategy
//! maps extracted from solved spaces, the reduction of large boards to
//! smaller solved ones, and exhaustive verification of all of them.

mod builtin;
mod diagram;
mod map;
mod reduction;
mod table;
mod verify;

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

pub use builtin::{builtin_map, builtin_maps, builtin_names, builtin_reduction};
pub use diagram::{format_diagrams, parse_diagrams, validate_local, Cell, Diagram, DiagramError, DiagramSet, StoneColor, Violation};
pub use map::{extract_g_strategy, StrategyMap};
pub use reduction::{reduction_move, ReductionFrame, ReductionStrategy};
pub use table::{g_table_move, rotation_guard, TableState, TableStrategy};
pub use verify::{verify_g_strategy, Counterexample, Verdict};

use crate::error::RuleError;
use crate::geometry::Dims;
use crate::position::{Move, Position};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    /// The strategy has no acceptable move: an invalid table or a hole in
    /// a map.
    #[error("strategy failure: {0}")]
    Failure(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unsupported board: {0}")]
    Unsupported(String),
    #[error("strategy file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// A G strategy with a small amount of memory carried between moves.
pub trait GStrategy {
    type Token: Clone + Eq + Hash + fmt::Debug;

    fn dims(&self) -> Dims;

    fn initial_token(&self) -> Self::Token;

    /// G's move in `p` (G to move) and the token for her next turn.
    fn g_move(&self, p: &Position, token: &Self::Token) -> Result<(Move, Self::Token), StrategyError>;
}
