//! Dukego: a Duke on a rectangular board tries to reach an edge while G
//! walls him in with stones.
//!
//! * [`position`] and [`dpn`]: rules, moves and the text notation.
//! * [`solver`]: exact solvers and the fairness table.
//! * [`tactics`]: the Duke's named winning techniques and policy.
//! * [`strategy`]: G's diagram tables, strategy maps and their verification.

pub mod dpn;
pub mod error;
pub mod geometry;
pub mod position;
pub mod solver;
pub mod strategy;
pub mod tactics;

pub use dpn::{format_dpn, parse_dpn};
pub use error::{DpnError, RuleError};
pub use geometry::{Dims, Dir, Square, StoneSet, Symmetry};
pub use position::{BlackHand, Inventory, Move, Player, Position, TerminalStatus, Variant};
