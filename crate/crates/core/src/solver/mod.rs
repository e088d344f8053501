//! Exact solvers: the retrograde attractor for bounded inventories, the
//! AND-OR search for the standard black-stone game, and the fairness table
//! built on top of them.

mod bounded;
mod cache;
mod index;
mod monotone;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bounded::{solve_bounded, SolveOptions};
pub use cache::{load_cache, read_cache, save_cache, write_cache, CACHE_VERSION};
pub use index::{RawState, StateIndexer, SubsetRanker};
pub use monotone::{solve_monotone, solve_monotone_from, MonotoneProof};

use crate::error::RuleError;
use crate::geometry::Dims;
use crate::position::{Inventory, Move, Player, Position};

/// Per-state value in a solved bounded space. The two G labels both mean
/// the Duke never escapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Label {
    DWin = 0,
    GWinImmobilized = 1,
    Draw = 2,
    Invalid = 3,
}

impl Label {
    fn from_bits(b: u8) -> Label {
        match b & 3 {
            0 => Label::DWin,
            1 => Label::GWinImmobilized,
            2 => Label::Draw,
            _ => Label::Invalid,
        }
    }

    pub fn winner(self) -> Option<Player> {
        match self {
            Label::DWin => Some(Player::D),
            Label::GWinImmobilized | Label::Draw => Some(Player::G),
            Label::Invalid => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::DWin => "D-win",
            Label::GWinImmobilized => "G-win (immobilized)",
            Label::Draw => "G-win (draw)",
            Label::Invalid => "invalid",
        })
    }
}

/// A label together with the distance to a forced escape, when D wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub label: Label,
    pub distance: Option<u16>,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("{dims} w{white} b{black} needs about {states} states, above the cap of {cap}")]
    TooLarge { dims: Dims, white: u8, black: u8, states: u128, cap: u64 },
    #[error("invalid budget: {0}")]
    BadBudget(String),
    #[error("distance to win overflowed 16 bits")]
    DistanceOverflow,
    #[error("position not in this solved space: {0}")]
    OutOfSpace(RuleError),
    #[error(transparent)]
    Rule(RuleError),
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for SolveError {
    fn from(e: std::io::Error) -> Self {
        SolveError::Io(e.to_string())
    }
}

/// Labels (and distances) for every indexed state of one bounded space.
/// Immutable once built.
#[derive(Clone)]
pub struct SolveResult {
    indexer: StateIndexer,
    labels: Vec<u8>,
    distances: Option<Vec<u16>>,
}

impl fmt::Debug for SolveResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolveResult")
            .field("dims", &self.indexer.dims())
            .field("white", &self.indexer.white_budget())
            .field("black", &self.indexer.black_budget())
            .field("states", &self.indexer.total_states())
            .finish()
    }
}

impl PartialEq for SolveResult {
    fn eq(&self, other: &Self) -> bool {
        self.dims() == other.dims()
            && self.budgets() == other.budgets()
            && self.labels == other.labels
            && self.distances == other.distances
    }
}

impl SolveResult {
    pub(crate) fn from_parts(indexer: StateIndexer, labels: Vec<u8>, distances: Option<Vec<u16>>) -> Self {
        SolveResult { indexer, labels, distances }
    }

    pub fn indexer(&self) -> &StateIndexer {
        &self.indexer
    }

    pub fn dims(&self) -> Dims {
        self.indexer.dims()
    }

    pub fn budgets(&self) -> (u8, u8) {
        (self.indexer.white_budget(), self.indexer.black_budget())
    }

    pub fn total_states(&self) -> u64 {
        self.indexer.total_states()
    }

    pub fn packed_labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn distances(&self) -> Option<&[u16]> {
        self.distances.as_deref()
    }

    #[inline]
    pub fn label_at(&self, idx: u64) -> Label {
        Label::from_bits(self.labels[idx as usize / 4] >> (2 * (idx % 4)))
    }

    #[inline]
    pub fn distance_at(&self, idx: u64) -> Option<u16> {
        match &self.distances {
            Some(d) if self.label_at(idx) == Label::DWin => Some(d[idx as usize]),
            _ => None,
        }
    }

    pub fn evaluation_at(&self, idx: u64) -> Evaluation {
        Evaluation { label: self.label_at(idx), distance: self.distance_at(idx) }
    }

    /// Inventory matching this space's budgets with no stones on the board.
    pub fn start_inventory(&self) -> Inventory {
        let (w, b) = self.budgets();
        Inventory::bounded(w, b as u16)
    }

    pub fn start_position(&self, first: Player) -> Position {
        Position::start(self.dims(), self.start_inventory(), first).expect("solved dims are valid")
    }

    pub fn contains(&self, p: &Position) -> bool {
        self.indexer.index_of(p).is_ok()
    }

    pub fn index_of(&self, p: &Position) -> Result<u64, SolveError> {
        self.indexer.index_of(p).map_err(SolveError::OutOfSpace)
    }

    pub fn query_label(&self, p: &Position) -> Result<Label, SolveError> {
        Ok(self.label_at(self.index_of(p)?))
    }

    pub fn evaluate(&self, p: &Position) -> Result<Evaluation, SolveError> {
        Ok(self.evaluation_at(self.index_of(p)?))
    }

    /// Each legal move with the evaluation of its successor.
    pub fn successors(&self, p: &Position) -> Result<Vec<(Move, u64, Evaluation)>, SolveError> {
        self.index_of(p)?;
        let moves = p.legal_moves().map_err(SolveError::Rule)?;
        moves
            .into_iter()
            .map(|mv| {
                let next = p.apply(mv).map_err(SolveError::Rule)?;
                let idx = self.index_of(&next)?;
                Ok((mv, idx, self.evaluation_at(idx)))
            })
            .collect()
    }

    /// A move that keeps the mover's best achievable value. The winning
    /// Duke takes the shortest route, a losing G the longest; a G player
    /// who can hold out takes an immobilizing move if one exists, otherwise
    /// any move staying out of the attractor. Ties go to the lowest
    /// successor index.
    pub fn best_move(&self, p: &Position) -> Result<Move, SolveError> {
        let here = self.evaluate(p)?;
        let succ = self.successors(p)?;
        let key = |&(_, idx, ev): &(Move, u64, Evaluation)| -> (u32, u64) {
            let d = ev.distance.unwrap_or(u16::MAX) as u32;
            let rank = match (p.to_move(), here.label == Label::DWin) {
                (Player::D, true) => d,
                (Player::D, false) => 0,
                (Player::G, true) => u16::MAX as u32 - d,
                (Player::G, false) => match ev.label {
                    Label::GWinImmobilized => 0,
                    Label::Draw => 1,
                    _ => 2,
                },
            };
            (rank, idx)
        };
        succ.iter().min_by_key(|s| key(s)).map(|s| s.0).ok_or(SolveError::Rule(RuleError::GameOver))
    }
}

/// Outcome class of a board: who wins under each choice of first mover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fairness {
    /// D wins whoever moves first.
    D,
    /// G wins whoever moves first.
    G,
    /// The first player to move wins.
    Fair,
}

impl fmt::Display for Fairness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fairness::D => "D",
            Fairness::G => "G",
            Fairness::Fair => "*",
        })
    }
}

/// Classifies the start position of a solved space from its two labels.
pub fn fairness_of(res: &SolveResult) -> Result<Fairness, SolveError> {
    let d_first = res.query_label(&res.start_position(Player::D))?.winner();
    let g_first = res.query_label(&res.start_position(Player::G))?.winner();
    match (d_first, g_first) {
        (Some(Player::D), Some(Player::D)) => Ok(Fairness::D),
        (Some(Player::G), Some(Player::G)) => Ok(Fairness::G),
        (Some(Player::D), Some(Player::G)) => Ok(Fairness::Fair),
        _ => Err(SolveError::Consistency(format!(
            "{} w{} b{}: the second player to move wins, but moving first is never a disadvantage",
            res.dims(),
            res.budgets().0,
            res.budgets().1
        ))),
    }
}

pub fn fairness_entry(dims: Dims, white: u8, black: u8, opts: &SolveOptions) -> Result<Fairness, SolveError> {
    fairness_of(&solve_bounded(dims, white, black, opts)?)
}
