//! Engine players: who answers for the side the human does not play.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use dukego::solver::{Evaluation, Label, SolveResult};
use dukego::strategy::{builtin_map, builtin_reduction, GStrategy, ReductionFrame, ReductionStrategy, StrategyMap};
use dukego::tactics::{duke_policy, Rationale, TacticReport};
use dukego::{Dims, Dir, Inventory, Move, Player, Position, Square, Variant};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    /// Tactics for the Duke, strategy tables for G.
    Tactic,
    /// Strategy tables for G, tactics for the Duke.
    Table,
    /// Solver moves only.
    Solver,
    /// Solver when the space is solved, otherwise tactics and tables.
    #[default]
    Auto,
}

impl fmt::Display for EngineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineMode::Tactic => "tactic",
            EngineMode::Table => "table",
            EngineMode::Solver => "solver",
            EngineMode::Auto => "auto",
        })
    }
}

impl FromStr for EngineMode {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tactic" | "tactics" => Ok(EngineMode::Tactic),
            "table" | "tables" => Ok(EngineMode::Table),
            "solver" => Ok(EngineMode::Solver),
            "auto" => Ok(EngineMode::Auto),
            _ => Err(EngineError::Unsupported(format!("unknown engine {s:?}; expected tactic, table, solver or auto"))),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum EngineError {
    #[error("{0}")]
    Unsupported(String),
    #[error("engine failed: {0}")]
    Failed(String),
}

/// G-side table strategies available for a configuration.
#[derive(Clone, Debug)]
pub enum GTable {
    Map(Arc<StrategyMap>),
    Reduction(Arc<ReductionStrategy>),
}

/// Engine memory carried between moves.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EngineToken {
    pub episode: Option<TacticReport>,
    pub frame: Option<ReductionFrame>,
}

/// A move with the reason it was chosen.
#[derive(Clone, Debug, PartialEq)]
pub struct EngineMove {
    pub mv: Move,
    pub rationale: String,
    pub tactic: Option<TacticReport>,
    pub evaluation: Option<Evaluation>,
    pub token: EngineToken,
}

/// The shipped G strategy for a bounded 3-white configuration, if any.
pub fn g_table_for(dims: Dims, hand: Inventory, first: Player) -> Option<GTable> {
    if hand != Inventory::bounded(3, 0) {
        return None;
    }
    if first == Player::G {
        for name in ["7x8w3", "6x9w3"] {
            let map = builtin_map(name).ok()?;
            if map.dims == dims {
                return Some(GTable::Map(Arc::new(map)));
            }
        }
    }
    let (short, long) = (dims.rows.min(dims.cols), dims.rows.max(dims.cols));
    (short >= 7 && long >= 9).then(|| GTable::Reduction(Arc::new(builtin_reduction(dims))))
}

/// Picks the engine move for the side to move in `p`.
pub struct Engine<'a> {
    pub mode: EngineMode,
    pub solver: Option<&'a SolveResult>,
    pub table: Option<&'a GTable>,
}

impl Engine<'_> {
    pub fn choose(&self, p: &Position, token: &EngineToken) -> Result<EngineMove, EngineError> {
        match p.to_move() {
            Player::D => self.duke_move(p, token),
            Player::G => self.g_move(p, token),
        }
    }

    fn solver_move(&self, res: &SolveResult, p: &Position, token: &EngineToken) -> Result<EngineMove, EngineError> {
        let mv = res.best_move(p).map_err(|e| EngineError::Failed(e.to_string()))?;
        let after = p.apply(mv).map_err(|e| EngineError::Failed(e.to_string()))?;
        let ev = res.evaluate(&after).map_err(|e| EngineError::Failed(e.to_string()))?;
        Ok(EngineMove {
            mv,
            rationale: format!("Solver({})", label_text(ev)),
            tactic: None,
            evaluation: Some(ev),
            token: EngineToken { episode: None, ..token.clone() },
        })
    }

    fn duke_move(&self, p: &Position, token: &EngineToken) -> Result<EngineMove, EngineError> {
        if self.mode == EngineMode::Solver {
            let res = self.solver.ok_or_else(|| EngineError::Unsupported("no solved space for the solver engine".into()))?;
            return self.solver_move(res, p, token);
        }
        let solver = if self.mode == EngineMode::Auto { self.solver } else { None };
        let d = duke_policy(p, token.episode, solver).map_err(|e| EngineError::Failed(e.to_string()))?;
        // With a solved space at hand, never give away a won game.
        if let Some(res) = solver {
            let here = res.query_label(p).map_err(|e| EngineError::Failed(e.to_string()))?;
            let after = p.apply(d.mv).map_err(|e| EngineError::Failed(e.to_string()))?;
            if here == Label::DWin && res.query_label(&after).map_err(|e| EngineError::Failed(e.to_string()))? != Label::DWin {
                return self.solver_move(res, p, token);
            }
        }
        let tactic = match d.rationale {
            Rationale::Tactic(r) | Rationale::Opening(r) => Some(r),
            _ => None,
        };
        let evaluation = match d.rationale {
            Rationale::Solver(ev) => Some(ev),
            _ => None,
        };
        Ok(EngineMove {
            mv: d.mv,
            rationale: d.rationale.to_string(),
            tactic,
            evaluation,
            token: EngineToken { episode: d.episode, ..token.clone() },
        })
    }

    fn g_move(&self, p: &Position, token: &EngineToken) -> Result<EngineMove, EngineError> {
        let use_solver = matches!(self.mode, EngineMode::Solver | EngineMode::Auto);
        if let (true, Some(res)) = (use_solver, self.solver) {
            return self.solver_move(res, p, token);
        }
        if self.mode == EngineMode::Solver {
            return Err(EngineError::Unsupported("no solved space for the solver engine".into()));
        }
        if let Some(table) = self.table {
            let (mv, frame, name) = match table {
                GTable::Map(m) => (m.g_move(p, &()).map_err(|e| EngineError::Failed(e.to_string()))?.0, token.frame, "map"),
                GTable::Reduction(r) => {
                    let (mv, frame) = r.g_move(p, &token.frame).map_err(|e| EngineError::Failed(e.to_string()))?;
                    (mv, frame, "reduction")
                }
            };
            return Ok(EngineMove {
                mv,
                rationale: format!("Table({name})"),
                tactic: None,
                evaluation: None,
                token: EngineToken { frame, ..token.clone() },
            });
        }
        if self.mode == EngineMode::Table {
            return Err(EngineError::Unsupported("no G strategy table for this configuration".into()));
        }
        Ok(EngineMove { mv: blocking_move(p), rationale: "Block".into(), tactic: None, evaluation: None, token: token.clone() })
    }
}

fn label_text(ev: Evaluation) -> String {
    match ev.distance {
        Some(d) => format!("{}, {d}", ev.label),
        None => ev.label.to_string(),
    }
}

/// Heuristic G move without a table or solver: cover the Duke's neighbour
/// on his shortest way out.
pub fn blocking_move(p: &Position) -> Move {
    let dims = p.dims();
    let target = exit_square(p);
    let Some(t) = target else { return fallback_g(p) };
    let hand = p.hand();
    if hand.blacks.available() {
        return Move::PlaceBlack(t);
    }
    if hand.whites > 0 {
        return Move::PlaceWhite(t);
    }
    // Relocate the white stone farthest from the Duke.
    let duke = p.duke();
    let far = p.white_squares().into_iter().max_by_key(|s| (s.row.abs_diff(duke.row) + s.col.abs_diff(duke.col), dims.index(*s)));
    match far {
        Some(from) => Move::Relocate { from, to: t },
        None => fallback_g(p),
    }
}

fn fallback_g(p: &Position) -> Move {
    p.legal_moves().ok().and_then(|m| m.into_iter().next()).unwrap_or(Move::Pass)
}

/// The empty neighbour of the Duke that starts a shortest route to an edge.
fn exit_square(p: &Position) -> Option<Square> {
    let dims = p.dims();
    let mut dist = vec![u32::MAX; dims.area()];
    let mut queue = std::collections::VecDeque::new();
    for sq in dims.squares() {
        if dims.is_edge(sq) && p.is_empty(sq) {
            dist[dims.index(sq)] = 0;
            queue.push_back(sq);
        }
    }
    while let Some(sq) = queue.pop_front() {
        for d in Dir::ALL {
            if let Some(t) = dims.step(sq, d) {
                if p.is_empty(t) && dist[dims.index(t)] == u32::MAX {
                    dist[dims.index(t)] = dist[dims.index(sq)] + 1;
                    queue.push_back(t);
                }
            }
        }
    }
    p.duke_steps()
        .filter_map(|d| dims.step(p.duke(), d))
        .filter(|t| dist[dims.index(*t)] != u32::MAX)
        .min_by_key(|t| (dist[dims.index(*t)], dims.index(*t)))
}

/// Whether a side can be played by the engine in this mode at all.
pub fn check_engine_support(mode: EngineMode, side: Player, variant: Variant, solvable: bool, table: bool) -> Result<(), EngineError> {
    match (mode, side) {
        (EngineMode::Solver, _) if !solvable => Err(EngineError::Unsupported(if variant == Variant::Standard {
            "the solver engine needs a bounded inventory".into()
        } else {
            "this configuration is too large to solve; choose another engine".into()
        })),
        (EngineMode::Table, Player::G) if !table => {
            Err(EngineError::Unsupported("no G strategy table for this configuration (tables cover 7x8 and 6x9 with 3 whites and G first, and boards of at least 7x9 with 3 whites)".into()))
        }
        _ => Ok(()),
    }
}
