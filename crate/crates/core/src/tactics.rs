//! The Duke's named tactics and the composite Duke policy.
//!
//! * **Imminent Win**: the Duke is one line away from an edge and at most
//!   one stone sits in the two lines nearest that edge. Whoever moves, the
//!   Duke steps onto the edge or runs along his line away from the other
//!   stone; G must keep blocking the edge square beside him and never gets
//!   a spare move to block the run.
//! * **Corner Win**: the Duke is two lines from one edge and three from a
//!   perpendicular edge with the two outer lines of both edges empty and
//!   the square toward the second edge empty. A two-step script forces an
//!   Imminent Win.
//! * **Fantastic Imminent Win**: against at most two white stones and one
//!   black stone the line next to the Duke is treated as an edge; each
//!   "escape" through it moves him one line closer to the real edge.
//!
//! Tactics keep a little memory between turns (edge, run direction, corner
//! orientation) in an episode token, an `Option<TacticReport>` owned by
//! the caller.

use std::collections::VecDeque;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{Dims, Dir, Square, StoneSet};
use crate::position::{Move, Player, Position, TerminalStatus, Variant};
use crate::solver::{Evaluation, Label, SolveResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TacticKind {
    ImminentWin,
    CornerWin,
    Fantastic,
}

/// A tactic in force, with its orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TacticReport {
    pub kind: TacticKind,
    /// Imminent Win: the edge being attacked. Corner Win: the edge two
    /// lines away. Fantastic: the direction of the fantasy edge.
    pub edge: Dir,
    /// Corner Win only: the edge three lines away.
    pub side: Option<Dir>,
    /// Fixed once the Duke starts running along his line.
    pub running_direction: Option<Dir>,
    /// Fantastic only: row (N/S) or column (E/W) index of the fantasy edge.
    pub fantasy_line: Option<u8>,
}

impl TacticReport {
    pub fn imminent(edge: Dir) -> Self {
        TacticReport { kind: TacticKind::ImminentWin, edge, side: None, running_direction: None, fantasy_line: None }
    }

    pub fn corner(edge: Dir, side: Dir) -> Self {
        TacticReport { kind: TacticKind::CornerWin, edge, side: Some(side), running_direction: None, fantasy_line: None }
    }

    /// Compass name of the orientation: `S` for an edge, `SE` for a corner.
    pub fn orientation(&self) -> String {
        match self.side {
            Some(side) => {
                let (v, h) = if self.edge.is_vertical() { (self.edge, side) } else { (side, self.edge) };
                format!("{v}{h}")
            }
            None => self.edge.to_string(),
        }
    }
}

impl fmt::Display for TacticReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.kind, self.orientation())
    }
}

impl Serialize for TacticReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TacticReport", 4)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("orientation", &self.orientation())?;
        st.serialize_field("direction", &self.running_direction)?;
        st.serialize_field("fantasyLine", &self.fantasy_line)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TacticError {
    #[error("tactic failure: {0}")]
    Failure(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

fn fail(msg: impl Into<String>) -> TacticError {
    TacticError::Failure(msg.into())
}

/// Stones in the Duke's line and the next line toward `toward`, excluding
/// the Duke's own square.
fn band(p: &Position, toward: Dir) -> StoneSet {
    let dims = p.dims();
    let depth = dims.distance_to_edge(p.duke(), toward);
    let mut lines = dims.line(toward, depth);
    if depth > 0 {
        lines = lines.union(dims.line(toward, depth - 1));
    }
    p.stones().intersection(lines)
}

/// Squares of the two band lines strictly beyond the Duke in direction `run`.
fn run_path(dims: Dims, duke: Square, toward: Dir, run: Dir) -> StoneSet {
    let mut set = StoneSet::EMPTY;
    let mut here = dims.step(duke, run);
    while let Some(sq) = here {
        set.insert(dims.index(sq));
        if let Some(t) = dims.step(sq, toward) {
            set.insert(dims.index(t));
        }
        here = dims.step(sq, run);
    }
    set
}

const EDGE_ORDER: [Dir; 4] = [Dir::S, Dir::E, Dir::N, Dir::W];

pub fn detect_imminent_win(p: &Position) -> Option<TacticReport> {
    if p.terminal_status() != TerminalStatus::Ongoing {
        return None;
    }
    let dims = p.dims();
    EDGE_ORDER
        .into_iter()
        .find(|&e| dims.distance_to_edge(p.duke(), e) == 1 && band(p, e).len() <= 1)
        .map(TacticReport::imminent)
}

pub fn detect_corner_win(p: &Position) -> Option<TacticReport> {
    if p.terminal_status() != TerminalStatus::Ongoing {
        return None;
    }
    let dims = p.dims();
    let duke = p.duke();
    let stones = p.stones();
    for e1 in EDGE_ORDER {
        for e2 in e1.perpendicular() {
            if dims.extent(e1) < 5 || dims.extent(e2) < 5 {
                continue;
            }
            if dims.distance_to_edge(duke, e1) != 2 || dims.distance_to_edge(duke, e2) != 3 {
                continue;
            }
            let shaded = dims.line(e1, 0).union(dims.line(e1, 1)).union(dims.line(e2, 0)).union(dims.line(e2, 1));
            let beside = dims.step(duke, e2).expect("three lines from the edge");
            if stones.intersection(shaded).is_empty() && p.is_empty(beside) {
                return Some(TacticReport::corner(e1, e2));
            }
        }
    }
    None
}

/// Steps toward the (real or fantasy) edge in direction `toward` if the
/// square is free, otherwise runs along the Duke's line. The run direction
/// is chosen once, away from the stones in the band, and then kept.
fn line_run_move(p: &Position, toward: Dir, run: Option<Dir>) -> Result<(Move, Option<Dir>), TacticError> {
    let dims = p.dims();
    let duke = p.duke();
    let target = dims.step(duke, toward).ok_or_else(|| fail("no line beyond the Duke"))?;
    if p.is_empty(target) {
        return Ok((Move::Step(toward), run));
    }
    if let Some(r) = run {
        return match dims.step(duke, r) {
            Some(sq) if p.is_empty(sq) => Ok((Move::Step(r), Some(r))),
            _ => Err(fail(format!("run {r} blocked"))),
        };
    }
    let stones = p.stones();
    let clear: Vec<Dir> = toward
        .perpendicular()
        .into_iter()
        .filter(|&r| stones.intersection(run_path(dims, duke, toward, r)).is_empty())
        .collect();
    let best = clear
        .into_iter()
        .min_by_key(|&r| dims.distance_to_edge(duke, r))
        .ok_or_else(|| fail("stones on both sides of the Duke"))?;
    Ok((Move::Step(best), Some(best)))
}

/// Move for an Imminent Win episode; returns the report with the run
/// direction filled in.
pub fn imminent_win_move(p: &Position, r: &TacticReport) -> Result<(Move, TacticReport), TacticError> {
    if p.to_move() != Player::D {
        return Err(TacticError::Contract("Duke is not to move".into()));
    }
    if p.dims().distance_to_edge(p.duke(), r.edge) != 1 {
        return Err(fail(format!("Duke left the line next to the {} edge", r.edge)));
    }
    let (mv, run) = line_run_move(p, r.edge, r.running_direction)?;
    Ok((mv, TacticReport { running_direction: run, ..*r }))
}

/// Scripted Corner Win move. In the south-east orientation the Duke starts
/// at (m-2, n-3); A = (m-1, n-3), square 1 = (m-2, n-2), B = (m-2, n-1),
/// square 2 = (m-1, n-2).
pub fn corner_win_move(p: &Position, r: &TacticReport) -> Result<Move, TacticError> {
    if p.to_move() != Player::D {
        return Err(TacticError::Contract("Duke is not to move".into()));
    }
    let side = r.side.ok_or_else(|| TacticError::Contract("not a corner report".into()))?;
    let dims = p.dims();
    let duke = p.duke();
    let d1 = dims.distance_to_edge(duke, r.edge);
    let d2 = dims.distance_to_edge(duke, side);
    let free = |d: Dir| dims.step(duke, d).is_some_and(|s| p.is_empty(s));
    match (d1, d2) {
        (2, 3) if free(r.edge) => Ok(Move::Step(r.edge)),
        (2, 3) if free(side) => Ok(Move::Step(side)),
        (2, 2) if free(side) => Ok(Move::Step(side)),
        (2, 2) if free(r.edge) => Ok(Move::Step(r.edge)),
        _ => Err(fail(format!("position does not fit the {} script", r))),
    }
}

fn black_behind(p: &Position, d: Dir) -> bool {
    let dims = p.dims();
    let depth = dims.distance_to_edge(p.duke(), d);
    p.blacks().iter().all(|i| dims.distance_to_edge(dims.square(i), d) > depth)
}

/// Direction for a Fantastic Imminent Win. With a black stone on the
/// board, the first direction (S, E, N, W) leaving it strictly behind the
/// Duke; otherwise the first direction whose band holds at most one stone.
pub fn fantastic_direction(p: &Position) -> Result<Dir, TacticError> {
    if p.variant() != Variant::Bounded || p.white_budget() > 2 || p.black_budget().is_none_or(|b| b > 1) {
        return Err(TacticError::Contract("Fantastic Imminent Win needs at most two white and one black stone".into()));
    }
    if !p.blacks().is_empty() {
        return EDGE_ORDER
            .into_iter()
            .find(|&d| black_behind(p, d))
            .ok_or_else(|| TacticError::Contract("black stone on the Duke's square".into()));
    }
    EDGE_ORDER
        .into_iter()
        .find(|&d| band(p, d).len() <= 1)
        .ok_or_else(|| fail("every band holds two stones"))
}

fn fantastic_applies(p: &Position) -> bool {
    p.variant() == Variant::Bounded && p.white_budget() <= 2 && p.black_budget().is_some_and(|b| b <= 1)
}

/// Why the policy chose its move.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rationale {
    /// A step straight onto the edge.
    EdgeStep(Dir),
    Tactic(TacticReport),
    /// A step into a position where the given tactic is in force.
    Opening(TacticReport),
    Solver(Evaluation),
    Greedy,
}

impl fmt::Display for Rationale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rationale::EdgeStep(d) => write!(f, "EdgeStep({d})"),
            Rationale::Tactic(r) => write!(f, "{r}"),
            Rationale::Opening(r) => write!(f, "Opening->{r}"),
            Rationale::Solver(ev) => match ev.distance {
                Some(d) => write!(f, "Solver({}, {d})", ev.label),
                None => write!(f, "Solver({})", ev.label),
            },
            Rationale::Greedy => write!(f, "Greedy"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub mv: Move,
    /// Episode token for the Duke's next turn.
    pub episode: Option<TacticReport>,
    pub rationale: Rationale,
}

/// Episode to carry after playing `mv` from `p` while in `current`.
fn follow_up(p: &Position, mv: Move, current: Option<TacticReport>) -> Option<TacticReport> {
    let next = p.apply(mv).ok()?;
    if next.terminal_status() != TerminalStatus::Ongoing {
        return None;
    }
    match current {
        Some(r) if r.kind == TacticKind::ImminentWin => return Some(r),
        Some(r) if r.kind == TacticKind::Fantastic => {
            if let Move::Step(d) = mv {
                if d == r.edge {
                    // Escaped through the fantasy edge; the next one is a line further.
                    let line = fantasy_line(next.dims(), next.duke(), r.edge);
                    return detect_imminent_win(&next).or(Some(TacticReport {
                        running_direction: None,
                        fantasy_line: line,
                        ..r
                    }));
                }
            }
            return detect_imminent_win(&next).or(Some(r));
        }
        // A running corner script outranks a fresh corner elsewhere; on
        // short boards the two can alternate forever.
        Some(r) if r.kind == TacticKind::CornerWin => return detect_imminent_win(&next).or(Some(r)),
        _ => {}
    }
    detect_imminent_win(&next).or_else(|| detect_corner_win(&next)).or(current)
}

fn fantasy_line(dims: Dims, duke: Square, d: Dir) -> Option<u8> {
    let t = dims.step(duke, d)?;
    Some(if d.is_vertical() { t.row } else { t.col })
}

/// Greedy fallback: first step of a shortest path over empty squares to
/// any edge square.
fn greedy_step(p: &Position) -> Option<Dir> {
    let dims = p.dims();
    let mut dist = vec![u16::MAX; dims.area()];
    let mut q = VecDeque::new();
    for sq in dims.squares() {
        if dims.is_edge(sq) && (p.is_empty(sq) || sq == p.duke()) {
            dist[dims.index(sq)] = 0;
            q.push_back(sq);
        }
    }
    while let Some(sq) = q.pop_front() {
        let d = dist[dims.index(sq)];
        for dir in Dir::ALL {
            if let Some(t) = dims.step(sq, dir) {
                let ti = dims.index(t);
                if dist[ti] == u16::MAX && p.is_empty(t) {
                    dist[ti] = d + 1;
                    q.push_back(t);
                }
            }
        }
    }
    p.duke_steps().min_by_key(|&dir| dist[dims.index(dims.step(p.duke(), dir).unwrap())])
}

/// The Duke's policy. Priority: step onto an edge; Imminent Win; Corner
/// Win; step into a position where one of those is in force (openings);
/// Fantastic Imminent Win when G's stones allow; solver move; greedy run
/// for the nearest edge. Always returns a legal move on an ongoing
/// position with the Duke to move.
pub fn duke_policy(p: &Position, episode: Option<TacticReport>, solver: Option<&SolveResult>) -> Result<Decision, TacticError> {
    if p.to_move() != Player::D || p.terminal_status() != TerminalStatus::Ongoing {
        return Err(TacticError::Contract("duke_policy needs an ongoing position with the Duke to move".into()));
    }
    let dims = p.dims();
    let duke = p.duke();

    // (1) edge step
    if let Some(d) = p.duke_steps().find(|&d| dims.is_edge(dims.step(duke, d).unwrap())) {
        return Ok(Decision { mv: Move::Step(d), episode: None, rationale: Rationale::EdgeStep(d) });
    }

    // (2) Imminent Win: running episode, fresh detection, or a clear run.
    let imminent = match episode {
        Some(r) if r.kind == TacticKind::ImminentWin => Some(r),
        _ => detect_imminent_win(p),
    };
    if let Some(r) = imminent {
        if let Ok((mv, r)) = imminent_win_move(p, &r) {
            return Ok(Decision { mv, episode: follow_up(p, mv, Some(r)), rationale: Rationale::Tactic(r) });
        }
    }
    for e in EDGE_ORDER {
        if dims.distance_to_edge(duke, e) == 1 {
            let r = TacticReport::imminent(e);
            if let Ok((mv, r)) = imminent_win_move(p, &r) {
                return Ok(Decision { mv, episode: follow_up(p, mv, Some(r)), rationale: Rationale::Tactic(r) });
            }
        }
    }

    // (3) Corner Win
    let corner = match episode {
        Some(r) if r.kind == TacticKind::CornerWin => Some(r),
        _ => detect_corner_win(p),
    };
    if let Some(r) = corner {
        if let Ok(mv) = corner_win_move(p, &r) {
            return Ok(Decision { mv, episode: follow_up(p, mv, Some(r)), rationale: Rationale::Tactic(r) });
        }
    }

    // (4) openings: step into a tactic
    for d in EDGE_ORDER {
        let Some(t) = dims.step(duke, d) else { continue };
        if !p.is_empty(t) {
            continue;
        }
        let next = p.apply(Move::Step(d)).expect("empty neighbour");
        if let Some(r) = detect_imminent_win(&next).or_else(|| detect_corner_win(&next)) {
            return Ok(Decision { mv: Move::Step(d), episode: Some(r), rationale: Rationale::Opening(r) });
        }
    }

    // (5) Fantastic Imminent Win
    if fantastic_applies(p) {
        let current = match episode {
            Some(r) if r.kind == TacticKind::Fantastic && black_behind(p, r.edge) => Some(r),
            _ => None,
        };
        let r = match current {
            Some(r) => r,
            None => {
                let d = fantastic_direction(p)?;
                TacticReport {
                    kind: TacticKind::Fantastic,
                    edge: d,
                    side: None,
                    running_direction: None,
                    fantasy_line: fantasy_line(dims, duke, d),
                }
            }
        };
        // The fantasy edge sits next to the Duke; a run keeps the same line.
        let r = TacticReport { fantasy_line: fantasy_line(dims, duke, r.edge), ..r };
        if let Ok((mv, run)) = line_run_move(p, r.edge, r.running_direction) {
            let r = TacticReport { running_direction: run, ..r };
            return Ok(Decision { mv, episode: follow_up(p, mv, Some(r)), rationale: Rationale::Tactic(r) });
        }
    }

    // (6) solver
    if let Some(res) = solver {
        if let Ok(mv) = res.best_move(p) {
            let ev = res.evaluate(&p.apply(mv).expect("solver moves are legal")).expect("successor in space");
            return Ok(Decision { mv, episode: None, rationale: Rationale::Solver(ev) });
        }
    }

    // (7) greedy
    let d = greedy_step(p).expect("an ongoing Duke-to-move position has a step");
    Ok(Decision { mv: Move::Step(d), episode: None, rationale: Rationale::Greedy })
}

/// Counts from [`audit_tactics`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TacticAudit {
    /// Ongoing states where a tactic is detected.
    pub flagged: u64,
    /// Flagged states with the Duke to move whose policy move was checked.
    pub policy_moves: u64,
}

/// Checks the tactics against a solved space: every state where a tactic
/// is detected must be a D win, and with the Duke to move the policy must
/// play a tactic move that stays a D win.
pub fn audit_tactics(res: &SolveResult) -> Result<TacticAudit, TacticError> {
    use rayon::prelude::*;
    let ix = res.indexer();
    (0..res.total_states())
        .into_par_iter()
        .try_fold(TacticAudit::default, |mut acc, idx| {
            let s = ix.decode(idx);
            if !s.is_valid() {
                return Ok(acc);
            }
            let p = ix.to_position(&s);
            if p.terminal_status() != TerminalStatus::Ongoing {
                return Ok(acc);
            }
            let Some(r) = detect_imminent_win(&p).or_else(|| detect_corner_win(&p)) else { return Ok(acc) };
            acc.flagged += 1;
            let at = || crate::format_dpn(&p);
            if res.label_at(idx) != Label::DWin {
                return Err(fail(format!("{}: {r} detected but the solver says {}", at(), res.label_at(idx))));
            }
            if p.to_move() == Player::D {
                let d = duke_policy(&p, None, None)?;
                if !matches!(d.rationale, Rationale::EdgeStep(_) | Rationale::Tactic(_)) {
                    return Err(fail(format!("{}: {r} detected but the policy chose {}", at(), d.rationale)));
                }
                let next = p.apply(d.mv).map_err(|e| fail(e.to_string()))?;
                if res.query_label(&next).map_err(|e| fail(e.to_string()))? != Label::DWin {
                    return Err(fail(format!("{}: policy move {} leaves the D-win region", at(), d.mv)));
                }
                acc.policy_moves += 1;
            }
            Ok(acc)
        })
        .try_reduce(TacticAudit::default, |a, b| {
            Ok(TacticAudit { flagged: a.flagged + b.flagged, policy_moves: a.policy_moves + b.policy_moves })
        })
}
