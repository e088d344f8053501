//! Table-driven play from a diagram set.

use std::collections::BTreeMap;

use super::diagram::{strategic_map, tactical_edge, DiagramSet, StoneColor};
use super::{GStrategy, StrategyError};
use crate::geometry::{Dims, Square, Symmetry};
use crate::position::{Move, Player, Position, Variant};

/// G's memory while playing from diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableState {
    pub active_diagram: u32,
    /// Board square currently holding each strategic letter's stone.
    pub assignment: BTreeMap<char, Square>,
    /// Maps board squares to diagram squares. Changes only when G pretends
    /// the board was turned half a revolution.
    pub frame: Symmetry,
}

impl TableState {
    pub fn new(set: &DiagramSet) -> Self {
        TableState { active_diagram: set.start_diagram, assignment: BTreeMap::new(), frame: Symmetry::IDENTITY }
    }
}

fn fail(msg: impl Into<String>) -> StrategyError {
    StrategyError::Failure(msg.into())
}

/// Flip-only symmetries compose by xor.
fn compose_flips(a: Symmetry, b: Symmetry) -> Symmetry {
    debug_assert!(!a.transpose && !b.transpose);
    Symmetry { flip_rows: a.flip_rows ^ b.flip_rows, flip_cols: a.flip_cols ^ b.flip_cols, transpose: false }
}

fn to_board(frame: Symmetry, dims: Dims, sq: Square) -> Square {
    frame.inverse().apply(frame.image_dims(dims), sq)
}

/// The one G move that covers the requirements of the Duke's cell.
pub fn g_table_move(set: &DiagramSet, ts: &TableState, p: &Position) -> Result<(Move, TableState), StrategyError> {
    if p.to_move() != Player::G {
        return Err(StrategyError::Contract("G is not to move".into()));
    }
    let dims = p.dims();
    if set.dims() != dims {
        return Err(StrategyError::Contract(format!("diagrams are for {}, board is {dims}", set.dims())));
    }
    let frame = ts.frame;
    let standard = p.variant() == Variant::Standard;

    let mut active = ts.active_diagram;
    let duke_here = frame.apply(dims, p.duke());

    if let Some((letter, color)) = set.stipulated_first_move {
        if p.stones().is_empty() && p.duke() == dims.duke_start() {
            let d = set.diagram(active).ok_or_else(|| fail("missing start diagram"))?;
            let sq = to_board(frame, dims, d.strategic_square(letter).expect("validated first move"));
            let mv = match color {
                StoneColor::Black => Move::PlaceBlack(sq),
                StoneColor::White if standard => Move::PlaceBlack(sq),
                StoneColor::White => Move::PlaceWhite(sq),
            };
            let mut next = ts.clone();
            next.assignment.insert(letter.to_ascii_lowercase(), sq);
            return Ok((mv, next));
        }
    }

    // Follow transitions on the Duke's cell.
    for _ in 0..=set.diagrams.len() {
        let d = set.diagram(active).ok_or_else(|| fail(format!("missing diagram {active}")))?;
        match d.cell(duke_here).transition {
            Some(t) if t != active => active = t,
            _ => break,
        }
    }
    let diagram = set.diagram(active).ok_or_else(|| fail(format!("missing diagram {active}")))?;
    let cell = diagram.cell(duke_here);
    let strategic = strategic_map(diagram);

    let mut required: Vec<(Square, bool)> = Vec::new();
    for l in &cell.cover {
        let (sq, black) = strategic[l];
        required.push((to_board(frame, dims, sq), black));
    }
    if cell.tactical {
        let edge = tactical_edge(dims, duke_here).map_err(|_| fail("ambiguous '+' cell"))?;
        required.push((to_board(frame, dims, edge), false));
    }
    let covered = |sq: Square, black: bool| {
        let i = dims.index(sq);
        if black {
            p.blacks().contains(i)
        } else {
            p.stones().contains(i)
        }
    };
    let missing: Vec<(Square, bool)> = required.iter().copied().filter(|&(sq, b)| !covered(sq, b)).collect();

    let mv = match missing.as_slice() {
        [] if standard => {
            // G must place; any empty square keeps every requirement.
            let free = p.empty_set().iter().next().ok_or_else(|| fail("board full"))?;
            Move::PlaceBlack(dims.square(free))
        }
        [] => Move::Pass,
        [(sq, black)] => {
            if !p.is_empty(*sq) || *sq == p.duke() {
                return Err(fail(format!("square {sq} is occupied by the wrong stone")));
            }
            let black_left = p.black_budget().is_none_or(|b| b > 0);
            if *black || standard {
                if !black_left {
                    return Err(fail(format!("no black stone left for {sq}")));
                }
                Move::PlaceBlack(*sq)
            } else if p.hand().whites > 0 {
                Move::PlaceWhite(*sq)
            } else {
                let protected: Vec<Square> = required.iter().map(|r| r.0).collect();
                let on_letter: Vec<Square> = strategic.values().map(|&(s, _)| to_board(frame, dims, s)).collect();
                let spare = p
                    .white_squares()
                    .into_iter()
                    .filter(|s| !protected.contains(s))
                    .min_by_key(|s| (on_letter.contains(s), dims.index(*s)));
                match spare {
                    Some(from) => Move::Relocate { from, to: *sq },
                    None if black_left => Move::PlaceBlack(*sq),
                    None => return Err(fail(format!("no stone available to cover {sq}"))),
                }
            }
        }
        many => {
            let squares: Vec<String> = many.iter().map(|(s, _)| s.to_string()).collect();
            return Err(fail(format!("{} squares need covering at once: {}", many.len(), squares.join(" "))));
        }
    };

    let mut next = TableState { active_diagram: active, assignment: ts.assignment.clone(), frame };
    for l in &cell.cover {
        next.assignment.insert(*l, to_board(frame, dims, strategic[l].0));
    }
    next.assignment.retain(|_, sq| {
        let i = dims.index(*sq);
        p.stones().contains(i) || matches!(mv, Move::PlaceBlack(s) | Move::PlaceWhite(s) | Move::Relocate { to: s, .. } if s == *sq)
    });
    Ok((mv, next))
}

/// The half-turn pretense: when the Duke's first step lands on the image
/// of the start square under a half turn, G moves her single stone to its
/// own image and from then on reads the diagrams through the rotated
/// frame. Returns `None` when the pretense does not apply.
pub fn rotation_guard(set: &DiagramSet, ts: &TableState, p: &Position) -> Option<(Move, TableState)> {
    let dims = p.dims();
    if set.dims() != dims || p.to_move() != Player::G || ts.frame.transpose {
        return None;
    }
    let start = dims.duke_start();
    let turned = Symmetry::ROT180.apply(dims, start);
    if turned == start || ts.frame.apply(dims, p.duke()) != turned || p.stones().len() != 1 {
        return None;
    }
    let stone = dims.square(p.stones().iter().next()?);
    let frame = compose_flips(ts.frame, Symmetry::ROT180);
    let target = to_board(ts.frame, dims, Symmetry::ROT180.apply(dims, ts.frame.apply(dims, stone)));
    let mv = if target == stone {
        Move::Pass
    } else if p.whites().contains(dims.index(stone)) && p.is_empty(target) {
        Move::Relocate { from: stone, to: target }
    } else {
        return None;
    };
    let assignment = ts.assignment.keys().map(|l| (*l, target)).collect();
    Some((mv, TableState { active_diagram: set.start_diagram, assignment, frame }))
}

/// Diagram play, optionally with the half-turn pretense on the opening.
#[derive(Clone, Debug)]
pub struct TableStrategy {
    pub set: DiagramSet,
    pub rotation: bool,
}

impl GStrategy for TableStrategy {
    type Token = TableState;

    fn dims(&self) -> Dims {
        self.set.dims()
    }

    fn initial_token(&self) -> TableState {
        TableState::new(&self.set)
    }

    fn g_move(&self, p: &Position, token: &TableState) -> Result<(Move, TableState), StrategyError> {
        if self.rotation {
            if let Some(r) = rotation_guard(&self.set, token, p) {
                return Ok(r);
            }
        }
        g_table_move(&self.set, token, p)
    }
}
