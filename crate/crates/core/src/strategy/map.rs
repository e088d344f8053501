//! Explicit strategy maps: one G move for every G-to-move position the
//! strategy can reach.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use super::{GStrategy, StrategyError};
use crate::dpn::{format_dpn, parse_dpn};
use crate::geometry::{Dims, Dir};
use crate::position::{BlackHand, Inventory, Move, Player, Position, TerminalStatus};
use crate::solver::{Label, SolveResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyMap {
    pub dims: Dims,
    pub inventory: Inventory,
    pub first: Player,
    pub moves: HashMap<Position, Move>,
}

impl StrategyMap {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn start_position(&self) -> Position {
        Position::start(self.dims, self.inventory, self.first).expect("map dims are valid")
    }

    /// Text form: a header line, then `<DPN> => <move>` lines sorted by DPN.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = self.moves.iter().map(|(p, m)| format!("{} => {m}", format_dpn(p))).collect();
        lines.sort_unstable();
        let mut out = String::with_capacity(lines.len() * 48 + 64);
        let _ = writeln!(
            out,
            "# strategy {} w{} b{} first={}",
            self.dims, self.inventory.whites, self.inventory.blacks, self.first
        );
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<StrategyMap, StrategyError> {
        let mut lines = text.lines().enumerate();
        let perr = |line: usize, message: String| StrategyError::Parse { line, message };
        let (_, header) = lines.next().ok_or_else(|| perr(1, "empty strategy file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let ["#", "strategy", dims, w, b, first] = fields.as_slice() else {
            return Err(perr(1, format!("bad header {header:?}")));
        };
        let dims: Dims = dims.parse().map_err(|e| perr(1, format!("{e}")))?;
        let whites: u8 = w.strip_prefix('w').and_then(|s| s.parse().ok()).ok_or_else(|| perr(1, format!("bad white budget {w:?}")))?;
        let blacks: BlackHand =
            b.strip_prefix('b').and_then(|s| s.parse().ok()).ok_or_else(|| perr(1, format!("bad black budget {b:?}")))?;
        let first: Player = first
            .strip_prefix("first=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| perr(1, format!("bad first mover {first:?}")))?;
        let mut moves = HashMap::new();
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let (state, mv) = line.split_once(" => ").ok_or_else(|| perr(line_no, "expected `<position> => <move>`".into()))?;
            let p = parse_dpn(state).map_err(|e| perr(line_no, e.to_string()))?;
            let mv: Move = mv.trim().parse().map_err(|e| perr(line_no, format!("{e}")))?;
            if p.dims() != dims {
                return Err(perr(line_no, format!("position is on {}, map is for {dims}", p.dims())));
            }
            if moves.insert(p, mv).is_some() {
                return Err(perr(line_no, "duplicate position".into()));
            }
        }
        Ok(StrategyMap { dims, inventory: Inventory { whites, blacks }, first, moves })
    }
}

impl GStrategy for StrategyMap {
    type Token = ();

    fn dims(&self) -> Dims {
        self.dims
    }

    fn initial_token(&self) {}

    fn g_move(&self, p: &Position, _: &()) -> Result<(Move, ()), StrategyError> {
        self.moves
            .get(p)
            .map(|&m| (m, ()))
            .ok_or_else(|| StrategyError::Failure(format!("no move for {}", format_dpn(p))))
    }
}

/// Reads a G strategy off a solved space: from every reachable G-to-move
/// position outside the Duke's attractor, the move to the lowest-indexed
/// successor that stays outside it. The map is closed under all Duke
/// replies.
pub fn extract_g_strategy(res: &SolveResult, start: &Position) -> Result<StrategyMap, StrategyError> {
    let solver = |e: crate::solver::SolveError| StrategyError::Contract(e.to_string());
    if res.query_label(start).map_err(solver)? == Label::DWin {
        return Err(StrategyError::Contract("the start position is a Duke win".into()));
    }
    let mut moves = HashMap::new();
    let mut queue = VecDeque::new();
    let mut seen_g = std::collections::HashSet::new();
    let mut push_d_replies = |q: Position, queue: &mut VecDeque<Position>| {
        if q.terminal_status() != TerminalStatus::Ongoing {
            return;
        }
        for d in Dir::ALL {
            if let Ok(next) = q.apply(Move::Step(d)) {
                if seen_g.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    };
    match start.to_move() {
        Player::G => queue.push_back(*start),
        Player::D => push_d_replies(*start, &mut queue),
    }
    while let Some(p) = queue.pop_front() {
        if p.terminal_status() != TerminalStatus::Ongoing {
            return Err(StrategyError::Failure(format!("the Duke escapes in {}", format_dpn(&p))));
        }
        let succ = res.successors(&p).map_err(solver)?;
        let (mv, _, _) = succ
            .iter()
            .filter(|s| s.2.label != Label::DWin)
            .min_by_key(|s| s.1)
            .ok_or_else(|| StrategyError::Failure(format!("every move loses in {}", format_dpn(&p))))?;
        moves.insert(p, *mv);
        push_d_replies(p.apply(*mv)?, &mut queue);
    }
    Ok(StrategyMap { dims: start.dims(), inventory: start.hand(), first: start.to_move(), moves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_bounded, SolveOptions};

    #[test]
    fn text_roundtrip() {
        let dims = Dims::new(6, 9).unwrap();
        let mut moves = HashMap::new();
        moves.insert(parse_dpn("6x9 D4,5 B[] W[] G w3 b0").unwrap(), "W5,5".parse().unwrap());
        moves.insert(parse_dpn("6x9 D4,6 B[] W[5,5] G w2 b0").unwrap(), "R5,5-5,6".parse().unwrap());
        moves.insert(parse_dpn("6x9 D3,5 B[] W[5,5] G w2 b0").unwrap(), "pass".parse().unwrap());
        let map = StrategyMap { dims, inventory: Inventory::bounded(3, 0), first: Player::G, moves };
        let text = map.to_text();
        assert!(text.starts_with("# strategy 6x9 w3 b0 first=G\n6x9 D3,5"), "{text}");
        assert_eq!(StrategyMap::from_text(&text).unwrap(), map);
    }

    #[test]
    fn immobilized_start_gives_an_empty_map() {
        let res = solve_bounded(Dims::new(5, 5).unwrap(), 4, 0, &SolveOptions::default()).unwrap();
        let p = parse_dpn("5x5 D3,3 B[] W[2,3;4,3;3,2;3,4] D w0 b0").unwrap();
        let map = extract_g_strategy(&res, &p).unwrap();
        assert!(map.is_empty());
        let text = map.to_text();
        assert_eq!(text, "# strategy 5x5 w0 b0 first=D\n");
    }

    #[test]
    fn duke_win_start_is_refused() {
        let res = solve_bounded(Dims::new(5, 5).unwrap(), 3, 0, &SolveOptions::default()).unwrap();
        let start = res.start_position(Player::G);
        assert!(matches!(extract_g_strategy(&res, &start), Err(StrategyError::Contract(_))));
    }

    #[test]
    fn header_errors() {
        assert!(matches!(StrategyMap::from_text("# strategy 5x5 w3 first=G\n"), Err(StrategyError::Parse { line: 1, .. })));
        assert!(matches!(
            StrategyMap::from_text("# strategy 5x5 w3 b0 first=G\nnonsense\n"),
            Err(StrategyError::Parse { line: 2, .. })
        ));
    }
}
