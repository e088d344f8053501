//! Exhaustive check of a G strategy against every Duke reply.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::GStrategy;
use crate::dpn::format_dpn;
use crate::geometry::Dir;
use crate::position::{Inventory, Move, Player, Position, TerminalStatus};

/// A line of play ending where the strategy breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub reason: String,
    pub start: Position,
    pub moves: Vec<Move>,
}

impl Counterexample {
    pub fn final_position(&self) -> Position {
        self.moves.iter().fold(self.start, |p, &m| p.apply(m).expect("trace moves are legal"))
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.reason)?;
        let mut p = self.start;
        writeln!(f, "  {}", format_dpn(&p))?;
        for &m in &self.moves {
            p = p.apply(m).expect("trace moves are legal");
            writeln!(f, "  {m:<12} {}", format_dpn(&p))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The Duke never reaches an edge. `states` counts the distinct
    /// (position, strategy memory) pairs visited.
    GWin { states: usize },
    DWinExposure(Box<Counterexample>),
}

impl Verdict {
    pub fn is_g_win(&self) -> bool {
        matches!(self, Verdict::GWin { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::GWin { states } => write!(f, "G-win ({states} states checked)"),
            Verdict::DWinExposure(c) => write!(f, "D-win exposure: {c}"),
        }
    }
}

/// Plays the strategy against every Duke move from the start position.
/// Revisited states close cycles, which G wins by repetition.
pub fn verify_g_strategy<S: GStrategy>(strategy: &S, start_inventory: Inventory, first: Player) -> Verdict {
    let dims = strategy.dims();
    let start = match Position::start(dims, start_inventory, first) {
        Ok(p) => p,
        Err(e) => {
            return Verdict::DWinExposure(Box::new(Counterexample {
                reason: format!("bad start: {e}"),
                start: Position::start(dims, Inventory::STANDARD, first).expect("valid dims"),
                moves: Vec::new(),
            }))
        }
    };

    type Node<T> = (Position, T);
    let mut index: HashMap<Node<S::Token>, usize> = HashMap::new();
    // parent node and the move leading here
    let mut parent: Vec<Option<(usize, Move)>> = Vec::new();
    let mut nodes: Vec<Node<S::Token>> = Vec::new();
    let mut queue = VecDeque::new();

    let root = (start, strategy.initial_token());
    index.insert(root.clone(), 0);
    nodes.push(root);
    parent.push(None);
    queue.push_back(0usize);

    let trace = |parent: &[Option<(usize, Move)>], mut at: usize, extra: Option<Move>| {
        let mut moves: Vec<Move> = extra.into_iter().collect();
        while let Some((p, m)) = parent[at] {
            moves.push(m);
            at = p;
        }
        moves.reverse();
        moves
    };

    while let Some(id) = queue.pop_front() {
        let (p, token) = nodes[id].clone();
        let mut children: Vec<(Move, Node<S::Token>)> = Vec::new();
        match p.to_move() {
            Player::G => {
                if p.terminal_status() == TerminalStatus::DWin {
                    return exposure("the Duke reached an edge", start, trace(&parent, id, None));
                }
                match strategy.g_move(&p, &token) {
                    Ok((mv, next_token)) => match p.apply(mv) {
                        Ok(q) => children.push((mv, (q, next_token))),
                        Err(e) => return exposure(&format!("illegal strategy move {mv}: {e}"), start, trace(&parent, id, None)),
                    },
                    Err(e) => return exposure(&e.to_string(), start, trace(&parent, id, None)),
                }
            }
            Player::D => {
                if p.terminal_status() != TerminalStatus::Ongoing {
                    continue;
                }
                for d in Dir::ALL {
                    if let Ok(q) = p.apply(Move::Step(d)) {
                        if q.terminal_status() == TerminalStatus::DWin {
                            return exposure("the Duke reached an edge", start, trace(&parent, id, Some(Move::Step(d))));
                        }
                        children.push((Move::Step(d), (q, token.clone())));
                    }
                }
            }
        }
        for (mv, child) in children {
            if !index.contains_key(&child) {
                let cid = nodes.len();
                index.insert(child.clone(), cid);
                nodes.push(child);
                parent.push(Some((id, mv)));
                queue.push_back(cid);
            }
        }
    }
    Verdict::GWin { states: nodes.len() }
}

fn exposure(reason: &str, start: Position, moves: Vec<Move>) -> Verdict {
    Verdict::DWinExposure(Box::new(Counterexample { reason: reason.to_string(), start, moves }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dims;
    use crate::strategy::{StrategyError, StrategyMap};

    /// G passes forever.
    struct Passive(Dims);

    impl GStrategy for Passive {
        type Token = ();
        fn dims(&self) -> Dims {
            self.0
        }
        fn initial_token(&self) {}
        fn g_move(&self, _: &Position, _: &()) -> Result<(Move, ()), StrategyError> {
            Ok((Move::Pass, ()))
        }
    }

    #[test]
    fn passive_g_loses_with_a_short_trace() {
        let v = verify_g_strategy(&Passive(Dims::new(5, 5).unwrap()), Inventory::bounded(1, 0), Player::D);
        let Verdict::DWinExposure(c) = v else { panic!("expected exposure") };
        assert_eq!(c.moves.len(), 3);
        assert_eq!(c.final_position().terminal_status(), TerminalStatus::DWin);
    }

    #[test]
    fn empty_map_fails_on_its_first_turn() {
        let map = StrategyMap {
            dims: Dims::new(6, 9).unwrap(),
            inventory: Inventory::bounded(3, 0),
            first: Player::G,
            moves: HashMap::new(),
        };
        let v = verify_g_strategy(&map, map.inventory, Player::G);
        let Verdict::DWinExposure(c) = v else { panic!("expected exposure") };
        assert!(c.moves.is_empty());
        assert!(c.reason.contains("no move"), "{}", c.reason);
    }
}
