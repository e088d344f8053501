//! Memoized AND-OR search for the standard game (black stones only, G
//! must place every turn). Stones only accumulate, so the game graph is
//! acyclic and a depth-first proof search terminates.

use std::collections::HashMap;

use crate::error::RuleError;
use crate::geometry::{Dims, Dir, StoneSet, Symmetry};
use crate::position::{Inventory, Move, Player, Position, TerminalStatus, Variant};
use crate::tactics::duke_policy;

/// Outcome of a proof search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneProof {
    pub root: Position,
    /// `None` when the ply cap cut the search before a proof was found.
    pub winner: Option<Player>,
    pub nodes: u64,
    pub memo_entries: usize,
    pub max_depth: u32,
}

type Key = (u8, u128, bool);

struct Searcher {
    dims: Dims,
    edges: StoneSet,
    neighbours: Vec<Vec<usize>>,
    /// `perms[s][sq]` is the image of square `sq` under symmetry `s`.
    perms: Vec<Vec<usize>>,
    memo: HashMap<Key, bool>,
    nodes: u64,
    max_depth: u32,
    cap: u32,
}

impl Searcher {
    fn new(dims: Dims, cap: u32) -> Self {
        let neighbours = dims
            .squares()
            .map(|sq| Dir::ALL.iter().filter_map(|&d| dims.step(sq, d)).map(|t| dims.index(t)).collect())
            .collect();
        let perms = dims
            .symmetries()
            .iter()
            .map(|s: &Symmetry| dims.squares().map(|sq| dims.index(s.apply(dims, sq))).collect())
            .collect();
        Searcher { dims, edges: dims.edge_set(), neighbours, perms, memo: HashMap::new(), nodes: 0, max_depth: 0, cap }
    }

    fn key(&self, duke: usize, blacks: StoneSet, d_turn: bool) -> Key {
        let mut best: Option<(usize, u128)> = None;
        for perm in &self.perms {
            let d = perm[duke];
            let mut b = 0u128;
            for i in blacks.iter() {
                b |= 1 << perm[i];
            }
            if best.is_none_or(|cur| (d, b) < cur) {
                best = Some((d, b));
            }
        }
        let (d, b) = best.expect("at least the identity");
        (d as u8, b, d_turn)
    }

    fn position(&self, duke: usize, blacks: StoneSet, turn: Player) -> Position {
        Position::from_raw(self.dims, self.dims.square(duke), blacks, StoneSet::EMPTY, turn, Inventory::STANDARD)
    }

    /// `Some(true)` when D wins, `Some(false)` when G wins, `None` when cut.
    fn search(&mut self, duke: usize, blacks: StoneSet, d_turn: bool, depth: u32) -> Option<bool> {
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth);
        let open: Vec<usize> = self.neighbours[duke].iter().copied().filter(|&n| !blacks.contains(n)).collect();
        let open_edges = open.iter().filter(|&&n| self.edges.contains(n)).count();
        if d_turn {
            if open_edges > 0 {
                return Some(true);
            }
            if open.is_empty() {
                return Some(false);
            }
        } else if open_edges >= 2 {
            return Some(true);
        }
        let key = self.key(duke, blacks, d_turn);
        if let Some(&v) = self.memo.get(&key) {
            return Some(v);
        }
        if depth >= self.cap {
            return None;
        }
        let mut cut = false;
        let result = if d_turn {
            let mut order = open.clone();
            let p = self.position(duke, blacks, Player::D);
            if let Ok(dec) = duke_policy(&p, None, None) {
                if let Move::Step(d) = dec.mv {
                    let first = self.dims.index(self.dims.step(p.duke(), d).expect("legal step"));
                    order.sort_by_key(|&n| n != first);
                }
            }
            let mut won = false;
            for n in order {
                match self.search(n, blacks, false, depth + 1) {
                    Some(true) => {
                        won = true;
                        break;
                    }
                    Some(false) => {}
                    None => cut = true,
                }
            }
            won
        } else {
            let candidates: Vec<usize> = if open_edges == 1 {
                open.iter().copied().filter(|&n| self.edges.contains(n)).collect()
            } else {
                let here = self.dims.square(duke);
                let mut c: Vec<usize> = StoneSet::full(self.dims.area())
                    .difference(blacks)
                    .iter()
                    .filter(|&i| i != duke)
                    .collect();
                c.sort_by_key(|&i| {
                    let sq = self.dims.square(i);
                    (here.row.abs_diff(sq.row) + here.col.abs_diff(sq.col), i)
                });
                c
            };
            let mut d_wins = true;
            for x in candidates {
                let mut b = blacks;
                b.insert(x);
                match self.search(duke, b, true, depth + 1) {
                    Some(false) => {
                        d_wins = false;
                        break;
                    }
                    Some(true) => {}
                    None => cut = true,
                }
            }
            d_wins
        };
        // A refutation found before any cut is exact; otherwise only a
        // result not depending on the cut branches can be stored.
        let exact = if d_turn { result || !cut } else { !result || !cut };
        if !exact {
            return None;
        }
        self.memo.insert(key, result);
        Some(result)
    }
}

/// Solves the standard game from its start position.
pub fn solve_monotone(dims: Dims, first: Player, ply_cap: Option<u32>) -> Result<MonotoneProof, RuleError> {
    solve_monotone_from(&Position::start(dims, Inventory::STANDARD, first)?, ply_cap)
}

/// Solves the standard game from `pos`. The default ply cap is `2·m·n`.
pub fn solve_monotone_from(pos: &Position, ply_cap: Option<u32>) -> Result<MonotoneProof, RuleError> {
    if pos.variant() != Variant::Standard {
        return Err(RuleError::VariantOnly);
    }
    let dims = pos.dims();
    let cap = ply_cap.unwrap_or(2 * dims.area() as u32);
    let winner = match pos.terminal_status() {
        TerminalStatus::DWin => Some(Player::D),
        TerminalStatus::GWinImmobilized => Some(Player::G),
        TerminalStatus::Ongoing => {
            let mut s = Searcher::new(dims, cap);
            let r = s.search(dims.index(pos.duke()), pos.blacks(), pos.to_move() == Player::D, 0);
            return Ok(MonotoneProof {
                root: *pos,
                winner: r.map(|d| if d { Player::D } else { Player::G }),
                nodes: s.nodes,
                memo_entries: s.memo.len(),
                max_depth: s.max_depth,
            });
        }
    };
    Ok(MonotoneProof { root: *pos, winner, nodes: 0, memo_entries: 0, max_depth: 0 })
}
