//! Combinatorial ranking of bounded-inventory states.
//!
//! A state is `(side to move, duke square, white set, black set)`. Stone
//! sets of size at most `k` over the `N` board squares are ranked by size
//! first and then by the combinatorial number system within each size, so
//! the rank of a set costs one table lookup per stone. Index space is the
//! full product; combinations where the duke and stones collide are
//! wasted slots, marked invalid by the solver.

use crate::error::RuleError;
use crate::geometry::{Dims, StoneSet};
use crate::position::{BlackHand, Inventory, Player, Position};

/// Ranks subsets of `n` squares with at most `k` elements.
#[derive(Clone, Debug)]
pub struct SubsetRanker {
    n: usize,
    k: usize,
    /// `binom[i][j]` = C(i, j) for i <= n, j <= k.
    binom: Vec<Vec<u64>>,
    /// Start of the block of size-`j` sets.
    offset: Vec<u64>,
    sets: Vec<StoneSet>,
}

impl SubsetRanker {
    pub fn new(n: usize, k: usize) -> Self {
        let mut binom = vec![vec![0u64; k + 2]; n + 1];
        for row in binom.iter_mut() {
            row[0] = 1;
        }
        for i in 1..=n {
            for j in 1..=k + 1 {
                binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
            }
        }
        let mut offset = vec![0u64; k + 2];
        for j in 0..=k {
            offset[j + 1] = offset[j] + binom[n][j];
        }
        let mut r = SubsetRanker { n, k, binom, offset, sets: Vec::new() };
        r.sets = r.enumerate();
        r
    }

    pub fn count(&self) -> u64 {
        self.offset[self.k + 1]
    }

    pub fn max_size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn rank(&self, set: StoneSet) -> u64 {
        let mut r = self.offset[set.len()];
        for (i, sq) in set.iter().enumerate() {
            r += self.binom[sq][i + 1];
        }
        r
    }

    #[inline]
    pub fn unrank(&self, rank: u64) -> StoneSet {
        self.sets[rank as usize]
    }

    fn enumerate(&self) -> Vec<StoneSet> {
        let mut out = vec![StoneSet::EMPTY; self.count() as usize];
        let mut stack = Vec::new();
        fn rec(r: &SubsetRanker, start: usize, left: usize, stack: &mut Vec<usize>, out: &mut [StoneSet]) {
            if left == 0 {
                let s: StoneSet = stack.iter().copied().collect();
                out[r.rank(s) as usize] = s;
                return;
            }
            for sq in start..r.n {
                stack.push(sq);
                rec(r, sq + 1, left - 1, stack, out);
                stack.pop();
            }
        }
        for size in 0..=self.k.min(self.n) {
            rec(self, 0, size, &mut stack, &mut out);
        }
        out
    }
}

/// Decoded state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawState {
    pub to_move: Player,
    pub duke: usize,
    pub whites: StoneSet,
    pub blacks: StoneSet,
}

impl RawState {
    #[inline]
    pub fn is_valid(&self) -> bool {
        self.whites.intersection(self.blacks).is_empty() && !self.whites.union(self.blacks).contains(self.duke)
    }
}

#[derive(Clone, Debug)]
pub struct StateIndexer {
    dims: Dims,
    white_budget: u8,
    black_budget: u8,
    whites: SubsetRanker,
    blacks: SubsetRanker,
    per_duke: u64,
    per_turn: u64,
}

impl StateIndexer {
    pub fn new(dims: Dims, white_budget: u8, black_budget: u8) -> Self {
        let n = dims.area();
        let whites = SubsetRanker::new(n, white_budget as usize);
        let blacks = SubsetRanker::new(n, black_budget as usize);
        let per_duke = whites.count() * blacks.count();
        StateIndexer { dims, white_budget, black_budget, whites, blacks, per_duke, per_turn: per_duke * n as u64 }
    }

    /// State count without building the ranking tables.
    pub fn estimate(dims: Dims, white_budget: u8, black_budget: u8) -> u128 {
        let n = dims.area() as u128;
        let subsets = |k: u8| -> u128 {
            let mut total = 0u128;
            let mut c = 1u128;
            for j in 0..=k as u128 {
                if j > 0 {
                    if j > n {
                        break;
                    }
                    c = c * (n - j + 1) / j;
                }
                total += c;
            }
            total
        };
        2 * n * subsets(white_budget) * subsets(black_budget)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn white_budget(&self) -> u8 {
        self.white_budget
    }

    pub fn black_budget(&self) -> u8 {
        self.black_budget
    }

    pub fn total_states(&self) -> u64 {
        2 * self.per_turn
    }

    /// Number of states with one side to move; D-to-move states come first.
    pub fn half(&self) -> u64 {
        self.per_turn
    }

    pub fn white_ranker(&self) -> &SubsetRanker {
        &self.whites
    }

    pub fn black_ranker(&self) -> &SubsetRanker {
        &self.blacks
    }

    #[inline]
    pub fn index(&self, s: &RawState) -> u64 {
        let turn = match s.to_move {
            Player::D => 0,
            Player::G => 1,
        };
        turn * self.per_turn
            + s.duke as u64 * self.per_duke
            + self.whites.rank(s.whites) * self.blacks.count()
            + self.blacks.rank(s.blacks)
    }

    /// Index with the side to move given as 0 (D) / 1 (G).
    #[inline]
    pub fn index_parts(&self, turn: u64, duke: usize, whites: StoneSet, blacks: StoneSet) -> u64 {
        turn * self.per_turn + duke as u64 * self.per_duke + self.whites.rank(whites) * self.blacks.count() + self.blacks.rank(blacks)
    }

    #[inline]
    pub fn decode(&self, idx: u64) -> RawState {
        let to_move = if idx >= self.per_turn { Player::G } else { Player::D };
        let rest = idx % self.per_turn;
        let duke = (rest / self.per_duke) as usize;
        let rest = rest % self.per_duke;
        let nb = self.blacks.count();
        RawState {
            to_move,
            duke,
            whites: self.whites.unrank(rest / nb),
            blacks: self.blacks.unrank(rest % nb),
        }
    }

    /// Hand counts implied by the stones on the board.
    pub fn inventory(&self, s: &RawState) -> Inventory {
        Inventory::bounded(
            self.white_budget - s.whites.len() as u8,
            self.black_budget as u16 - s.blacks.len() as u16,
        )
    }

    pub fn to_position(&self, s: &RawState) -> Position {
        Position::from_raw(self.dims, self.dims.square(s.duke), s.blacks, s.whites, s.to_move, self.inventory(s))
    }

    /// Maps a position into this space, checking that its stones and hands
    /// match the budgets.
    pub fn raw_state(&self, p: &Position) -> Result<RawState, RuleError> {
        if p.dims() != self.dims {
            return Err(RuleError::Syntax(format!("position is on a {} board, space is {}", p.dims(), self.dims)));
        }
        let blacks_in_hand = match p.hand().blacks {
            BlackHand::Count(n) => n as usize,
            BlackHand::Unlimited => {
                return Err(RuleError::Syntax("unlimited black stones are outside a bounded space".into()))
            }
        };
        if p.whites().len() + p.hand().whites as usize != self.white_budget as usize
            || p.blacks().len() + blacks_in_hand != self.black_budget as usize
        {
            return Err(RuleError::Syntax(format!(
                "stone counts do not match budgets w{} b{}",
                self.white_budget, self.black_budget
            )));
        }
        Ok(RawState { to_move: p.to_move(), duke: self.dims.index(p.duke()), whites: p.whites(), blacks: p.blacks() })
    }

    pub fn index_of(&self, p: &Position) -> Result<u64, RuleError> {
        Ok(self.index(&self.raw_state(p)?))
    }
}
