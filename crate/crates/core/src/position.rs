//! Game state, moves, legality and terminal detection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::RuleError;
use crate::geometry::{Dims, Dir, Square, StoneSet, Symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    /// The Duke.
    D,
    /// The stone player.
    G,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::D => Player::G,
            Player::G => Player::D,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Player::D => 'D',
            Player::G => 'G',
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Player {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "D" | "d" => Ok(Player::D),
            "G" | "g" => Ok(Player::G),
            _ => Err(RuleError::Syntax(format!("expected D or G, got {s:?}"))),
        }
    }
}

/// Black stones left in hand. `Unlimited` stands for the standard game's
/// supply of `rows * cols - 1` stones, enough to fill every other square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlackHand {
    Count(u16),
    Unlimited,
}

impl BlackHand {
    pub fn available(self) -> bool {
        match self {
            BlackHand::Count(n) => n > 0,
            BlackHand::Unlimited => true,
        }
    }
}

impl fmt::Display for BlackHand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlackHand::Count(n) => write!(f, "{n}"),
            BlackHand::Unlimited => write!(f, "inf"),
        }
    }
}

impl FromStr for BlackHand {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(BlackHand::Unlimited);
        }
        s.parse::<u16>()
            .map(BlackHand::Count)
            .map_err(|_| RuleError::Syntax(format!("expected a stone count or `inf`, got {s:?}")))
    }
}

/// Stones G still holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Inventory {
    pub whites: u8,
    pub blacks: BlackHand,
}

impl Inventory {
    pub const STANDARD: Inventory = Inventory { whites: 0, blacks: BlackHand::Unlimited };

    pub fn bounded(whites: u8, blacks: u16) -> Self {
        Inventory { whites, blacks: BlackHand::Count(blacks) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Unlimited black stones, no white stones; G must place every turn.
    Standard,
    /// Limited stones, white stones may wander, G may pass.
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    Step(Dir),
    PlaceBlack(Square),
    PlaceWhite(Square),
    Relocate { from: Square, to: Square },
    Pass,
}

impl Move {
    pub fn player(&self) -> Player {
        match self {
            Move::Step(_) => Player::D,
            _ => Player::G,
        }
    }
}

/// Compact move notation: `N`, `B5,5`, `W3,3`, `R3,3-1,1`, `pass`.
impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Step(d) => write!(f, "{d}"),
            Move::PlaceBlack(s) => write!(f, "B{s}"),
            Move::PlaceWhite(s) => write!(f, "W{s}"),
            Move::Relocate { from, to } => write!(f, "R{from}-{to}"),
            Move::Pass => write!(f, "pass"),
        }
    }
}

impl FromStr for Move {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RuleError::Syntax(format!("unrecognised move {s:?}"));
        let sq = |t: &str| -> Result<Square, RuleError> {
            let (r, c) = t.split_once(',').ok_or_else(bad)?;
            Ok(Square::new(r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?))
        };
        let s = s.trim();
        if s.eq_ignore_ascii_case("pass") {
            return Ok(Move::Pass);
        }
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        match head {
            'N' | 'S' | 'E' | 'W' if rest.is_empty() => Ok(Move::Step(Dir::from_letter(head).unwrap())),
            'B' => Ok(Move::PlaceBlack(sq(rest)?)),
            'W' => Ok(Move::PlaceWhite(sq(rest)?)),
            'R' => {
                let (a, b) = rest.split_once('-').ok_or_else(bad)?;
                Ok(Move::Relocate { from: sq(a)?, to: sq(b)? })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TerminalStatus {
    Ongoing,
    DWin,
    GWinImmobilized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    dims: Dims,
    duke: Square,
    blacks: StoneSet,
    whites: StoneSet,
    to_move: Player,
    hand: Inventory,
}

impl Position {
    /// Builds and validates a position.
    pub fn new(
        dims: Dims,
        duke: Square,
        blacks: &[Square],
        whites: &[Square],
        to_move: Player,
        hand: Inventory,
    ) -> Result<Self, RuleError> {
        dims.validate()?;
        let mut seen = StoneSet::EMPTY;
        let mut put = |sq: Square| -> Result<usize, RuleError> {
            if !dims.contains(sq) {
                return Err(RuleError::OutOfBounds(sq));
            }
            let i = dims.index(sq);
            if seen.contains(i) {
                return Err(RuleError::Overlap(sq));
            }
            seen.insert(i);
            Ok(i)
        };
        put(duke)?;
        let mut b = StoneSet::EMPTY;
        for &sq in blacks {
            b.insert(put(sq)?);
        }
        let mut w = StoneSet::EMPTY;
        for &sq in whites {
            w.insert(put(sq)?);
        }
        Ok(Position { dims, duke, blacks: b, whites: w, to_move, hand })
    }

    /// The opening position: Duke on its start square, no stones on the board.
    pub fn start(dims: Dims, hand: Inventory, first: Player) -> Result<Self, RuleError> {
        dims.validate()?;
        Ok(Position {
            dims,
            duke: dims.duke_start(),
            blacks: StoneSet::EMPTY,
            whites: StoneSet::EMPTY,
            to_move: first,
            hand,
        })
    }

    /// Unchecked constructor from bitsets; callers guarantee disjointness.
    pub(crate) fn from_raw(
        dims: Dims,
        duke: Square,
        blacks: StoneSet,
        whites: StoneSet,
        to_move: Player,
        hand: Inventory,
    ) -> Self {
        debug_assert!(blacks.intersection(whites).is_empty());
        debug_assert!(!blacks.union(whites).contains(dims.index(duke)));
        Position { dims, duke, blacks, whites, to_move, hand }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn duke(&self) -> Square {
        self.duke
    }

    pub fn blacks(&self) -> StoneSet {
        self.blacks
    }

    pub fn whites(&self) -> StoneSet {
        self.whites
    }

    pub fn black_squares(&self) -> Vec<Square> {
        self.blacks.iter().map(|i| self.dims.square(i)).collect()
    }

    pub fn white_squares(&self) -> Vec<Square> {
        self.whites.iter().map(|i| self.dims.square(i)).collect()
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn hand(&self) -> Inventory {
        self.hand
    }

    pub fn with_to_move(&self, p: Player) -> Position {
        Position { to_move: p, ..*self }
    }

    pub fn variant(&self) -> Variant {
        if self.hand.blacks == BlackHand::Unlimited && self.hand.whites == 0 && self.whites.is_empty() {
            Variant::Standard
        } else {
            Variant::Bounded
        }
    }

    /// Total white stones (on board plus in hand).
    pub fn white_budget(&self) -> u8 {
        self.hand.whites + self.whites.len() as u8
    }

    /// Total black stones, or `None` when unlimited.
    pub fn black_budget(&self) -> Option<u16> {
        match self.hand.blacks {
            BlackHand::Count(n) => Some(n + self.blacks.len() as u16),
            BlackHand::Unlimited => None,
        }
    }

    pub fn stones(&self) -> StoneSet {
        self.blacks.union(self.whites)
    }

    pub fn is_stone(&self, sq: Square) -> bool {
        self.dims.contains(sq) && self.stones().contains(self.dims.index(sq))
    }

    /// On the board, not the Duke, not a stone.
    pub fn is_empty(&self, sq: Square) -> bool {
        self.dims.contains(sq) && sq != self.duke && !self.stones().contains(self.dims.index(sq))
    }

    /// Bitset of empty squares.
    pub fn empty_set(&self) -> StoneSet {
        let mut occ = self.stones();
        occ.insert(self.dims.index(self.duke));
        StoneSet::full(self.dims.area()).difference(occ)
    }

    pub fn terminal_status(&self) -> TerminalStatus {
        if self.dims.is_edge(self.duke) {
            TerminalStatus::DWin
        } else if self.to_move == Player::D && self.duke_steps().next().is_none() {
            TerminalStatus::GWinImmobilized
        } else {
            TerminalStatus::Ongoing
        }
    }

    /// Directions in which the Duke can step (in `Dir::ALL` order).
    pub fn duke_steps(&self) -> impl Iterator<Item = Dir> + '_ {
        Dir::ALL
            .into_iter()
            .filter(move |&d| self.dims.step(self.duke, d).is_some_and(|t| self.is_empty(t)))
    }

    pub fn legal_moves(&self) -> Result<Vec<Move>, RuleError> {
        if self.terminal_status() != TerminalStatus::Ongoing {
            return Err(RuleError::GameOver);
        }
        let mut out = Vec::new();
        match self.to_move {
            Player::D => out.extend(self.duke_steps().map(Move::Step)),
            Player::G => {
                let empties: Vec<Square> = self.empty_set().iter().map(|i| self.dims.square(i)).collect();
                if self.variant() == Variant::Standard {
                    out.extend(empties.iter().map(|&s| Move::PlaceBlack(s)));
                } else {
                    if self.hand.whites > 0 {
                        out.extend(empties.iter().map(|&s| Move::PlaceWhite(s)));
                    }
                    if self.hand.blacks.available() {
                        out.extend(empties.iter().map(|&s| Move::PlaceBlack(s)));
                    }
                    for from in self.white_squares() {
                        out.extend(empties.iter().map(|&to| Move::Relocate { from, to }));
                    }
                    out.push(Move::Pass);
                }
            }
        }
        Ok(out)
    }

    /// Applies a move, returning the successor; `self` is left untouched.
    pub fn apply(&self, mv: Move) -> Result<Position, RuleError> {
        if self.terminal_status() != TerminalStatus::Ongoing {
            return Err(RuleError::GameOver);
        }
        if mv.player() != self.to_move {
            return Err(RuleError::WrongTurn(self.to_move.letter()));
        }
        let mut next = *self;
        next.to_move = self.to_move.other();
        let target = |sq: Square| -> Result<usize, RuleError> {
            if !self.dims.contains(sq) {
                Err(RuleError::OutOfBounds(sq))
            } else if !self.is_empty(sq) {
                Err(RuleError::Occupied(sq))
            } else {
                Ok(self.dims.index(sq))
            }
        };
        match mv {
            Move::Step(d) => {
                let to = self
                    .dims
                    .step(self.duke, d)
                    .ok_or(RuleError::BlockedStep(d.letter(), "off the board"))?;
                if !self.is_empty(to) {
                    return Err(RuleError::BlockedStep(d.letter(), "square occupied"));
                }
                next.duke = to;
            }
            Move::PlaceBlack(sq) => {
                let i = target(sq)?;
                next.hand.blacks = match self.hand.blacks {
                    BlackHand::Count(0) => return Err(RuleError::EmptyHand("black")),
                    BlackHand::Count(n) => BlackHand::Count(n - 1),
                    BlackHand::Unlimited => BlackHand::Unlimited,
                };
                next.blacks.insert(i);
            }
            Move::PlaceWhite(sq) => {
                let i = target(sq)?;
                if self.hand.whites == 0 {
                    return Err(RuleError::EmptyHand("white"));
                }
                next.hand.whites -= 1;
                next.whites.insert(i);
            }
            Move::Relocate { from, to } => {
                if self.variant() == Variant::Standard {
                    return Err(RuleError::VariantOnly);
                }
                if !self.dims.contains(from) {
                    return Err(RuleError::OutOfBounds(from));
                }
                let f = self.dims.index(from);
                if !self.whites.contains(f) {
                    return Err(RuleError::NotWhite(from));
                }
                let t = target(to)?;
                next.whites.remove(f);
                next.whites.insert(t);
            }
            Move::Pass => {
                if self.variant() == Variant::Standard {
                    return Err(RuleError::VariantOnly);
                }
            }
        }
        Ok(next)
    }

    /// Image of the position under a board symmetry.
    pub fn transform(&self, sym: Symmetry) -> Position {
        Position {
            dims: sym.image_dims(self.dims),
            duke: sym.apply(self.dims, self.duke),
            blacks: sym.apply_set(self.dims, self.blacks),
            whites: sym.apply_set(self.dims, self.whites),
            to_move: self.to_move,
            hand: self.hand,
        }
    }

    fn orbit_key(&self) -> (usize, u128, u128) {
        (self.dims.index(self.duke), self.blacks.0, self.whites.0)
    }

    /// Least member of the symmetry orbit, compared by (duke, blacks, whites).
    pub fn canonicalize(&self) -> Position {
        self.canonical_with_symmetry().0
    }

    /// The canonical form together with the symmetry that produced it.
    pub fn canonical_with_symmetry(&self) -> (Position, Symmetry) {
        let mut best = (*self, Symmetry::IDENTITY);
        let mut best_key = self.orbit_key();
        for &sym in &self.dims.symmetries()[1..] {
            let img = self.transform(sym);
            let key = img.orbit_key();
            if key < best_key {
                best_key = key;
                best = (img, sym);
            }
        }
        best
    }
}
