//! Board geometry: dimensions, squares, compass directions, stone bitsets
//! and the dihedral symmetries of a rectangular board.
//!
//! Rows are numbered from 1 at the north edge, columns from 1 at the west
//! edge. Internally a square is also addressed by its row-major index
//! `(row - 1) * cols + (col - 1)`, which is what [`StoneSet`] stores.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::RuleError;

/// Largest number of squares a board may have (stone sets are `u128`).
pub const MAX_SQUARES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dims {
    pub rows: u8,
    pub cols: u8,
}

impl Dims {
    pub fn new(rows: u8, cols: u8) -> Result<Self, RuleError> {
        let d = Dims { rows, cols };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), RuleError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(RuleError::BadDims(*self, "both dimensions must be at least 1"));
        }
        if self.area() > MAX_SQUARES {
            return Err(RuleError::BadDims(*self, "boards are limited to 128 squares"));
        }
        Ok(())
    }

    #[inline]
    pub fn area(&self) -> usize {
        self.rows as usize * self.cols as usize
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transposed(&self) -> Dims {
        Dims { rows: self.cols, cols: self.rows }
    }

    #[inline]
    pub fn contains(&self, sq: Square) -> bool {
        (1..=self.rows).contains(&sq.row) && (1..=self.cols).contains(&sq.col)
    }

    #[inline]
    pub fn index(&self, sq: Square) -> usize {
        debug_assert!(self.contains(sq));
        (sq.row as usize - 1) * self.cols as usize + (sq.col as usize - 1)
    }

    #[inline]
    pub fn square(&self, idx: usize) -> Square {
        debug_assert!(idx < self.area());
        Square {
            row: (idx / self.cols as usize) as u8 + 1,
            col: (idx % self.cols as usize) as u8 + 1,
        }
    }

    #[inline]
    pub fn is_edge(&self, sq: Square) -> bool {
        sq.row == 1 || sq.col == 1 || sq.row == self.rows || sq.col == self.cols
    }

    /// The square one step from `sq` in direction `dir`, if on the board.
    #[inline]
    pub fn step(&self, sq: Square, dir: Dir) -> Option<Square> {
        let (dr, dc) = dir.delta();
        let r = sq.row as i16 + dr as i16;
        let c = sq.col as i16 + dc as i16;
        if r < 1 || c < 1 || r > self.rows as i16 || c > self.cols as i16 {
            None
        } else {
            Some(Square { row: r as u8, col: c as u8 })
        }
    }

    /// Number of steps from `sq` to the edge lying in direction `dir`.
    /// Zero means `sq` is on that edge.
    #[inline]
    pub fn distance_to_edge(&self, sq: Square, dir: Dir) -> u8 {
        match dir {
            Dir::N => sq.row - 1,
            Dir::S => self.rows - sq.row,
            Dir::W => sq.col - 1,
            Dir::E => self.cols - sq.col,
        }
    }

    /// Length of the board along the axis of `dir`.
    pub fn extent(&self, dir: Dir) -> u8 {
        match dir {
            Dir::N | Dir::S => self.rows,
            Dir::E | Dir::W => self.cols,
        }
    }

    /// All squares of the line parallel to the edge in direction `dir` that
    /// lies `depth` steps inside that edge.
    pub fn line(&self, dir: Dir, depth: u8) -> StoneSet {
        let mut set = StoneSet::EMPTY;
        match dir {
            Dir::N | Dir::S => {
                let row = if dir == Dir::N { 1 + depth } else { self.rows - depth };
                for col in 1..=self.cols {
                    set.insert(self.index(Square { row, col }));
                }
            }
            Dir::E | Dir::W => {
                let col = if dir == Dir::W { 1 + depth } else { self.cols - depth };
                for row in 1..=self.rows {
                    set.insert(self.index(Square { row, col }));
                }
            }
        }
        set
    }

    /// Row-major iterator over every square of the board.
    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        (0..self.area()).map(move |i| self.square(i))
    }

    /// Bitset of every edge square.
    pub fn edge_set(&self) -> StoneSet {
        let mut set = StoneSet::EMPTY;
        for (i, sq) in self.squares().enumerate() {
            if self.is_edge(sq) {
                set.insert(i);
            }
        }
        set
    }

    /// The start square of the Duke: the southernmost and easternmost of
    /// the central squares.
    pub fn duke_start(&self) -> Square {
        Square { row: self.rows / 2 + 1, col: self.cols / 2 + 1 }
    }

    /// The symmetries of this board (4 for rectangles, 8 for squares).
    pub fn symmetries(&self) -> &'static [Symmetry] {
        if self.is_square() {
            &Symmetry::ALL
        } else {
            &Symmetry::ALL[..4]
        }
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl std::str::FromStr for Dims {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RuleError::Syntax(format!("expected <rows>x<cols>, got {s:?}"));
        let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let rows = r.trim().parse::<u8>().map_err(|_| bad())?;
        let cols = c.trim().parse::<u8>().map_err(|_| bad())?;
        Dims::new(rows, cols)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    pub row: u8,
    pub col: u8,
}

impl Square {
    pub const fn new(row: u8, col: u8) -> Self {
        Square { row, col }
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.row, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    N,
    S,
    E,
    W,
}

impl Dir {
    /// Move-generation order.
    pub const ALL: [Dir; 4] = [Dir::N, Dir::S, Dir::E, Dir::W];

    #[inline]
    pub fn delta(self) -> (i8, i8) {
        match self {
            Dir::N => (-1, 0),
            Dir::S => (1, 0),
            Dir::E => (0, 1),
            Dir::W => (0, -1),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::S => Dir::N,
            Dir::E => Dir::W,
            Dir::W => Dir::E,
        }
    }

    pub fn is_vertical(self) -> bool {
        matches!(self, Dir::N | Dir::S)
    }

    /// The two directions at right angles to `self`.
    pub fn perpendicular(self) -> [Dir; 2] {
        if self.is_vertical() {
            [Dir::E, Dir::W]
        } else {
            [Dir::S, Dir::N]
        }
    }

    pub fn letter(self) -> char {
        match self {
            Dir::N => 'N',
            Dir::S => 'S',
            Dir::E => 'E',
            Dir::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Dir> {
        match c {
            'N' | 'n' => Some(Dir::N),
            'S' | 's' => Some(Dir::S),
            'E' | 'e' => Some(Dir::E),
            'W' | 'w' => Some(Dir::W),
            _ => None,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A set of squares, stored as a bitmask over row-major square indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StoneSet(pub u128);

impl StoneSet {
    pub const EMPTY: StoneSet = StoneSet(0);

    #[inline]
    pub fn single(idx: usize) -> Self {
        StoneSet(1u128 << idx)
    }

    #[inline]
    pub fn contains(self, idx: usize) -> bool {
        self.0 >> idx & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, idx: usize) {
        self.0 |= 1u128 << idx;
    }

    #[inline]
    pub fn remove(&mut self, idx: usize) {
        self.0 &= !(1u128 << idx);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: StoneSet) -> StoneSet {
        StoneSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: StoneSet) -> StoneSet {
        StoneSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: StoneSet) -> StoneSet {
        StoneSet(self.0 & !other.0)
    }

    /// Ascending iterator over member indices.
    #[inline]
    pub fn iter(self) -> StoneIter {
        StoneIter(self.0)
    }

    /// Bitmask of all squares of a board with `area` squares.
    #[inline]
    pub fn full(area: usize) -> StoneSet {
        if area >= 128 {
            StoneSet(u128::MAX)
        } else {
            StoneSet((1u128 << area) - 1)
        }
    }
}

impl FromIterator<usize> for StoneSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = StoneSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

pub struct StoneIter(u128);

impl Iterator for StoneIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for StoneIter {}

/// An element of the dihedral group acting on a board. Reflections are
/// applied first, then the optional transpose (only valid on square
/// boards).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symmetry {
    pub flip_rows: bool,
    pub flip_cols: bool,
    pub transpose: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { flip_rows: false, flip_cols: false, transpose: false };
    pub const MIRROR_EW: Symmetry = Symmetry { flip_rows: false, flip_cols: true, transpose: false };
    pub const MIRROR_NS: Symmetry = Symmetry { flip_rows: true, flip_cols: false, transpose: false };
    pub const ROT180: Symmetry = Symmetry { flip_rows: true, flip_cols: true, transpose: false };

    /// Rectangle symmetries first, then the four that need a square board.
    pub const ALL: [Symmetry; 8] = [
        Symmetry::IDENTITY,
        Symmetry::MIRROR_EW,
        Symmetry::MIRROR_NS,
        Symmetry::ROT180,
        Symmetry { flip_rows: false, flip_cols: false, transpose: true },
        Symmetry { flip_rows: false, flip_cols: true, transpose: true },
        Symmetry { flip_rows: true, flip_cols: false, transpose: true },
        Symmetry { flip_rows: true, flip_cols: true, transpose: true },
    ];

    /// Dimensions of the image board.
    pub fn image_dims(&self, dims: Dims) -> Dims {
        if self.transpose {
            dims.transposed()
        } else {
            dims
        }
    }

    #[inline]
    pub fn apply(&self, dims: Dims, sq: Square) -> Square {
        let mut r = sq.row;
        let mut c = sq.col;
        if self.flip_rows {
            r = dims.rows + 1 - r;
        }
        if self.flip_cols {
            c = dims.cols + 1 - c;
        }
        if self.transpose {
            std::mem::swap(&mut r, &mut c);
        }
        Square { row: r, col: c }
    }

    pub fn apply_dir(&self, dir: Dir) -> Dir {
        let mut d = dir;
        if self.flip_rows && d.is_vertical() {
            d = d.opposite();
        }
        if self.flip_cols && !d.is_vertical() {
            d = d.opposite();
        }
        if self.transpose {
            d = match d {
                Dir::N => Dir::W,
                Dir::W => Dir::N,
                Dir::S => Dir::E,
                Dir::E => Dir::S,
            };
        }
        d
    }

    pub fn apply_set(&self, dims: Dims, set: StoneSet) -> StoneSet {
        if *self == Symmetry::IDENTITY {
            return set;
        }
        let out = self.image_dims(dims);
        set.iter().map(|i| out.index(self.apply(dims, dims.square(i)))).collect()
    }

    /// The symmetry undoing `self` (acting on the image board).
    pub fn inverse(&self) -> Symmetry {
        if self.transpose {
            // (flip then transpose)^-1 = transpose then flip = flip' then transpose
            Symmetry { flip_rows: self.flip_cols, flip_cols: self.flip_rows, transpose: true }
        } else {
            *self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_square_convention() {
        assert_eq!(Dims::new(8, 8).unwrap().duke_start(), Square::new(5, 5));
        assert_eq!(Dims::new(6, 9).unwrap().duke_start(), Square::new(4, 5));
        assert_eq!(Dims::new(7, 7).unwrap().duke_start(), Square::new(4, 4));
    }

    #[test]
    fn dims_reject_degenerate() {
        assert!(Dims::new(0, 5).is_err());
        assert!(Dims::new(12, 11).is_err());
        assert!(Dims::new(8, 16).is_ok());
        assert_eq!("6x9".parse::<Dims>().unwrap(), Dims { rows: 6, cols: 9 });
    }

    #[test]
    fn symmetry_inverse_roundtrip() {
        let dims = Dims::new(5, 5).unwrap();
        for s in Symmetry::ALL {
            let inv = s.inverse();
            for sq in dims.squares() {
                assert_eq!(inv.apply(dims, s.apply(dims, sq)), sq, "{s:?}");
            }
            for d in Dir::ALL {
                let moved = dims.step(Square::new(3, 3), d).unwrap();
                let img = s.apply(dims, moved);
                assert_eq!(dims.step(s.apply(dims, Square::new(3, 3)), s.apply_dir(d)), Some(img));
            }
        }
        let rect = Dims::new(6, 9).unwrap();
        for s in rect.symmetries() {
            for sq in rect.squares() {
                assert_eq!(s.inverse().apply(rect, s.apply(rect, sq)), sq);
            }
        }
    }

    #[test]
    fn stone_set_iterates_in_order() {
        let s: StoneSet = [70, 3, 127, 0].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 70, 127]);
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn lines_and_distances() {
        let d = Dims::new(6, 9).unwrap();
        assert_eq!(d.line(Dir::S, 0).len(), 9);
        assert!(d.line(Dir::S, 1).contains(d.index(Square::new(5, 4))));
        assert!(d.line(Dir::E, 1).contains(d.index(Square::new(2, 8))));
        assert_eq!(d.distance_to_edge(Square::new(5, 4), Dir::S), 1);
        assert_eq!(d.distance_to_edge(Square::new(5, 4), Dir::W), 3);
    }
}
