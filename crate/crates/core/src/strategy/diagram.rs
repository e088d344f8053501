//! Positional strategy diagrams for G.
//!
//! A diagram labels board cells. Uppercase letters mark strategic squares.
//! Lowercase letters on a cell list the strategic squares G must have
//! covered whenever the Duke stands there. `+` asks for a tactical stone on
//! the edge square next to the Duke, `#` says the strategic square takes a
//! black stone, and `>k` switches to diagram `k` as soon as the Duke
//! enters the cell.
//!
//! Text format:
//!
//! ```text
//! first: Fw
//! diagram: 1
//! dims: 3x3
//! A  a   .
//! .  ab+ .
//! B  .   >2
//! ---
//! diagram: 2
//! ...
//! ```
//!
//! Cell tokens are `.` or `[Upper][#][lower...][+][>id]`; the uppercase
//! letter may also appear among the lowercase ones (`aB`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::geometry::{Dims, Square};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StoneColor {
    White,
    Black,
}

impl StoneColor {
    pub fn letter(self) -> char {
        match self {
            StoneColor::White => 'w',
            StoneColor::Black => 'b',
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cell {
    pub cover: BTreeSet<char>,
    pub tactical: bool,
    pub strategic: Option<char>,
    pub black_required: bool,
    pub transition: Option<u32>,
}

impl Cell {
    /// Carries a Duke requirement (lowercase letters or `+`).
    pub fn is_labeled(&self) -> bool {
        !self.cover.is_empty() || self.tactical
    }

    fn is_blank(&self) -> bool {
        *self == Cell::default()
    }

    /// Requirement letters, with `+` counted as one of them.
    pub fn letters(&self) -> BTreeSet<char> {
        let mut s = self.cover.clone();
        if self.tactical {
            s.insert('+');
        }
        s
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_blank() {
            return f.write_char('.');
        }
        if let Some(u) = self.strategic {
            f.write_char(u)?;
        }
        if self.black_required {
            f.write_char('#')?;
        }
        for c in &self.cover {
            f.write_char(*c)?;
        }
        if self.tactical {
            f.write_char('+')?;
        }
        if let Some(t) = self.transition {
            write!(f, ">{t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub id: u32,
    pub dims: Dims,
    /// Row-major.
    pub cells: Vec<Cell>,
}

impl Diagram {
    pub fn cell(&self, sq: Square) -> &Cell {
        &self.cells[self.dims.index(sq)]
    }

    /// Square of the strategic letter `upper`.
    pub fn strategic_square(&self, upper: char) -> Option<Square> {
        self.cells.iter().position(|c| c.strategic == Some(upper)).map(|i| self.dims.square(i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramSet {
    pub diagrams: Vec<Diagram>,
    pub start_diagram: u32,
    /// G's first stone when she moves first: strategic letter and colour.
    pub stipulated_first_move: Option<(char, StoneColor)>,
}

impl DiagramSet {
    pub fn diagram(&self, id: u32) -> Option<&Diagram> {
        self.diagrams.iter().find(|d| d.id == id)
    }

    pub fn dims(&self) -> Dims {
        self.diagram(self.start_diagram).expect("validated start diagram").dims
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("diagram {diagram}, cell {square}: {message}")]
    Cell { diagram: u32, square: Square, message: String },
    #[error("diagram {diagram}: strategic letter {letter} appears more than once")]
    DuplicateLetter { diagram: u32, letter: char },
    #[error("diagram {diagram}: letter {letter} has no strategic square")]
    DanglingLetter { diagram: u32, letter: char },
    #[error("{0}")]
    Set(String),
}

fn parse_cell(token: &str) -> Result<Cell, String> {
    let mut cell = Cell::default();
    if token == "." {
        return Ok(cell);
    }
    let mut chars = token.chars().peekable();
    let mut seen_plus = false;
    while let Some(c) = chars.next() {
        match c {
            'A'..='Z' if !seen_plus => {
                if cell.strategic.replace(c).is_some() {
                    return Err(format!("two strategic letters in {token:?}"));
                }
            }
            '#' if !seen_plus => {
                if cell.black_required {
                    return Err(format!("repeated shading in {token:?}"));
                }
                cell.black_required = true;
            }
            'a'..='z' if !seen_plus => {
                if !cell.cover.insert(c) {
                    return Err(format!("repeated letter {c} in {token:?}"));
                }
            }
            '+' if !seen_plus => {
                seen_plus = true;
                cell.tactical = true;
            }
            '>' => {
                let digits: String = chars.by_ref().collect();
                let id = digits.parse::<u32>().map_err(|_| format!("bad transition target in {token:?}"))?;
                cell.transition = Some(id);
            }
            _ => return Err(format!("unknown token {token:?}")),
        }
    }
    if cell.black_required && cell.strategic.is_none() {
        return Err(format!("shading without a strategic letter in {token:?}"));
    }
    Ok(cell)
}

/// Parses a diagram set and checks its structure.
pub fn parse_diagrams(text: &str) -> Result<DiagramSet, DiagramError> {
    let mut diagrams = Vec::new();
    let mut first = None;
    let mut start = None;
    let mut current: Option<(u32, Option<Dims>, Vec<Vec<Cell>>)> = None;
    let syntax = |line: usize, message: String| DiagramError::Syntax { line, message };

    let mut finish = |cur: Option<(u32, Option<Dims>, Vec<Vec<Cell>>)>, line: usize| -> Result<(), DiagramError> {
        if let Some((id, dims, rows)) = cur {
            let dims = dims.ok_or_else(|| syntax(line, format!("diagram {id} has no dims line")))?;
            if rows.len() != dims.rows as usize {
                return Err(syntax(line, format!("diagram {id} has {} rows, expected {}", rows.len(), dims.rows)));
            }
            diagrams.push(Diagram { id, dims, cells: rows.into_iter().flatten().collect() });
        }
        Ok(())
    };

    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with("//") {
            continue;
        }
        if t == "---" {
            finish(current.take(), line)?;
            continue;
        }
        if let Some(rest) = t.strip_prefix("first:") {
            let rest = rest.trim();
            let mut cs = rest.chars();
            let (Some(letter @ 'A'..='Z'), Some(color), None) = (cs.next(), cs.next(), cs.next()) else {
                return Err(syntax(line, format!("bad first move {rest:?}")));
            };
            let color = match color {
                'w' => StoneColor::White,
                'b' => StoneColor::Black,
                _ => return Err(syntax(line, format!("bad stone colour {color:?}"))),
            };
            first = Some((letter, color));
            continue;
        }
        if let Some(rest) = t.strip_prefix("start:") {
            start = Some(rest.trim().parse::<u32>().map_err(|_| syntax(line, "bad start id".into()))?);
            continue;
        }
        if let Some(rest) = t.strip_prefix("diagram:") {
            finish(current.take(), line)?;
            let id = rest.trim().parse::<u32>().map_err(|_| syntax(line, "bad diagram id".into()))?;
            current = Some((id, None, Vec::new()));
            continue;
        }
        let Some((id, dims, rows)) = current.as_mut() else {
            return Err(syntax(line, "cell row outside a diagram".into()));
        };
        if let Some(rest) = t.strip_prefix("dims:") {
            let d: Dims = rest.trim().parse().map_err(|e| syntax(line, format!("{e}")))?;
            *dims = Some(d);
            continue;
        }
        let Some(d) = *dims else {
            return Err(syntax(line, format!("diagram {id} needs a dims line before its rows")));
        };
        let row = rows.len() + 1;
        if row > d.rows as usize {
            return Err(syntax(line, format!("diagram {id} has more than {} rows", d.rows)));
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens.len() != d.cols as usize {
            return Err(syntax(line, format!("row {row} has {} cells, expected {}", tokens.len(), d.cols)));
        }
        let mut cells = Vec::with_capacity(tokens.len());
        for (c, tok) in tokens.iter().enumerate() {
            let square = Square::new(row as u8, c as u8 + 1);
            cells.push(parse_cell(tok).map_err(|message| DiagramError::Cell { diagram: *id, square, message })?);
        }
        rows.push(cells);
    }
    finish(current.take(), last_line)?;

    if diagrams.is_empty() {
        return Err(DiagramError::Set("no diagrams".into()));
    }
    let set = DiagramSet {
        start_diagram: start.unwrap_or(diagrams[0].id),
        diagrams,
        stipulated_first_move: first,
    };
    check_structure(&set)?;
    Ok(set)
}

fn check_structure(set: &DiagramSet) -> Result<(), DiagramError> {
    let ids: BTreeSet<u32> = set.diagrams.iter().map(|d| d.id).collect();
    if ids.len() != set.diagrams.len() {
        return Err(DiagramError::Set("duplicate diagram id".into()));
    }
    let start = set
        .diagram(set.start_diagram)
        .ok_or_else(|| DiagramError::Set(format!("start diagram {} does not exist", set.start_diagram)))?;
    if let Some((letter, _)) = set.stipulated_first_move {
        if start.strategic_square(letter).is_none() {
            return Err(DiagramError::Set(format!("first move letter {letter} is not a strategic square of the start diagram")));
        }
    }
    for d in &set.diagrams {
        if d.dims != start.dims {
            return Err(DiagramError::Set(format!("diagram {} is {}, start diagram is {}", d.id, d.dims, start.dims)));
        }
        let mut uppers = BTreeSet::new();
        for cell in &d.cells {
            if let Some(u) = cell.strategic {
                if !uppers.insert(u) {
                    return Err(DiagramError::DuplicateLetter { diagram: d.id, letter: u });
                }
            }
        }
        for (i, cell) in d.cells.iter().enumerate() {
            let square = d.dims.square(i);
            for &l in &cell.cover {
                if !uppers.contains(&l.to_ascii_uppercase()) {
                    return Err(DiagramError::DanglingLetter { diagram: d.id, letter: l });
                }
            }
            if let Some(t) = cell.transition {
                if !ids.contains(&t) {
                    return Err(DiagramError::Cell { diagram: d.id, square, message: format!("transition to missing diagram {t}") });
                }
            }
            if cell.tactical && tactical_edge(d.dims, square).is_err() {
                return Err(DiagramError::Cell {
                    diagram: d.id,
                    square,
                    message: "'+' needs exactly one edge at distance one".into(),
                });
            }
        }
    }
    Ok(())
}

/// The edge square a `+` on `sq` refers to.
pub(crate) fn tactical_edge(dims: Dims, sq: Square) -> Result<Square, ()> {
    let near: Vec<_> = crate::geometry::Dir::ALL.into_iter().filter(|&d| dims.distance_to_edge(sq, d) == 1).collect();
    match near.as_slice() {
        [d] => Ok(dims.step(sq, *d).expect("one line from the edge")),
        _ => Err(()),
    }
}

pub fn format_diagrams(set: &DiagramSet) -> String {
    let mut out = String::new();
    if let Some((l, c)) = set.stipulated_first_move {
        let _ = writeln!(out, "first: {l}{}", c.letter());
    }
    let _ = writeln!(out, "start: {}", set.start_diagram);
    for (i, d) in set.diagrams.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        let _ = writeln!(out, "diagram: {}", d.id);
        let _ = writeln!(out, "dims: {}", d.dims);
        for r in 0..d.dims.rows as usize {
            let row: Vec<String> =
                d.cells[r * d.dims.cols as usize..(r + 1) * d.dims.cols as usize].iter().map(|c| c.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Two neighbouring labeled cells whose requirements differ by more than
/// one letter in some direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub from: Square,
    pub to: Square,
    /// Letters required at `to` but not at `from`.
    pub new_letters: BTreeSet<char>,
}

/// Checks that every step between labeled cells asks for at most one new
/// covered square, so G can always respond with a single move.
pub fn validate_local(d: &Diagram) -> Vec<Violation> {
    let mut out = Vec::new();
    let dims = d.dims;
    for sq in dims.squares() {
        let u = d.cell(sq);
        if !u.is_labeled() {
            continue;
        }
        for dir in [crate::geometry::Dir::E, crate::geometry::Dir::S] {
            let Some(t) = dims.step(sq, dir) else { continue };
            let v = d.cell(t);
            if !v.is_labeled() {
                continue;
            }
            let (lu, lv) = (u.letters(), v.letters());
            let fwd: BTreeSet<char> = lv.difference(&lu).copied().collect();
            let back: BTreeSet<char> = lu.difference(&lv).copied().collect();
            if fwd.len() > 1 {
                out.push(Violation { from: sq, to: t, new_letters: fwd });
            }
            if back.len() > 1 {
                out.push(Violation { from: t, to: sq, new_letters: back });
            }
        }
    }
    out
}

/// Strategic squares by letter for one diagram.
pub(crate) fn strategic_map(d: &Diagram) -> BTreeMap<char, (Square, bool)> {
    d.cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.strategic.map(|u| (u.to_ascii_lowercase(), (d.dims.square(i), c.black_required))))
        .collect()
}
