//! Single-line position notation (DPN).
//!
//! ```text
//! 8x8 D5,5 B[] W[3,3;1,1] G w1 b0
//! ```
//!
//! Fields: board dimensions, Duke square, black stones, white stones, side
//! to move, white stones in hand, black stones in hand (`inf` for the
//! standard game's unlimited supply).

use crate::error::DpnError;
use crate::geometry::{Dims, Square};
use crate::position::{BlackHand, Inventory, Player, Position};

pub fn format_dpn(p: &Position) -> String {
    let list = |sqs: Vec<Square>| sqs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";");
    format!(
        "{} D{} B[{}] W[{}] {} w{} b{}",
        p.dims(),
        p.duke(),
        list(p.black_squares()),
        list(p.white_squares()),
        p.to_move(),
        p.hand().whites,
        p.hand().blacks,
    )
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> DpnError {
        let line = self.text[..self.pos].matches('\n').count() + 1;
        let line_start = self.text[..self.pos].rfind('\n').map_or(0, |i| i + 1);
        DpnError::Syntax { line, column: self.pos - line_start + 1, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), DpnError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn spaces(&mut self) -> Result<(), DpnError> {
        let n = self.text[self.pos..].len() - self.text[self.pos..].trim_start_matches(' ').len();
        if n == 0 {
            return Err(self.err("expected a space"));
        }
        self.pos += n;
        Ok(())
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T, DpnError> {
        let digits = self.text[self.pos..].chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(self.err("expected a number"));
        }
        let s = &self.text[self.pos..self.pos + digits];
        let v = s.parse::<T>().map_err(|_| self.err(format!("number {s} out of range")))?;
        self.pos += digits;
        Ok(v)
    }

    fn square(&mut self) -> Result<Square, DpnError> {
        let row = self.number()?;
        self.expect(',')?;
        let col = self.number()?;
        Ok(Square::new(row, col))
    }

    fn square_list(&mut self, tag: char) -> Result<Vec<Square>, DpnError> {
        self.expect(tag)?;
        self.expect('[')?;
        let mut out = Vec::new();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.square()?);
            match self.peek() {
                Some(';') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ';' or ']'")),
            }
        }
    }
}

pub fn parse_dpn(text: &str) -> Result<Position, DpnError> {
    let text = text.trim_end_matches(['\n', '\r']);
    let mut c = Cursor { text, pos: 0 };
    let rows = c.number::<u8>()?;
    if !matches!(c.peek(), Some('x') | Some('X')) {
        return Err(c.err("expected 'x'"));
    }
    c.pos += 1;
    let cols = c.number::<u8>()?;
    let dims = Dims::new(rows, cols)?;
    c.spaces()?;
    c.expect('D')?;
    let duke = c.square()?;
    c.spaces()?;
    let blacks = c.square_list('B')?;
    c.spaces()?;
    let whites = c.square_list('W')?;
    c.spaces()?;
    let to_move = match c.peek() {
        Some('D') => Player::D,
        Some('G') => Player::G,
        _ => return Err(c.err("expected side to move D or G")),
    };
    c.pos += 1;
    c.spaces()?;
    c.expect('w')?;
    let whites_in_hand = c.number::<u8>()?;
    c.spaces()?;
    c.expect('b')?;
    let blacks_in_hand = if c.text[c.pos..].starts_with("inf") {
        c.pos += 3;
        BlackHand::Unlimited
    } else {
        BlackHand::Count(c.number::<u16>()?)
    };
    if c.pos != text.len() {
        return Err(c.err("unexpected trailing characters"));
    }
    let hand = Inventory { whites: whites_in_hand, blacks: blacks_in_hand };
    Ok(Position::new(dims, duke, &blacks, &whites, to_move, hand)?)
}
