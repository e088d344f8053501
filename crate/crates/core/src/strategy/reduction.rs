//! Play on a large board by ignoring outer rows and columns so that the
//! Duke stands on the start square of a smaller board with a known G
//! strategy.

use super::{GStrategy, StrategyError, StrategyMap};
use crate::geometry::{Dims, Square, StoneSet, Symmetry};
use crate::position::{Move, Position, Variant};

/// How the full board maps onto the base board: first a board symmetry,
/// then a window starting at the given offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReductionFrame {
    pub symmetry: Symmetry,
    pub row_offset: u8,
    pub col_offset: u8,
    /// Index into the strategy's base list.
    pub base: usize,
}

/// Reduction to G-first base strategies on smaller boards.
#[derive(Clone, Debug)]
pub struct ReductionStrategy {
    pub dims: Dims,
    pub bases: Vec<StrategyMap>,
}

impl ReductionStrategy {
    pub fn new(dims: Dims, bases: Vec<StrategyMap>) -> Self {
        ReductionStrategy { dims, bases }
    }

    /// The first (symmetry, base, window) putting the Duke on the base
    /// board's start square.
    pub fn find_frame(&self, p: &Position) -> Result<ReductionFrame, StrategyError> {
        let dims = p.dims();
        for &symmetry in &Symmetry::ALL {
            let image = symmetry.image_dims(dims);
            let duke = symmetry.apply(dims, p.duke());
            for (base, map) in self.bases.iter().enumerate() {
                let b = map.dims;
                if b.rows > image.rows || b.cols > image.cols || b == image {
                    continue;
                }
                let s = b.duke_start();
                let (Some(ro), Some(co)) = (duke.row.checked_sub(s.row), duke.col.checked_sub(s.col)) else {
                    continue;
                };
                if ro + b.rows > image.rows || co + b.cols > image.cols {
                    continue;
                }
                let frame = ReductionFrame { symmetry, row_offset: ro, col_offset: co, base };
                if self.window(p, &frame).is_ok() {
                    return Ok(frame);
                }
            }
        }
        Err(StrategyError::Unsupported(format!("no base strategy fits {} around the Duke at {}", dims, p.duke())))
    }

    /// The position as seen on the base board.
    fn window(&self, p: &Position, f: &ReductionFrame) -> Result<Position, StrategyError> {
        let dims = p.dims();
        let b = self.bases[f.base].dims;
        let inside = |sq: Square| -> Option<Square> {
            let t = f.symmetry.apply(dims, sq);
            let r = t.row.checked_sub(f.row_offset).filter(|&r| r >= 1 && r <= b.rows)?;
            let c = t.col.checked_sub(f.col_offset).filter(|&c| c >= 1 && c <= b.cols)?;
            Some(Square::new(r, c))
        };
        let crop = |set: StoneSet| -> Result<Vec<Square>, StrategyError> {
            set.iter()
                .map(|i| inside(dims.square(i)).ok_or_else(|| StrategyError::Failure("stone outside the reduced board".into())))
                .collect()
        };
        let duke = inside(p.duke()).ok_or_else(|| StrategyError::Failure("Duke outside the reduced board".into()))?;
        Ok(Position::new(b, duke, &crop(p.blacks())?, &crop(p.whites())?, p.to_move(), p.hand())?)
    }

    fn lift(&self, p: &Position, f: &ReductionFrame, sq: Square) -> Square {
        let image = f.symmetry.image_dims(p.dims());
        f.symmetry.inverse().apply(image, Square::new(sq.row + f.row_offset, sq.col + f.col_offset))
    }
}

/// G's move on the full board: pass until the Duke has moved, then the
/// base strategy's move translated back.
pub fn reduction_move(
    s: &ReductionStrategy,
    p: &Position,
    frame: Option<ReductionFrame>,
) -> Result<(Move, Option<ReductionFrame>), StrategyError> {
    let frame = match frame {
        Some(f) => f,
        None if p.duke() == p.dims().duke_start() => {
            if p.variant() != Variant::Bounded {
                return Err(StrategyError::Unsupported("passing needs the bounded variant".into()));
            }
            return Ok((Move::Pass, None));
        }
        None => s.find_frame(p)?,
    };
    let sub = s.window(p, &frame)?;
    let (mv, ()) = s.bases[frame.base].g_move(&sub, &())?;
    let lifted = match mv {
        Move::PlaceBlack(q) => Move::PlaceBlack(s.lift(p, &frame, q)),
        Move::PlaceWhite(q) => Move::PlaceWhite(s.lift(p, &frame, q)),
        Move::Relocate { from, to } => Move::Relocate { from: s.lift(p, &frame, from), to: s.lift(p, &frame, to) },
        other => other,
    };
    Ok((lifted, Some(frame)))
}

impl GStrategy for ReductionStrategy {
    type Token = Option<ReductionFrame>;

    fn dims(&self) -> Dims {
        self.dims
    }

    fn initial_token(&self) -> Option<ReductionFrame> {
        None
    }

    fn g_move(&self, p: &Position, token: &Option<ReductionFrame>) -> Result<(Move, Option<ReductionFrame>), StrategyError> {
        reduction_move(self, p, *token)
    }
}
