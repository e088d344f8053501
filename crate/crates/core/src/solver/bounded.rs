//! Retrograde attractor computation for the bounded-inventory game.
//!
//! The solver works backwards from the terminal states where the Duke
//! stands on an edge. Predecessors are generated on the fly by un-moving:
//! a Duke step is undone by stepping back; a G move is undone by lifting a
//! stone, moving a white stone back, or un-passing. D-to-move states join
//! the attractor as soon as one successor is in it; G-to-move states keep a
//! counter of successors not yet known to be D wins and join when it
//! reaches zero. Frontiers are processed layer by layer, so the layer
//! number is the exact distance to a forced escape and the result does not
//! depend on how a layer is split between worker threads.

use std::sync::atomic::{AtomicU16, Ordering};
use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;

use super::index::{RawState, StateIndexer};
use super::{Label, SolveError, SolveResult};
use crate::geometry::{Dims, Dir, StoneSet};
use crate::position::Player;

const UNKNOWN: u16 = u16::MAX;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Refuse spaces larger than this many indexed states.
    pub max_states: u64,
    /// Worker threads; 1 runs everything on the calling thread.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_states: 400_000_000, threads: 1 }
    }
}

/// Neighbour table: `neighbours[sq]` lists in-bounds orthogonal neighbours.
fn neighbour_table(dims: Dims) -> Vec<Vec<usize>> {
    dims.squares()
        .map(|sq| Dir::ALL.iter().filter_map(|&d| dims.step(sq, d)).map(|t| dims.index(t)).collect())
        .collect()
}

struct Space<'a> {
    ix: &'a StateIndexer,
    full: StoneSet,
    edges: StoneSet,
    neighbours: Vec<Vec<usize>>,
    white_budget: usize,
    black_budget: usize,
}

impl Space<'_> {
    #[inline]
    fn out_degree(&self, s: &RawState) -> u16 {
        let n = self.full.len();
        let e = n - 1 - s.whites.len() - s.blacks.len();
        let mut deg = 1 + s.whites.len() * e;
        if s.whites.len() < self.white_budget {
            deg += e;
        }
        if s.blacks.len() < self.black_budget {
            deg += e;
        }
        deg as u16
    }

    /// Visits the predecessors of `s` that are not terminal.
    #[inline]
    fn for_each_pred(&self, s: &RawState, mut f: impl FnMut(u64, Player)) {
        let ix = self.ix;
        match s.to_move {
            Player::G => {
                // D stepped onto s.duke from a neighbour.
                let stones = s.whites.union(s.blacks);
                for &nb in &self.neighbours[s.duke] {
                    if self.edges.contains(nb) || stones.contains(nb) {
                        continue;
                    }
                    f(ix.index_parts(0, nb, s.whites, s.blacks), Player::D);
                }
            }
            Player::D => {
                if self.edges.contains(s.duke) {
                    return;
                }
                let mut occupied = s.whites.union(s.blacks);
                occupied.insert(s.duke);
                let empty = self.full.difference(occupied);
                f(ix.index_parts(1, s.duke, s.whites, s.blacks), Player::G);
                for x in s.whites.iter() {
                    let mut base = s.whites;
                    base.remove(x);
                    f(ix.index_parts(1, s.duke, base, s.blacks), Player::G);
                    for y in empty.iter() {
                        let mut w = base;
                        w.insert(y);
                        f(ix.index_parts(1, s.duke, w, s.blacks), Player::G);
                    }
                }
                for x in s.blacks.iter() {
                    let mut b = s.blacks;
                    b.remove(x);
                    f(ix.index_parts(1, s.duke, s.whites, b), Player::G);
                }
            }
        }
    }
}

fn as_atomic(v: &mut [u16]) -> &[AtomicU16] {
    // SAFETY: AtomicU16 has the same size and alignment as u16, and the
    // exclusive borrow guarantees no other non-atomic access while shared.
    unsafe { &*(v as *mut [u16] as *const [AtomicU16]) }
}

pub fn solve_bounded(dims: Dims, white_budget: u8, black_budget: u8, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    dims.validate().map_err(SolveError::Rule)?;
    let estimate = StateIndexer::estimate(dims, white_budget, black_budget);
    if estimate > opts.max_states as u128 || estimate > u32::MAX as u128 {
        return Err(SolveError::TooLarge { dims, white: white_budget, black: black_budget, states: estimate, cap: opts.max_states });
    }
    if white_budget as usize + black_budget as usize >= dims.area() {
        return Err(SolveError::BadBudget(format!("{} stones do not fit on a {dims} board", white_budget as usize + black_budget as usize)));
    }
    let started = Instant::now();
    let ix = StateIndexer::new(dims, white_budget, black_budget);
    let total = ix.total_states();
    let half = ix.half();
    info!("solving {dims} w{white_budget} b{black_budget}: {total} indexed states");

    let space = Space {
        ix: &ix,
        full: StoneSet::full(dims.area()),
        edges: dims.edge_set(),
        neighbours: neighbour_table(dims),
        white_budget: white_budget as usize,
        black_budget: black_budget as usize,
    };

    let mut dist_store = vec![UNKNOWN; total as usize];
    let mut counter_store = vec![0u16; half as usize];

    // Seed terminal escapes and the G-side successor counters.
    let mut frontier: Vec<u32> = Vec::new();
    for idx in 0..total {
        let s = ix.decode(idx);
        if !s.is_valid() {
            continue;
        }
        if space.edges.contains(s.duke) {
            dist_store[idx as usize] = 0;
            if s.to_move == Player::G {
                frontier.push(idx as u32);
            }
        } else if s.to_move == Player::G {
            counter_store[(idx - half) as usize] = space.out_degree(&s);
        }
    }

    let pool = if opts.threads > 1 {
        Some(rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build().map_err(|e| SolveError::Io(e.to_string()))?)
    } else {
        None
    };

    {
        let dist = as_atomic(&mut dist_store);
        let counters = as_atomic(&mut counter_store);
        let expand = |idx: u32, layer: u16, out: &mut Vec<u32>| {
            let s = ix.decode(idx as u64);
            space.for_each_pred(&s, |p, side| match side {
                Player::D => {
                    if dist[p as usize]
                        .compare_exchange(UNKNOWN, layer, Ordering::Relaxed, Ordering::Relaxed)
                        .is_ok()
                    {
                        out.push(p as u32);
                    }
                }
                Player::G => {
                    debug_assert_eq!(dist[p as usize].load(Ordering::Relaxed), UNKNOWN);
                    let c = &counters[(p - half) as usize];
                    if c.fetch_sub(1, Ordering::Relaxed) == 1 {
                        dist[p as usize].store(layer, Ordering::Relaxed);
                        out.push(p as u32);
                    }
                }
            });
        };

        let mut layer: u16 = 0;
        let mut won = frontier.len() as u64;
        while !frontier.is_empty() {
            if layer == UNKNOWN - 1 {
                return Err(SolveError::DistanceOverflow);
            }
            layer += 1;
            let t = Instant::now();
            let mut next: Vec<u32> = match &pool {
                None => {
                    let mut out = Vec::new();
                    for &idx in &frontier {
                        expand(idx, layer, &mut out);
                    }
                    out
                }
                Some(pool) => pool.install(|| {
                    frontier
                        .par_chunks(1 << 12)
                        .map(|chunk| {
                            let mut out = Vec::new();
                            for &idx in chunk {
                                expand(idx, layer, &mut out);
                            }
                            out
                        })
                        .flatten_iter()
                        .collect()
                }),
            };
            next.sort_unstable();
            won += next.len() as u64;
            let secs = t.elapsed().as_secs_f64().max(1e-9);
            debug!(
                "layer {layer}: expanded {} states ({:.0} states/s), next frontier {}",
                frontier.len(),
                frontier.len() as f64 / secs,
                next.len()
            );
            frontier = next;
        }
        info!("attractor fixed point after {layer} layers, {won} winning states, {:.1}s", started.elapsed().as_secs_f64());
    }
    drop(counter_store);

    let mut labels = vec![0u8; (total as usize).div_ceil(4)];
    for idx in 0..total {
        let s = ix.decode(idx);
        let label = if !s.is_valid() {
            Label::Invalid
        } else if dist_store[idx as usize] != UNKNOWN {
            Label::DWin
        } else if s.to_move == Player::D && {
            let stones = s.whites.union(s.blacks);
            space.neighbours[s.duke].iter().all(|&nb| stones.contains(nb))
        } {
            Label::GWinImmobilized
        } else {
            Label::Draw
        };
        labels[idx as usize / 4] |= (label as u8) << (2 * (idx % 4));
    }
    Ok(SolveResult::from_parts(ix, labels, Some(dist_store)))
}
