//! Independent checks shared by the integration tests and the acceptance
//! runner. They only use forward move generation, never the solver's
//! internals.

#![allow(dead_code)]

use std::collections::HashMap;

use dukego::solver::{Label, SolveResult};
use dukego::tactics::{detect_corner_win, detect_imminent_win, duke_policy, Rationale, TacticReport};
use dukego::{format_dpn, Dims, Inventory, Player, Position, Square, TerminalStatus};

/// Every valid position of a solved space, with its index.
pub fn valid_positions(res: &SolveResult) -> impl Iterator<Item = (u64, Position)> + '_ {
    let ix = res.indexer();
    (0..res.total_states()).filter_map(move |idx| {
        let s = ix.decode(idx);
        s.is_valid().then(|| (idx, ix.to_position(&s)))
    })
}

/// Labels and distances agree with a one-ply forward expansion of every
/// state. Returns the number of states checked or the first offender.
pub fn check_local_consistency(res: &SolveResult) -> Result<u64, String> {
    let mut checked = 0;
    for (idx, p) in valid_positions(res) {
        let ev = res.evaluation_at(idx);
        let bad = |why: &str| Err(format!("{}: {why} (label {}, distance {:?})", format_dpn(&p), ev.label, ev.distance));
        checked += 1;
        match p.terminal_status() {
            TerminalStatus::DWin => {
                if ev.label != Label::DWin || ev.distance != Some(0) {
                    return bad("Duke on the edge");
                }
                continue;
            }
            TerminalStatus::GWinImmobilized => {
                if ev.label != Label::GWinImmobilized {
                    return bad("Duke immobilized");
                }
                continue;
            }
            TerminalStatus::Ongoing => {
                if ev.label == Label::GWinImmobilized || ev.label == Label::Invalid {
                    return bad("ongoing state with a terminal label");
                }
            }
        }
        let succ: Vec<(Label, Option<u16>)> = p
            .legal_moves()
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|m| {
                let q = p.apply(m).expect("legal move applies");
                let e = res.evaluate(&q).expect("successor in the space");
                (e.label, e.distance)
            })
            .collect();
        let wins: Vec<u16> = succ.iter().filter(|s| s.0 == Label::DWin).map(|s| s.1.unwrap_or(u16::MAX)).collect();
        let expected = match p.to_move() {
            Player::D => wins.iter().min().map(|d| d + 1),
            Player::G if !succ.is_empty() && wins.len() == succ.len() => wins.iter().max().map(|d| d + 1),
            Player::G => None,
        };
        match expected {
            Some(d) if ev.label != Label::DWin || ev.distance != Some(d) => return bad(&format!("expected D-win in {d}")),
            None if ev.label == Label::DWin => return bad("expected no D-win"),
            _ => {}
        }
    }
    Ok(checked)
}

/// From every non-terminal D-win state, best_move reaches a state exactly
/// one step closer.
pub fn check_distance_decrease(res: &SolveResult) -> Result<u64, String> {
    let mut checked = 0;
    for (idx, p) in valid_positions(res) {
        let ev = res.evaluation_at(idx);
        if ev.label != Label::DWin || p.terminal_status() != TerminalStatus::Ongoing {
            continue;
        }
        let mv = res.best_move(&p).map_err(|e| e.to_string())?;
        let next = res.evaluate(&p.apply(mv).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let want = ev.distance.map(|d| d - 1);
        if next.label != Label::DWin || next.distance != want {
            return Err(format!("{}: {mv} leads to {:?}, wanted distance {want:?}", format_dpn(&p), next));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Labels are constant on symmetry orbits.
pub fn check_symmetry_invariance(res: &SolveResult) -> Result<u64, String> {
    let mut checked = 0;
    for (idx, p) in valid_positions(res) {
        let label = res.label_at(idx);
        for &sym in p.dims().symmetries() {
            let q = p.transform(sym);
            let other = res.query_label(&q).map_err(|e| e.to_string())?;
            if other != label {
                return Err(format!("{} is {label} but its image {} is {other}", format_dpn(&p), format_dpn(&q)));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

/// Outcome of a monotonicity sweep.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Monotonicity {
    /// G-win states of the smaller space.
    pub g_states: u64,
    /// (state, added stone) pairs checked.
    pub checked: u64,
}

/// Adding a stone to a G-win state never hands the Duke a win.
///
/// A white stone is taken from G's hand: it can be relocated later, so it
/// is never worse on the board. A black stone is added on top of G's hand,
/// so `with_black` must be the space with one more black stone. Putting
/// G's last black in hand onto an arbitrary square is not monotone.
pub fn check_monotonicity(res: &SolveResult, with_black: Option<&SolveResult>) -> Result<Monotonicity, String> {
    let (wb, bb) = res.budgets();
    if let Some(big) = with_black {
        if big.dims() != res.dims() || big.budgets() != (wb, bb + 1) {
            return Err(format!("{:?} is not the space with one more black than {:?}", big, res));
        }
    }
    let mut out = Monotonicity::default();
    for (idx, p) in valid_positions(res) {
        if res.label_at(idx) == Label::DWin {
            continue;
        }
        out.g_states += 1;
        let dims = p.dims();
        let whites = p.white_squares();
        let blacks = p.black_squares();
        let hand_b = black_hand(&p);
        for sq in p.empty_set().iter().map(|i| dims.square(i)) {
            let mut variants: Vec<(&SolveResult, Position)> = Vec::new();
            if whites.len() < wb as usize {
                let mut w = whites.clone();
                w.push(sq);
                let hand = Inventory::bounded(p.hand().whites - 1, hand_b);
                variants.push((res, Position::new(dims, p.duke(), &blacks, &w, p.to_move(), hand).unwrap()));
            }
            if let Some(big) = with_black {
                let mut b = blacks.clone();
                b.push(sq);
                let hand = Inventory::bounded(p.hand().whites, hand_b);
                variants.push((big, Position::new(dims, p.duke(), &b, &whites, p.to_move(), hand).unwrap()));
            }
            for (space, q) in variants {
                if space.query_label(&q).map_err(|e| e.to_string())? == Label::DWin {
                    return Err(format!("{} is a G win but {} is a D win", format_dpn(&p), format_dpn(&q)));
                }
                out.checked += 1;
            }
        }
    }
    Ok(out)
}

/// Same-space black additions that turn a G win into a D win.
pub fn same_space_black_losses(res: &SolveResult) -> u64 {
    let (_, bb) = res.budgets();
    let mut count = 0;
    for (idx, p) in valid_positions(res) {
        if res.label_at(idx) == Label::DWin || p.blacks().len() >= bb as usize {
            continue;
        }
        let dims = p.dims();
        for sq in p.empty_set().iter().map(|i| dims.square(i)) {
            let mut b = p.black_squares();
            b.push(sq);
            let hand = Inventory::bounded(p.hand().whites, black_hand(&p) - 1);
            let q = Position::new(dims, p.duke(), &b, &p.white_squares(), p.to_move(), hand).unwrap();
            if res.query_label(&q).unwrap() == Label::DWin {
                count += 1;
            }
        }
    }
    count
}

fn black_hand(p: &Position) -> u16 {
    p.black_budget().expect("bounded position") - p.blacks().len() as u16
}

/// A player who wins moving second also wins moving first.
pub fn check_first_mover_advantage(res: &SolveResult) -> Result<(), String> {
    let d_first = res.query_label(&res.start_position(Player::D)).map_err(|e| e.to_string())?.winner();
    let g_first = res.query_label(&res.start_position(Player::G)).map_err(|e| e.to_string())?.winner();
    if g_first == Some(Player::D) && d_first != Some(Player::D) {
        return Err(format!("{}: D wins moving second but not first", res.dims()));
    }
    if d_first == Some(Player::G) && g_first != Some(Player::G) {
        return Err(format!("{}: G wins moving second but not first", res.dims()));
    }
    Ok(())
}

/// Summary of the tactic–solver agreement check on one space.
#[derive(Debug, Default)]
pub struct TacticAgreement {
    pub flagged: u64,
    pub closure_nodes: u64,
    pub longest_line: usize,
}

/// Every flagged state is a D win, and the policy started from any flagged
/// state wins against every G reply without leaving the attractor, without
/// cycles, and within `2·max(m,n)` plies.
pub fn check_tactic_agreement(res: &SolveResult) -> Result<TacticAgreement, String> {
    let dims = res.dims();
    let ply_bound = 2 * dims.rows.max(dims.cols) as usize;
    let mut out = TacticAgreement::default();
    let mut roots = Vec::new();
    for (idx, p) in valid_positions(res) {
        if p.terminal_status() != TerminalStatus::Ongoing {
            continue;
        }
        let Some(r) = detect_imminent_win(&p).or_else(|| detect_corner_win(&p)) else { continue };
        out.flagged += 1;
        if res.label_at(idx) != Label::DWin {
            return Err(format!("{} flagged {r} but labeled {}", format_dpn(&p), res.label_at(idx)));
        }
        roots.push((p, Some(r)));
    }
    // Longest remaining line to an escape from each node, by DFS with
    // cycle detection.
    type Node = (Position, Option<TacticReport>);
    let mut depth: HashMap<Node, usize> = HashMap::new();
    const OPEN: usize = usize::MAX;
    for root in roots {
        let mut stack: Vec<(Node, Option<Vec<Node>>)> = vec![(root, None)];
        while let Some((node, children)) = stack.pop() {
            match children {
                Some(children) => {
                    let d = children.iter().map(|c| depth[c] + 1).max().unwrap_or(0);
                    depth.insert(node, d);
                }
                None => {
                    match depth.get(&node) {
                        Some(&OPEN) => return Err(format!("policy cycles through {}", format_dpn(&node.0))),
                        Some(_) => continue,
                        None => {}
                    }
                    let (p, ep) = node;
                    if p.terminal_status() != TerminalStatus::Ongoing {
                        if p.terminal_status() != TerminalStatus::DWin {
                            return Err(format!("policy line ends with the Duke immobilized in {}", format_dpn(&p)));
                        }
                        depth.insert(node, 0);
                        continue;
                    }
                    depth.insert(node, OPEN);
                    let children: Vec<Node> = match p.to_move() {
                        Player::G => p.legal_moves().map_err(|e| e.to_string())?.into_iter().map(|m| (p.apply(m).unwrap(), ep)).collect(),
                        Player::D => {
                            let d = duke_policy(&p, ep, None).map_err(|e| format!("{}: {e}", format_dpn(&p)))?;
                            if matches!(d.rationale, Rationale::Greedy) {
                                return Err(format!("{}: policy fell back to the greedy stage", format_dpn(&p)));
                            }
                            let q = p.apply(d.mv).map_err(|e| e.to_string())?;
                            if res.query_label(&q).map_err(|e| e.to_string())? != Label::DWin {
                                return Err(format!("{}: policy move {} leaves the attractor", format_dpn(&p), d.mv));
                            }
                            vec![(q, d.episode)]
                        }
                    };
                    stack.push((node, Some(children.clone())));
                    for c in children {
                        if depth.get(&c) == Some(&OPEN) {
                            return Err(format!("policy cycles through {}", format_dpn(&c.0)));
                        }
                        if !depth.contains_key(&c) {
                            stack.push((c, None));
                        }
                    }
                }
            }
        }
    }
    out.closure_nodes = depth.len() as u64;
    out.longest_line = depth.values().copied().max().unwrap_or(0);
    if out.longest_line > ply_bound {
        return Err(format!("longest policy line is {} plies, bound {ply_bound}", out.longest_line));
    }
    Ok(out)
}

/// Summary of a policy-only game tree explored from the start.
#[derive(Debug, Default)]
pub struct PolicyTree {
    pub nodes: u64,
}

/// The policy without solver help wins from the start against every G
/// reply: it never leaves the attractor, never loops, never needs the
/// greedy stage.
pub fn check_policy_from_start(res: &SolveResult, first: Player) -> Result<PolicyTree, String> {
    type Node = (Position, Option<TacticReport>);
    let start = res.start_position(first);
    // false = open, true = finished
    let mut state: HashMap<Node, bool> = HashMap::new();
    let mut stack: Vec<(Node, bool)> = vec![((start, None), false)];
    while let Some((node, exiting)) = stack.pop() {
        if exiting {
            state.insert(node, true);
            continue;
        }
        match state.get(&node) {
            Some(true) => continue,
            Some(false) => return Err(format!("policy cycles through {}", format_dpn(&node.0))),
            None => {}
        }
        state.insert(node, false);
        stack.push((node, true));
        let (p, ep) = node;
        match p.terminal_status() {
            TerminalStatus::DWin => continue,
            TerminalStatus::GWinImmobilized => return Err(format!("Duke immobilized in {}", format_dpn(&p))),
            TerminalStatus::Ongoing => {}
        }
        match p.to_move() {
            Player::G => {
                for m in p.legal_moves().map_err(|e| e.to_string())? {
                    stack.push(((p.apply(m).unwrap(), ep), false));
                }
            }
            Player::D => {
                let d = duke_policy(&p, ep, None).map_err(|e| format!("{}: {e}", format_dpn(&p)))?;
                if matches!(d.rationale, Rationale::Greedy) {
                    return Err(format!("{}: policy fell back to the greedy stage", format_dpn(&p)));
                }
                let q = p.apply(d.mv).map_err(|e| e.to_string())?;
                if res.query_label(&q).map_err(|e| e.to_string())? != Label::DWin {
                    return Err(format!("{}: policy move {} leaves the attractor", format_dpn(&p), d.mv));
                }
                stack.push(((q, d.episode), false));
            }
        }
    }
    Ok(PolicyTree { nodes: state.len() as u64 })
}

/// Edges along which the Duke has an Imminent Win, by direct count of
/// the two band lines.
pub fn imminent_edges(p: &Position) -> Vec<dukego::Dir> {
    let dims = p.dims();
    let duke = p.duke();
    if p.terminal_status() != TerminalStatus::Ongoing {
        return Vec::new();
    }
    dukego::Dir::ALL
        .into_iter()
        .filter(|&e| {
            let Some(next) = dims.step(duke, e) else { return false };
            if !dims.is_edge(next) || dims.is_edge(duke) {
                return false;
            }
            let stones = p.stones();
            let count = dims
                .squares()
                .filter(|&sq| {
                    let same_line = if e.is_vertical() { sq.row == duke.row || sq.row == next.row } else { sq.col == duke.col || sq.col == next.col };
                    same_line && stones.contains(dims.index(sq))
                })
                .count();
            count <= 1
        })
        .collect()
}

/// A position with stones scattered by `cells`: 1 black, 2 white, other
/// values empty. The Duke's square is skipped.
pub fn scatter(dims: Dims, duke: usize, cells: &[u8], to_move: Player, hand: Inventory) -> Position {
    let mut blacks = Vec::new();
    let mut whites = Vec::new();
    for (i, &k) in cells.iter().enumerate().take(dims.area()) {
        if i == duke {
            continue;
        }
        match k {
            1 => blacks.push(dims.square(i)),
            2 => whites.push(dims.square(i)),
            _ => {}
        }
    }
    Position::new(dims, dims.square(duke), &blacks, &whites, to_move, hand).expect("scattered stones are disjoint")
}

/// Corner Win orientations (edge, side) by direct inspection: the Duke two
/// lines from `edge` and three from `side`, nothing on the two outer lines
/// of either edge, and the square toward `side` empty.
pub fn corner_orientations(p: &Position) -> Vec<(dukego::Dir, dukego::Dir)> {
    use dukego::Dir;
    let dims = p.dims();
    let duke = p.duke();
    if p.terminal_status() != TerminalStatus::Ongoing {
        return Vec::new();
    }
    let near = |sq: Square, d: Dir| -> bool {
        match d {
            Dir::N => sq.row <= 2,
            Dir::S => sq.row + 1 >= dims.rows,
            Dir::W => sq.col <= 2,
            Dir::E => sq.col + 1 >= dims.cols,
        }
    };
    let lines_from = |d: Dir| -> u8 {
        match d {
            Dir::N => duke.row - 1,
            Dir::S => dims.rows - duke.row,
            Dir::W => duke.col - 1,
            Dir::E => dims.cols - duke.col,
        }
    };
    let extent = |d: Dir| if d.is_vertical() { dims.rows } else { dims.cols };
    let mut out = Vec::new();
    for e1 in Dir::ALL {
        for e2 in Dir::ALL {
            if e1.is_vertical() == e2.is_vertical() || extent(e1) < 5 || extent(e2) < 5 {
                continue;
            }
            if lines_from(e1) != 2 || lines_from(e2) != 3 {
                continue;
            }
            let shaded_clear = p.stones().iter().map(|i| dims.square(i)).all(|sq| !near(sq, e1) && !near(sq, e2));
            let beside = dims.step(duke, e2).unwrap();
            if shaded_clear && p.is_empty(beside) {
                out.push((e1, e2));
            }
        }
    }
    out
}
