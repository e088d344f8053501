//! Acceptance runner: one PASS/FAIL line per criterion. Run with
//! `cargo test --release -p dukego --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use dukego::solver::{
    fairness_of, read_cache, solve_bounded, solve_monotone, write_cache, Fairness, Label, SolveOptions, SolveResult,
};
use dukego::strategy::{builtin_reduction, extract_g_strategy, verify_g_strategy, Verdict};
use dukego::{Dims, Inventory, Player};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn dims(m: u8, n: u8) -> Dims {
    Dims::new(m, n).unwrap()
}

fn solve(d: Dims, w: u8, b: u8) -> Result<SolveResult, String> {
    solve_bounded(d, w, b, &SolveOptions::default()).map_err(|e| format!("{d} w{w} b{b}: {e}"))
}

/// The published outcome table for 5 ≤ m ≤ n ≤ 9.
fn expected_entry(m: u8, n: u8) -> Fairness {
    match (m, n) {
        (..=5, _) => Fairness::D,
        (6, 6..=8) | (7, 7) => Fairness::D,
        (6, _) | (7, 8) | (8, 8) => Fairness::Fair,
        _ => Fairness::G,
    }
}

fn fairness_table() -> Outcome {
    let mut cells = 0;
    let mut wrong = Vec::new();
    for m in 5..=9u8 {
        for n in m..=9u8 {
            let res = solve(dims(m, n), 3, 0)?;
            let got = fairness_of(&res).map_err(|e| e.to_string())?;
            if got != expected_entry(m, n) {
                wrong.push(format!("{m}x{n} got {got}, expected {}", expected_entry(m, n)));
            }
            cells += 1;
        }
    }
    if wrong.is_empty() {
        Ok(format!("{cells}/{cells} cells match (3 whites, no blacks, standing in for the unlimited-black game)"))
    } else {
        Err(wrong.join("; "))
    }
}

fn both_first_movers_lose_for_g(res: &SolveResult) -> Result<(), String> {
    for first in [Player::D, Player::G] {
        let label = res.query_label(&res.start_position(first)).map_err(|e| e.to_string())?;
        if label != Label::DWin {
            return Err(format!("{} w{} b{} {first} first: {label}", res.dims(), res.budgets().0, res.budgets().1));
        }
    }
    Ok(())
}

fn inventory_claims() -> Outcome {
    let mut spaces = 0;
    for n in [8u8, 9] {
        both_first_movers_lose_for_g(&solve(dims(n, n), 2, 0)?)?;
        spaces += 1;
    }
    for m in 3..=7u8 {
        for n in m..=7u8 {
            both_first_movers_lose_for_g(&solve(dims(m, n), 2, 1)?)?;
            spaces += 1;
        }
    }
    Ok(format!("D wins both ways in {spaces} spaces (w2b0 on 8x8, 9x9; w2b1 on every board up to 7x7)"))
}

fn two_white_two_black() -> Outcome {
    let mut out = Vec::new();
    for (m, n) in [(6u8, 6u8), (6, 7)] {
        let got = fairness_of(&solve(dims(m, n), 2, 2)?).map_err(|e| e.to_string())?;
        if got != expected_entry(m, n) {
            return Err(format!("{m}x{n}: w2b2 gives {got}, table says {}", expected_entry(m, n)));
        }
        out.push(format!("{m}x{n}={got}"));
    }
    Ok(format!("{} match the table (7x8 and 6x9 are in the ignored extended tests)", out.join(", ")))
}

fn monotone_solver() -> Outcome {
    let mut boards = Vec::new();
    for m in 1..=4u8 {
        for n in m..=7u8 {
            boards.push(dims(m, n));
        }
    }
    boards.extend([dims(5, 5), dims(5, 6), dims(5, 7)]);
    let mut nodes = 0;
    for &d in &boards {
        let proof = solve_monotone(d, Player::G, None).map_err(|e| e.to_string())?;
        if proof.winner != Some(Player::D) {
            return Err(format!("{d}: winner {:?}", proof.winner));
        }
        nodes += proof.nodes;
    }
    let six = solve_monotone(dims(6, 6), Player::G, None).map_err(|e| e.to_string())?;
    if six.winner != Some(Player::D) {
        return Err(format!("6x6 (extended): winner {:?}", six.winner));
    }
    Ok(format!(
        "D wins with G first on {} boards ({nodes} nodes), and on 6x6 ({} nodes); G wins in the unlimited-black game on 7x9 and up are not searched, the 3-white table stands in for them",
        boards.len(),
        six.nodes
    ))
}

fn tactic_agreement() -> Outcome {
    let mut flagged = 0;
    let mut closure = 0;
    let mut boards = 0;
    let mut longest = 0;
    for m in 3..=6u8 {
        for n in m..=9u8 {
            let res = solve(dims(m, n), 3, 0)?;
            let a = common::check_tactic_agreement(&res).map_err(|e| format!("{m}x{n}: {e}"))?;
            flagged += a.flagged;
            closure += a.closure_nodes;
            longest = longest.max(a.longest_line);
            boards += 1;
        }
    }
    Ok(format!(
        "{flagged} flagged states on {boards} boards are all D wins; policy closure of {closure} nodes stays in the attractor, acyclic, longest line {longest} plies"
    ))
}

fn strategies() -> Outcome {
    let mut maps = Vec::new();
    let mut notes = Vec::new();
    for d in [dims(7, 8), dims(6, 9)] {
        let res = solve(d, 3, 0)?;
        let map = extract_g_strategy(&res, &res.start_position(Player::G)).map_err(|e| format!("{d}: {e}"))?;
        match verify_g_strategy(&map, Inventory::bounded(3, 0), Player::G) {
            Verdict::GWin { states } => notes.push(format!("{d} map of {} entries verified over {states} states", map.len())),
            Verdict::DWinExposure(c) => return Err(format!("{d}: {c}")),
        }
        maps.push(map);
    }
    let red = dukego::strategy::ReductionStrategy::new(dims(7, 9), maps);
    for first in [Player::D, Player::G] {
        match verify_g_strategy(&red, Inventory::bounded(3, 0), first) {
            Verdict::GWin { states } => notes.push(format!("7x9 reduction, {first} first, {states} states")),
            Verdict::DWinExposure(c) => return Err(format!("7x9 reduction {first} first: {c}")),
        }
    }
    // The shipped reduction uses the shipped maps; it must agree.
    if !verify_g_strategy(&builtin_reduction(dims(7, 9)), Inventory::bounded(3, 0), Player::D).is_g_win() {
        return Err("shipped maps fail the 7x9 reduction".into());
    }
    Ok(notes.join("; "))
}

fn solver_properties() -> Outcome {
    let mut notes = Vec::new();
    let five = solve(dims(5, 5), 3, 0)?;
    let six = solve(dims(6, 6), 2, 1)?;
    for res in [&five, &six] {
        let tag = format!("{} w{} b{}", res.dims(), res.budgets().0, res.budgets().1);
        let n = common::check_local_consistency(res).map_err(|e| format!("{tag} local consistency: {e}"))?;
        let k = common::check_distance_decrease(res).map_err(|e| format!("{tag} distance: {e}"))?;
        common::check_symmetry_invariance(res).map_err(|e| format!("{tag} symmetry: {e}"))?;
        common::check_first_mover_advantage(res)?;
        let m = common::check_monotonicity(res, None).map_err(|e| format!("{tag} monotonicity: {e}"))?;
        notes.push(format!("{tag}: {n} states consistent, {k} distance steps, {} G-win states to extend", m.g_states));
    }
    // Spaces where G does win, so monotonicity has something to check.
    let small = solve(dims(4, 4), 2, 2)?;
    let bigger = solve(dims(4, 4), 2, 3)?;
    common::check_local_consistency(&small).map_err(|e| format!("4x4 w2b2 local consistency: {e}"))?;
    let m = common::check_monotonicity(&small, Some(&bigger)).map_err(|e| format!("4x4 w2b2 monotonicity: {e}"))?;
    let wide = solve(dims(7, 8), 3, 0)?;
    let w = common::check_monotonicity(&wide, None).map_err(|e| format!("7x8 w3 monotonicity: {e}"))?;
    common::check_symmetry_invariance(&wide).map_err(|e| format!("7x8 symmetry: {e}"))?;
    notes.push(format!("monotonicity on {} + {} G-win states of 4x4 w2b2 and 7x8 w3", m.g_states, w.g_states));

    let threaded = solve_bounded(dims(6, 6), 2, 1, &SolveOptions { threads: 4, ..Default::default() }).map_err(|e| e.to_string())?;
    if threaded != six {
        return Err("4-thread solve differs from the 1-thread solve".into());
    }
    let mut bytes = Vec::new();
    write_cache(&wide, &mut bytes).map_err(|e| e.to_string())?;
    let back = read_cache(bytes.as_slice()).map_err(|e| e.to_string())?;
    let mut again = Vec::new();
    write_cache(&back, &mut again).map_err(|e| e.to_string())?;
    if back != wide || again != bytes {
        return Err("cache round trip is not bit-exact".into());
    }
    notes.push(format!("threads 1 and 4 agree; cache round trip of {} bytes bit-exact", bytes.len()));
    Ok(notes.join("; "))
}

fn cli_only() -> Outcome {
    // This runner links only the core library; the workspace holds no
    // browser component to build.
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let members = std::fs::read_dir(root.join("crates")).map_err(|e| e.to_string())?;
    for entry in members {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.join("package.json").exists() {
            return Err(format!("{} needs a JavaScript toolchain", path.display()));
        }
    }
    Ok("every check above ran from the Rust workspace alone".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("fairness table reproduction", fairness_table),
        ("inventory claims", inventory_claims),
        ("2W+2B equivalence on small boards", two_white_two_black),
        ("monotone solver", monotone_solver),
        ("tactic-solver agreement", tactic_agreement),
        ("strategy extraction and verification", strategies),
        ("solver property suites", solver_properties),
        ("no secondary component needed", cli_only),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
