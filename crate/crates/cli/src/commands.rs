use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use dukego::solver::{
    fairness_of, load_cache, save_cache, solve_bounded, solve_monotone, Evaluation, Fairness, SolveError, SolveOptions,
    SolveResult,
};
use dukego::strategy::{
    builtin_map, builtin_reduction, extract_g_strategy, parse_diagrams, verify_g_strategy, StrategyMap, TableStrategy, Verdict,
};
use dukego::tactics::audit_tactics;
use dukego::{BlackHand, Dims, Inventory, Player};
use log::{info, warn};
use serde_json::json;

use crate::{Budget, Command, Format, Size, SolveFlags, Status};

pub fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Table { budget, min, max, format, solve } => table(&budget, min, max, format, &solve),
        Command::Solve { board, budget, out, format, solve } => solve_cmd(board, &budget, out.as_deref(), format, &solve),
        Command::Verify { tactics, board, strategy, reduction, first, budget, format, solve } => {
            if tactics {
                verify_tactics(board.expect("clap requires --board"), &budget, format, &solve)
            } else if let Some(source) = strategy {
                verify_strategy(&source, first, &budget, format)
            } else if let Some(dims) = reduction {
                verify_reduction(dims, first, format)
            } else {
                bail!("verify needs --tactics, --strategy or --reduction")
            }
        }
        Command::Extract { board, budget, first, out, solve } => extract(board, &budget, first, &out, &solve),
        Command::Serve { port, host, solve_cap, cors_origin, cache_dir, threads } => {
            let config = dukego_service::ServiceConfig { cache_dir, solve_cap, cors_origin, threads };
            let addr = std::net::SocketAddr::new(host, port);
            eprintln!("serving on http://{addr}");
            let rt = tokio::runtime::Runtime::new().context("starting the async runtime")?;
            rt.block_on(dukego_service::serve(addr, config)).with_context(|| format!("serving on {addr}"))?;
            Ok(Status::Success)
        }
        Command::Play { board, budget, first, human, engine, solve_cap, cache_dir } => {
            let flags = SolveFlags { threads: 1, max_states: solve_cap, cache_dir };
            crate::play::play(board, &budget, first, human, engine, &flags)
        }
        Command::Experiment { white, max_black, min, max, format, threads, max_states, cache_dir } => {
            experiment(white, max_black, min, max, format, &SolveFlags { threads, max_states, cache_dir })
        }
    }
}

/// Bounded black budget from the flags; the solver cannot take `inf`.
fn bounded_black(budget: &Budget) -> Result<u8> {
    match budget.black {
        BlackHand::Count(n) => u8::try_from(n).context("black budget above 255"),
        BlackHand::Unlimited => bail!("this command needs a bounded black budget, not inf"),
    }
}

fn cache_file(dir: &Path, dims: Dims, w: u8, b: u8) -> PathBuf {
    dir.join(dukego_service::CacheStore::file_name(dims, w, b))
}

/// Solves a space, going through the cache directory when one is given.
/// `Ok(None)` means the space is above the state cap.
pub fn obtain(dims: Dims, w: u8, b: u8, flags: &SolveFlags) -> Result<Option<SolveResult>> {
    if let Some(dir) = &flags.cache_dir {
        let path = cache_file(dir, dims, w, b);
        if path.exists() {
            match load_cache(&path) {
                Ok(res) if res.dims() == dims && res.budgets() == (w, b) => {
                    info!("loaded {}", path.display());
                    return Ok(Some(res));
                }
                Ok(_) => warn!("{} holds another space; solving afresh", path.display()),
                Err(e) => warn!("ignoring {}: {e}", path.display()),
            }
        }
    }
    let opts = SolveOptions { max_states: flags.max_states, threads: flags.threads };
    let res = match solve_bounded(dims, w, b, &opts) {
        Ok(res) => res,
        Err(SolveError::TooLarge { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    if let Some(dir) = &flags.cache_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = cache_file(dir, dims, w, b);
        save_cache(&res, &path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Some(res))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

/// Sizes m×n with m ≤ n between `min` and `max`, smaller side first.
fn sizes(min: Size, max: Size) -> Vec<Size> {
    let (lo_m, lo_n) = (min.0.min(min.1), min.0.max(min.1));
    let (hi_m, hi_n) = (max.0.min(max.1), max.0.max(max.1));
    let mut out = Vec::new();
    for m in lo_m..=hi_m {
        for n in m.max(lo_n)..=hi_n {
            out.push((m, n));
        }
    }
    out
}

/// Whether this inventory is one the equivalence claim ties to the
/// standard unlimited-black game.
fn stands_in_for_standard(w: u8, b: u8) -> bool {
    w >= 3 || (w == 2 && b >= 2)
}

fn table(budget: &Budget, min: Size, max: Size, format: Format, flags: &SolveFlags) -> Result<Status> {
    let (w, b) = (budget.white, bounded_black(budget)?);
    let cells: Vec<(Size, Option<Fairness>)> = sizes(min, max)
        .into_iter()
        .map(|(m, n)| {
            // Boards the indexer cannot hold count as unsolved.
            let Ok(d) = Dims::new(m, n) else { return Ok(((m, n), None)) };
            let t = Instant::now();
            let f = obtain(d, w, b, flags)?.map(|res| fairness_of(&res)).transpose()?;
            info!("{d}: {} in {:.1}s", f.map_or("unsolved".to_string(), |f| f.to_string()), t.elapsed().as_secs_f64());
            Ok(((m, n), f))
        })
        .collect::<Result<_>>()?;
    let unsolved = cells.iter().filter(|c| c.1.is_none()).count();
    let proxy = stands_in_for_standard(w, b);
    match format {
        Format::Json => print_json(&json!({
            "white": w,
            "black": b,
            "standsInForStandardGame": proxy,
            "cells": cells.iter().map(|((m, n), f)| json!({
                "m": m,
                "n": n,
                "winner": f.map_or("unsolved".to_string(), |f| f.to_string()),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            println!("# G holds {w} white and {b} black stones");
            if proxy {
                println!("# this bounded inventory stands in for the standard game with unlimited black stones");
            }
            println!("# D: Duke wins either way   G: G wins either way   *: first mover wins   ?: unsolved");
            let ms: Vec<u8> = {
                let mut v: Vec<u8> = cells.iter().map(|c| c.0 .0).collect();
                v.dedup();
                v
            };
            let ns: Vec<u8> = {
                let mut v: Vec<u8> = cells.iter().map(|c| c.0 .1).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let mut header = String::from("m\\n ");
            for n in &ns {
                header.push_str(&format!("{n:>3}"));
            }
            println!("{header}");
            for m in ms {
                let mut line = format!("{m:>3} ");
                for &n in &ns {
                    let cell = cells.iter().find(|c| c.0 == (m, n));
                    let mark = match cell {
                        Some((_, Some(f))) => f.to_string(),
                        Some((_, None)) => "?".into(),
                        None => String::new(),
                    };
                    line.push_str(&format!("{mark:>3}"));
                }
                println!("{}", line.trim_end());
            }
        }
    }
    if unsolved > 0 {
        eprintln!("{unsolved} cells exceed the cap of {} states", flags.max_states);
        Ok(Status::Partial)
    } else {
        Ok(Status::Success)
    }
}

fn winner_word(p: Option<Player>) -> &'static str {
    match p {
        Some(Player::D) => "D-win",
        Some(Player::G) => "G-win",
        None => "unknown",
    }
}

fn eval_json(e: Evaluation) -> serde_json::Value {
    json!({ "label": e.label.to_string(), "winner": winner_word(e.label.winner()), "distance": e.distance })
}

fn solve_cmd(dims: Dims, budget: &Budget, out: Option<&Path>, format: Format, flags: &SolveFlags) -> Result<Status> {
    if budget.black == BlackHand::Unlimited {
        if budget.white != 0 {
            bail!("the unlimited-black game has no white stones; pass --white 0");
        }
        if out.is_some() {
            bail!("--out applies to bounded spaces only");
        }
        let d = solve_monotone(dims, Player::D, None)?;
        let g = solve_monotone(dims, Player::G, None)?;
        match format {
            Format::Text => {
                println!("D first: {}; G first: {}", winner_word(d.winner), winner_word(g.winner));
                println!("{dims} standard game, {} + {} search nodes", d.nodes, g.nodes);
            }
            Format::Json => print_json(&json!({
                "dims": dims.to_string(), "white": 0, "black": "inf",
                "dFirst": { "winner": winner_word(d.winner), "nodes": d.nodes },
                "gFirst": { "winner": winner_word(g.winner), "nodes": g.nodes },
            })),
        }
        return Ok(if d.winner.is_some() && g.winner.is_some() { Status::Success } else { Status::Partial });
    }
    let (w, b) = (budget.white, bounded_black(budget)?);
    let t = Instant::now();
    let Some(res) = obtain(dims, w, b, flags)? else {
        eprintln!("{dims} w{w} b{b} exceeds the cap of {} states", flags.max_states);
        return Ok(Status::Partial);
    };
    let secs = t.elapsed().as_secs_f64();
    if let Some(path) = out {
        save_cache(&res, path).with_context(|| format!("writing {}", path.display()))?;
    }
    let d = res.evaluate(&res.start_position(Player::D))?;
    let g = res.evaluate(&res.start_position(Player::G))?;
    match format {
        Format::Text => {
            println!("D first: {}; G first: {}", winner_word(d.label.winner()), winner_word(g.label.winner()));
            println!(
                "{dims} w{w} b{b}: {} states in {secs:.1}s; D first {}{}, G first {}{}",
                res.total_states(),
                d.label,
                d.distance.map_or(String::new(), |k| format!(" in {k}")),
                g.label,
                g.distance.map_or(String::new(), |k| format!(" in {k}")),
            );
        }
        Format::Json => print_json(&json!({
            "dims": dims.to_string(), "white": w, "black": b,
            "states": res.total_states(),
            "fairness": fairness_of(&res)?.to_string(),
            "dFirst": eval_json(d),
            "gFirst": eval_json(g),
        })),
    }
    Ok(Status::Success)
}

fn verify_tactics(dims: Dims, budget: &Budget, format: Format, flags: &SolveFlags) -> Result<Status> {
    let (w, b) = (budget.white, bounded_black(budget)?);
    let Some(res) = obtain(dims, w, b, flags)? else {
        eprintln!("{dims} w{w} b{b} exceeds the cap of {} states", flags.max_states);
        return Ok(Status::Partial);
    };
    let (status, detail) = match audit_tactics(&res) {
        Ok(a) => (
            Status::Success,
            format!("{} tactic positions are all D wins; {} policy moves stay D wins", a.flagged, a.policy_moves),
        ),
        Err(e) => (Status::VerificationFailed, e.to_string()),
    };
    report(format, "tactics", &format!("{dims} w{w} b{b}"), status, &detail);
    Ok(status)
}

fn report(format: Format, kind: &str, subject: &str, status: Status, detail: &str) {
    let ok = status == Status::Success;
    match format {
        Format::Text => println!("{} {kind} {subject}: {detail}", if ok { "PASS" } else { "FAIL" }),
        Format::Json => print_json(&json!({ "check": kind, "subject": subject, "pass": ok, "detail": detail })),
    }
}

fn verdict_status(v: &Verdict) -> Status {
    if v.is_g_win() {
        Status::Success
    } else {
        Status::VerificationFailed
    }
}

fn verify_strategy(source: &str, first: Option<Player>, budget: &Budget, format: Format) -> Result<Status> {
    let text = match source.strip_prefix("builtin:") {
        Some(name) => builtin_map(name)?.to_text(),
        None => std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?,
    };
    let verdict = if text.starts_with("# strategy") {
        let map = StrategyMap::from_text(&text)?;
        verify_g_strategy(&map, map.inventory, first.unwrap_or(map.first))
    } else {
        let set = parse_diagrams(&text)?;
        let inventory = Inventory { whites: budget.white, blacks: budget.black };
        verify_g_strategy(&TableStrategy { set, rotation: false }, inventory, first.unwrap_or(Player::G))
    };
    let status = verdict_status(&verdict);
    report(format, "strategy", source, status, &verdict.to_string());
    Ok(status)
}

fn verify_reduction(dims: Dims, first: Option<Player>, format: Format) -> Result<Status> {
    let red = builtin_reduction(dims);
    let firsts = first.map_or(vec![Player::D, Player::G], |f| vec![f]);
    let mut status = Status::Success;
    for f in firsts {
        let verdict = verify_g_strategy(&red, Inventory::bounded(3, 0), f);
        let s = verdict_status(&verdict);
        if s != Status::Success {
            status = s;
        }
        report(format, "reduction", &format!("{dims} w3 b0 {f} first"), s, &verdict.to_string());
    }
    Ok(status)
}

fn extract(dims: Dims, budget: &Budget, first: Player, out: &Path, flags: &SolveFlags) -> Result<Status> {
    let (w, b) = (budget.white, bounded_black(budget)?);
    let Some(res) = obtain(dims, w, b, flags)? else {
        eprintln!("{dims} w{w} b{b} exceeds the cap of {} states", flags.max_states);
        return Ok(Status::Partial);
    };
    let map = extract_g_strategy(&res, &res.start_position(first))?;
    std::fs::write(out, map.to_text()).with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {} positions to {}", map.len(), out.display());
    Ok(Status::Success)
}

/// Start values of one (board, budget) space in the sweep.
struct SweepCell {
    dims: Dims,
    black: u8,
    g_first: Evaluation,
    d_first: Evaluation,
}

fn short(e: Evaluation) -> String {
    match (e.label.winner(), e.distance) {
        (Some(Player::D), Some(k)) => format!("D in {k}"),
        (w, _) => winner_word(w).to_string(),
    }
}

/// Sweeps black budgets per board until G wins with the Duke moving first,
/// the stones no longer fit, or the space exceeds the cap.
fn experiment(white: u8, max_black: u8, min: Size, max: Size, format: Format, flags: &SolveFlags) -> Result<Status> {
    let mut cells = Vec::new();
    let mut summary = Vec::new();
    let mut partial = false;
    for (m, n) in sizes(min, max) {
        let Ok(dims) = Dims::new(m, n) else {
            partial = true;
            continue;
        };
        let (mut need_g, mut need_d, mut reached) = (None, None, None);
        for b in 0..=max_black {
            if white as usize + b as usize >= dims.area() {
                break;
            }
            let Some(res) = obtain(dims, white, b, flags)? else {
                partial = true;
                break;
            };
            let g_first = res.evaluate(&res.start_position(Player::G))?;
            let d_first = res.evaluate(&res.start_position(Player::D))?;
            if need_g.is_none() && g_first.label.winner() == Some(Player::G) {
                need_g = Some(b);
            }
            if d_first.label.winner() == Some(Player::G) {
                need_d = Some(b);
            }
            reached = Some(b);
            cells.push(SweepCell { dims, black: b, g_first, d_first });
            if need_d.is_some() {
                break;
            }
        }
        summary.push((dims, need_g, need_d, reached));
    }
    let need = |v: Option<u8>, upto: Option<u8>| match (v, upto) {
        (Some(b), _) => b.to_string(),
        (None, Some(u)) => format!(">{u}"),
        (None, None) => "?".into(),
    };
    match format {
        Format::Text => {
            println!("# G holds {white} white stones; black budgets swept from 0 to {max_black}");
            println!("{:<6} {:>5} {:>10} {:>10}", "board", "black", "G first", "D first");
            for c in &cells {
                println!("{:<6} {:>5} {:>10} {:>10}", c.dims.to_string(), c.black, short(c.g_first), short(c.d_first));
            }
            println!();
            println!("# fewest blacks for a G win (>k: none up to k within the cap)");
            println!("{:<6} {:>8} {:>8}", "board", "G first", "D first");
            for (d, g, dd, r) in &summary {
                println!("{:<6} {:>8} {:>8}", d.to_string(), need(*g, *r), need(*dd, *r));
            }
        }
        Format::Json => print_json(&json!({
            "white": white,
            "maxBlack": max_black,
            "spaces": cells.iter().map(|c| json!({
                "dims": c.dims.to_string(),
                "black": c.black,
                "gFirst": eval_json(c.g_first),
                "dFirst": eval_json(c.d_first),
            })).collect::<Vec<_>>(),
            "boards": summary.iter().map(|(d, g, dd, r)| json!({
                "dims": d.to_string(),
                "gFirstNeeds": g,
                "dFirstNeeds": dd,
                "solvedUpTo": r,
            })).collect::<Vec<_>>(),
        })),
    }
    Ok(if partial { Status::Partial } else { Status::Success })
}
