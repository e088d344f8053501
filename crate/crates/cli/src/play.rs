//! Text-mode game loop against the engine.

use std::io::{BufRead, Write};

use anyhow::{bail, Result};
use dukego::{format_dpn, BlackHand, Dims, Inventory, Move, Player, Position, TerminalStatus, Variant};
use dukego_service::engine::{check_engine_support, g_table_for, Engine, EngineMode, EngineToken};

use crate::commands::obtain;
use crate::{Budget, SolveFlags, Status};

/// The board as rows of `D` (Duke), `#` (black), `o` (white) and `.`.
pub fn render(p: &Position) -> String {
    let dims = p.dims();
    let mut out = String::new();
    out.push_str("    ");
    for c in 1..=dims.cols {
        out.push_str(&format!("{:>3}", c));
    }
    out.push('\n');
    for r in 1..=dims.rows {
        out.push_str(&format!("{r:>3} "));
        for c in 1..=dims.cols {
            let sq = dukego::Square::new(r, c);
            let ch = if sq == p.duke() {
                'D'
            } else if p.black_squares().contains(&sq) {
                '#'
            } else if p.white_squares().contains(&sq) {
                'o'
            } else {
                '.'
            };
            out.push_str(&format!("{ch:>3}"));
        }
        out.push('\n');
    }
    out
}

const HELP: &str = "moves: N S E W (Duke), B<r>,<c> (black), W<r>,<c> (white), R<r>,<c>-<r>,<c> (relocate), pass\n\
                    commands: hint, moves, quit";

pub fn play(dims: Dims, budget: &Budget, first: Player, human: Player, mode: EngineMode, flags: &SolveFlags) -> Result<Status> {
    if budget.black == BlackHand::Unlimited && budget.white > 0 {
        bail!("the unlimited-black game has no white stones; pass --white 0");
    }
    let hand = Inventory { whites: budget.white, blacks: budget.black };
    let mut p = Position::start(dims, hand, first)?;
    let solver = match (p.variant(), budget.black) {
        (Variant::Bounded, BlackHand::Count(b)) => match u8::try_from(b) {
            Ok(b) => obtain(dims, budget.white, b, flags)?,
            Err(_) => None,
        },
        _ => None,
    };
    let table = g_table_for(dims, hand, first);
    check_engine_support(mode, human.other(), p.variant(), solver.is_some(), table.is_some())?;
    let engine = Engine { mode, solver: solver.as_ref(), table: table.as_ref() };
    let mut token = EngineToken::default();

    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut stdout = std::io::stdout();
    println!("{HELP}");
    loop {
        println!("\n{}{}", render(&p), format_dpn(&p));
        match p.terminal_status() {
            TerminalStatus::DWin => {
                println!("Duke escapes!");
                break;
            }
            TerminalStatus::GWinImmobilized => {
                println!("Duke immobilized. G wins.");
                break;
            }
            TerminalStatus::Ongoing => {}
        }
        if p.to_move() != human {
            let m = engine.choose(&p, &token)?;
            println!("engine plays {} [{}]", m.mv, m.rationale);
            p = p.apply(m.mv)?;
            token = m.token;
            continue;
        }
        print!("{human} to move> ");
        stdout.flush()?;
        let Some(line) = lines.next() else { break };
        let line = line?;
        let input = line.trim();
        match input {
            "" => continue,
            "quit" | "q" => break,
            "help" | "?" => println!("{HELP}"),
            "moves" => {
                let moves: Vec<String> = p.legal_moves()?.iter().map(Move::to_string).collect();
                println!("{}", moves.join(" "));
            }
            "hint" => {
                let hinter = Engine { mode: EngineMode::Auto, ..engine };
                let m = hinter.choose(&p, &token)?;
                println!("hint: {} [{}]", m.mv, m.rationale);
            }
            text => match text.parse::<Move>().and_then(|mv| p.apply(mv)) {
                Ok(next) => p = next,
                Err(e) => println!("{e}"),
            },
        }
    }
    Ok(Status::Success)
}
