//! `dukego`: solve boards, reproduce the fairness table, verify tactics and
//! strategies, and run the game service.

mod commands;
mod play;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dukego::{BlackHand, Dims, Player};

#[derive(Parser, Debug)]
#[command(name = "dukego", version, about = "Solver and toolkit for the Duke-versus-G board game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Budget {
    /// White (wandering) stones for G.
    #[arg(short = 'w', long = "white", default_value_t = 3)]
    pub white: u8,
    /// Black stones for G: a count or `inf`.
    #[arg(short = 'b', long = "black", default_value = "0", value_parser = parse_black)]
    pub black: BlackHand,
}

#[derive(Args, Debug, Clone)]
pub struct SolveFlags {
    /// Worker threads for the solver.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Refuse spaces with more indexed states than this.
    #[arg(long, default_value_t = 400_000_000)]
    pub max_states: u64,
    /// Read solved spaces from, and write them to, this directory.
    #[arg(long, env = "DUKEGO_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the outcome table (D, G or * for fair) over a range of boards.
    Table {
        #[command(flatten)]
        budget: Budget,
        /// Smallest board, as MxN.
        #[arg(long, default_value = "5x5", value_parser = parse_size)]
        min: Size,
        /// Largest board, as MxN. Cells beyond the solver's reach are marked unsolved.
        #[arg(long, default_value = "9x9", value_parser = parse_size)]
        max: Size,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Solve one board and print the start labels for both first movers.
    Solve {
        board: Dims,
        #[command(flatten)]
        budget: Budget,
        /// Write the solved space to this cache file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Check tactics against the solver, or a G strategy by exhaustive replay.
    Verify {
        /// Check every detected tactic against the solved space of --board.
        #[arg(long, requires = "board")]
        tactics: bool,
        #[arg(long)]
        board: Option<Dims>,
        /// A strategy map or diagram file, or `builtin:<name>`.
        #[arg(long, conflicts_with = "tactics")]
        strategy: Option<String>,
        /// Check the shipped board-reduction strategy on this board.
        #[arg(long, conflicts_with_all = ["tactics", "strategy"])]
        reduction: Option<Dims>,
        /// First mover for strategy checks; defaults to the map's own.
        #[arg(long, value_parser = parse_player)]
        first: Option<Player>,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Extract a G strategy map from a solved space.
    Extract {
        board: Dims,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, default_value = "G", value_parser = parse_player)]
        first: Player,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Run the HTTP game service.
    Serve {
        #[arg(long, env = "DUKEGO_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Spaces up to this many states are solved on first use.
        #[arg(long, env = "DUKEGO_SOLVE_CAP", default_value_t = 8_000_000)]
        solve_cap: u64,
        /// Allowed browser origin (any when unset).
        #[arg(long, env = "DUKEGO_CORS_ORIGIN")]
        cors_origin: Option<String>,
        #[arg(long, env = "DUKEGO_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Play a game against the engine in the terminal.
    Play {
        board: Dims,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, default_value = "G", value_parser = parse_player)]
        first: Player,
        /// The side you play.
        #[arg(long, default_value = "D", value_parser = parse_player)]
        human: Player,
        /// Engine: tactic, table, solver or auto.
        #[arg(long, default_value = "auto")]
        engine: dukego_service::engine::EngineMode,
        /// Solve the space first when it has at most this many states.
        #[arg(long, default_value_t = 8_000_000)]
        solve_cap: u64,
        #[arg(long, env = "DUKEGO_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
    },
    /// Sweep black-stone budgets on small boards and report how many G needs.
    Experiment {
        /// White stones held alongside the blacks.
        #[arg(short = 'w', long = "white", default_value_t = 1)]
        white: u8,
        /// Most black stones to try.
        #[arg(long, default_value_t = 7)]
        max_black: u8,
        #[arg(long, default_value = "3x3", value_parser = parse_size)]
        min: Size,
        #[arg(long, default_value = "5x5", value_parser = parse_size)]
        max: Size,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Skip spaces with more indexed states than this.
        #[arg(long, default_value_t = 50_000_000)]
        max_states: u64,
        #[arg(long, env = "DUKEGO_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
    },
}

/// A board size that may lie beyond what the solver can index.
pub type Size = (u8, u8);

fn parse_size(s: &str) -> Result<Size, String> {
    let bad = || format!("expected <rows>x<cols>, got {s:?}");
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let size = (r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?);
    if size.0 == 0 || size.1 == 0 {
        return Err(bad());
    }
    Ok(size)
}

fn parse_black(s: &str) -> Result<BlackHand, String> {
    s.parse::<BlackHand>().map_err(|e| e.to_string())
}

fn parse_player(s: &str) -> Result<Player, String> {
    match s {
        "D" | "d" => Ok(Player::D),
        "G" | "g" => Ok(Player::G),
        _ => Err(format!("expected D or G, got {s:?}")),
    }
}

/// How a command ended, mapped onto the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Some cells or spaces could not be solved.
    Partial,
    VerificationFailed,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Partial) => ExitCode::from(2),
        Ok(Status::VerificationFailed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
