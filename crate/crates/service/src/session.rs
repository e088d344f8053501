use dukego::solver::SolveResult;
use dukego::{format_dpn, parse_dpn, BlackHand, Dims, Inventory, Move, Position, TerminalStatus, Variant};

use crate::api::{tactic_json, BlackBudget, EvalView, GameConfig, GameView, HintView, HistoryEntry, MoveEvaluation, MoveView};
use crate::engine::{check_engine_support, g_table_for, Engine, EngineMode, EngineMove, EngineToken, GTable};
use crate::{ApiError, CacheStore};

struct Ply {
    entry: HistoryEntry,
    /// Position and engine memory before the move.
    before: Position,
    token: EngineToken,
}

/// One human against the engine.
pub(crate) struct Session {
    pub id: String,
    pub config: GameConfig,
    pub start: Position,
    position: Position,
    token: EngineToken,
    table: Option<GTable>,
    /// Whether the start inventory's space can be solved or loaded.
    pub solvable: bool,
    plies: Vec<Ply>,
}

impl Session {
    pub fn new(mut config: GameConfig, caches: &CacheStore) -> Result<Self, ApiError> {
        let start = match &config.position {
            Some(dpn) => {
                let p = parse_dpn(dpn).map_err(|e| ApiError::bad_config(e.to_string()))?;
                config.dims = p.dims().to_string();
                config.white = p.white_budget();
                config.black = match p.black_budget() {
                    Some(b) => BlackBudget::Count(b),
                    None => BlackHand::Unlimited.into(),
                };
                config.first = p.to_move();
                p
            }
            None => {
                let dims: Dims = config.dims.parse()?;
                let blacks: BlackHand = config.black.into();
                if blacks == BlackHand::Unlimited && config.white > 0 {
                    return Err(ApiError::bad_config("the unlimited-black game has no white stones; set white to 0"));
                }
                Position::start(dims, Inventory { whites: config.white, blacks }, config.first)?
            }
        };
        let (dims, hand) = (start.dims(), start.hand());
        let solvable = match (start.variant(), start.black_budget()) {
            (Variant::Bounded, Some(b)) => u8::try_from(b).is_ok_and(|b| caches.can_solve(dims, config.white, b)),
            _ => false,
        };
        // Shipped tables start from the opening.
        let table = if config.position.is_none() { g_table_for(dims, hand, config.first) } else { None };
        check_engine_support(config.engine, config.human.other(), start.variant(), solvable, table.is_some())?;
        Ok(Session { id: String::new(), config, start, position: start, token: EngineToken::default(), table, solvable, plies: Vec::new() })
    }

    fn engine<'a>(&'a self, mode: EngineMode, solver: Option<&'a SolveResult>) -> Engine<'a> {
        Engine { mode, solver, table: self.table.as_ref() }
    }

    fn push(&mut self, mv: Move, engine: bool, token: EngineToken) -> Result<(), ApiError> {
        let before = self.position;
        self.position = before.apply(mv)?;
        let entry = HistoryEntry {
            mv: mv.into(),
            notation: mv.to_string(),
            by: before.to_move(),
            engine,
            dpn: format_dpn(&self.position),
        };
        self.plies.push(Ply { entry, before, token: std::mem::replace(&mut self.token, token) });
        Ok(())
    }

    /// Plays engine moves until the human is to move or the game ends.
    pub fn play_engine(&mut self, solver: Option<&SolveResult>) -> Result<Vec<MoveView>, ApiError> {
        let mut played = Vec::new();
        while self.position.terminal_status() == TerminalStatus::Ongoing && self.position.to_move() != self.config.human {
            let EngineMove { mv, token, .. } = self.engine(self.config.engine, solver).choose(&self.position, &self.token)?;
            self.push(mv, true, token)?;
            played.push(mv.into());
        }
        Ok(played)
    }

    pub fn human_move(&mut self, mv: Move) -> Result<(), ApiError> {
        if self.position.terminal_status() != TerminalStatus::Ongoing {
            return Err(dukego::RuleError::GameOver.into());
        }
        if self.position.to_move() != self.config.human || mv.player() != self.config.human {
            return Err(dukego::RuleError::WrongTurn(self.position.to_move().letter()).into());
        }
        let token = self.token.clone();
        self.push(mv, false, token)
    }

    /// Takes back the last human move and any engine replies after it.
    pub fn undo(&mut self) -> Result<(), ApiError> {
        let Some(last_human) = self.plies.iter().rposition(|p| !p.entry.engine) else {
            return Err(ApiError::new(axum::http::StatusCode::CONFLICT, "nothing_to_undo", "no human move to take back"));
        };
        let ply = self.plies.drain(last_human..).next().expect("non-empty drain");
        self.position = ply.before;
        self.token = ply.token;
        Ok(())
    }

    fn ensure_ongoing(&self) -> Result<(), ApiError> {
        match self.position.terminal_status() {
            TerminalStatus::Ongoing => Ok(()),
            _ => Err(dukego::RuleError::GameOver.into()),
        }
    }

    pub fn hint(&self, solver: Option<&SolveResult>) -> Result<HintView, ApiError> {
        self.ensure_ongoing()?;
        let m = self.engine(EngineMode::Auto, solver).choose(&self.position, &self.token)?;
        Ok(HintView {
            mv: m.mv.into(),
            notation: m.mv.to_string(),
            side: self.position.to_move(),
            rationale: m.rationale,
            tactic: m.tactic.as_ref().map(tactic_json),
            evaluation: m.evaluation.map(Into::into),
        })
    }

    pub fn evaluate(&self, solver: &SolveResult) -> Result<EvalView, ApiError> {
        let position = solver.evaluate(&self.position)?.into();
        let moves = match self.position.terminal_status() {
            TerminalStatus::Ongoing => solver
                .successors(&self.position)?
                .into_iter()
                .map(|(mv, _, ev)| MoveEvaluation { mv: mv.into(), notation: mv.to_string(), evaluation: ev.into() })
                .collect(),
            _ => Vec::new(),
        };
        Ok(EvalView { position, moves })
    }

    pub fn view(&self, engine_moves: Vec<MoveView>, solved: bool) -> GameView {
        GameView {
            id: self.id.clone(),
            config: self.config.clone(),
            position: (&self.position).into(),
            history: self.plies.iter().map(|p| p.entry.clone()).collect(),
            engine_moves,
            solved,
        }
    }
}
