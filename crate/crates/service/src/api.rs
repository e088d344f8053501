//! JSON shapes of requests and responses.

use dukego::solver::{Evaluation, Label};
use dukego::tactics::TacticReport;
use dukego::{format_dpn, BlackHand, Dims, Dir, Move, Player, Position, Square, TerminalStatus};
use serde::{Deserialize, Serialize};

use crate::engine::EngineMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareView {
    pub row: u8,
    pub col: u8,
}

impl From<Square> for SquareView {
    fn from(s: Square) -> Self {
        SquareView { row: s.row, col: s.col }
    }
}

impl From<SquareView> for Square {
    fn from(s: SquareView) -> Self {
        Square::new(s.row, s.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum MoveView {
    Step { direction: Dir },
    PlaceBlack { row: u8, col: u8 },
    PlaceWhite { row: u8, col: u8 },
    Relocate { from: SquareView, to: SquareView },
    Pass,
}

impl From<Move> for MoveView {
    fn from(m: Move) -> Self {
        match m {
            Move::Step(direction) => MoveView::Step { direction },
            Move::PlaceBlack(s) => MoveView::PlaceBlack { row: s.row, col: s.col },
            Move::PlaceWhite(s) => MoveView::PlaceWhite { row: s.row, col: s.col },
            Move::Relocate { from, to } => MoveView::Relocate { from: from.into(), to: to.into() },
            Move::Pass => MoveView::Pass,
        }
    }
}

impl From<MoveView> for Move {
    fn from(m: MoveView) -> Self {
        match m {
            MoveView::Step { direction } => Move::Step(direction),
            MoveView::PlaceBlack { row, col } => Move::PlaceBlack(Square::new(row, col)),
            MoveView::PlaceWhite { row, col } => Move::PlaceWhite(Square::new(row, col)),
            MoveView::Relocate { from, to } => Move::Relocate { from: from.into(), to: to.into() },
            MoveView::Pass => Move::Pass,
        }
    }
}

/// A black budget: a count or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlackBudget {
    Count(u16),
    Text(InfText),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfText {
    #[serde(rename = "inf")]
    Inf,
}

impl From<BlackHand> for BlackBudget {
    fn from(b: BlackHand) -> Self {
        match b {
            BlackHand::Unlimited => BlackBudget::Text(InfText::Inf),
            BlackHand::Count(c) => BlackBudget::Count(c),
        }
    }
}

impl From<BlackBudget> for BlackHand {
    fn from(b: BlackBudget) -> Self {
        match b {
            BlackBudget::Count(c) => BlackHand::Count(c),
            BlackBudget::Text(InfText::Inf) => BlackHand::Unlimited,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsView {
    pub rows: u8,
    pub cols: u8,
}

impl From<Dims> for DimsView {
    fn from(d: Dims) -> Self {
        DimsView { rows: d.rows, cols: d.cols }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandsView {
    pub whites: u8,
    pub blacks: BlackBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StatusView {
    Ongoing,
    DWin,
    GWinImmobilized,
}

impl From<TerminalStatus> for StatusView {
    fn from(s: TerminalStatus) -> Self {
        match s {
            TerminalStatus::Ongoing => StatusView::Ongoing,
            TerminalStatus::DWin => StatusView::DWin,
            TerminalStatus::GWinImmobilized => StatusView::GWinImmobilized,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PositionView {
    pub dpn: String,
    pub dims: DimsView,
    pub duke: SquareView,
    pub blacks: Vec<SquareView>,
    pub whites: Vec<SquareView>,
    pub to_move: Player,
    pub hands: HandsView,
    pub status: StatusView,
}

impl From<&Position> for PositionView {
    fn from(p: &Position) -> Self {
        PositionView {
            dpn: format_dpn(p),
            dims: p.dims().into(),
            duke: p.duke().into(),
            blacks: p.black_squares().into_iter().map(Into::into).collect(),
            whites: p.white_squares().into_iter().map(Into::into).collect(),
            to_move: p.to_move(),
            hands: HandsView { whites: p.hand().whites, blacks: p.hand().blacks.into() },
            status: p.terminal_status().into(),
        }
    }
}

fn default_white() -> u8 {
    3
}

fn default_black() -> BlackBudget {
    BlackBudget::Count(0)
}

fn default_first() -> Player {
    Player::G
}

fn default_human() -> Player {
    Player::D
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GameConfig {
    /// Board size as `MxN`; may be omitted when `position` is given.
    #[serde(default)]
    pub dims: String,
    #[serde(default = "default_white", alias = "w")]
    pub white: u8,
    #[serde(default = "default_black", alias = "b")]
    pub black: BlackBudget,
    #[serde(default = "default_first")]
    pub first: Player,
    #[serde(default = "default_human")]
    pub human: Player,
    #[serde(default)]
    pub engine: EngineMode,
    /// Start from this DPN position instead of the opening. Its board and
    /// stone totals replace `dims`, `white` and `black`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HistoryEntry {
    #[serde(rename = "move")]
    pub mv: MoveView,
    pub notation: String,
    pub by: Player,
    pub engine: bool,
    pub dpn: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GameView {
    pub id: String,
    pub config: GameConfig,
    pub position: PositionView,
    pub history: Vec<HistoryEntry>,
    /// Engine moves played in answer to the request, in order.
    pub engine_moves: Vec<MoveView>,
    /// Whether `GET /eval` can answer for this game.
    pub solved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvaluationView {
    pub label: String,
    pub winner: Option<Player>,
    pub distance: Option<u16>,
}

impl From<Evaluation> for EvaluationView {
    fn from(e: Evaluation) -> Self {
        EvaluationView { label: label_code(e.label).to_string(), winner: e.label.winner(), distance: e.distance }
    }
}

fn label_code(l: Label) -> &'static str {
    match l {
        Label::DWin => "dWin",
        Label::GWinImmobilized => "gWinImmobilized",
        Label::Draw => "draw",
        Label::Invalid => "invalid",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HintView {
    #[serde(rename = "move")]
    pub mv: MoveView,
    pub notation: String,
    pub side: Player,
    pub rationale: String,
    pub tactic: Option<serde_json::Value>,
    pub evaluation: Option<EvaluationView>,
}

pub fn tactic_json(r: &TacticReport) -> serde_json::Value {
    serde_json::to_value(r).unwrap_or(serde_json::Value::Null)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MoveEvaluation {
    #[serde(rename = "move")]
    pub mv: MoveView,
    pub notation: String,
    #[serde(flatten)]
    pub evaluation: EvaluationView,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalView {
    pub position: EvaluationView,
    pub moves: Vec<MoveEvaluation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}
