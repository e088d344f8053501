use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use dukego::solver::SolveError;
use dukego::RuleError;

use crate::api::ErrorBody;
use crate::engine::EngineError;

/// An error answered as `{code, message}` with a matching HTTP status.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{code}: {message}")]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into() }
    }

    pub fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("no game with id {id:?}"))
    }

    pub fn unsolved() -> Self {
        Self::new(StatusCode::CONFLICT, "unsolved", "unsolved configuration: no solved space is available for this game")
    }

    pub fn bad_config(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "bad_config", message)
    }
}

impl From<RuleError> for ApiError {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::WrongTurn(_) => Self::new(StatusCode::CONFLICT, "wrong_turn", e.to_string()),
            RuleError::GameOver => Self::new(StatusCode::CONFLICT, "game_over", e.to_string()),
            RuleError::BadDims(..) => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "bad_dims", e.to_string()),
            _ => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "illegal_move", e.to_string()),
        }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Unsupported(m) => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "unsupported", m),
            EngineError::Failed(m) => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "engine_failed", m),
        }
    }
}

impl From<SolveError> for ApiError {
    fn from(e: SolveError) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "solver", e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        Self::new(e.status(), "bad_request", e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { code: self.code.to_string(), message: self.message })).into_response()
    }
}
