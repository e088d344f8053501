//! HTTP facade over the Dukego engine: game sessions with engine replies,
//! hints and solver evaluations, as JSON.

pub mod api;
pub mod engine;
mod error;
mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, Method};
use axum::routing::{get, post};
use axum::{Json, Router};
use dukego::solver::{load_cache, save_cache, solve_bounded, SolveOptions, SolveResult, StateIndexer};
use dukego::Dims;
use log::{info, warn};
use tokio::sync::{Mutex, OnceCell, RwLock};
use tower_http::cors::{AllowOrigin, CorsLayer};

use api::{EvalView, GameConfig, GameView, HintView, MoveView};
pub use error::ApiError;
use session::Session;

/// Service settings, normally read from the environment.
#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Where solved spaces are read from and written to.
    pub cache_dir: Option<PathBuf>,
    /// Spaces up to this many indexed states are solved on first use.
    pub solve_cap: u64,
    /// Allowed browser origin; `None` allows any.
    pub cors_origin: Option<String>,
    pub threads: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { cache_dir: None, solve_cap: 8_000_000, cors_origin: None, threads: 1 }
    }
}

impl ServiceConfig {
    /// Reads `DUKEGO_CACHE_DIR`, `DUKEGO_SOLVE_CAP` and `DUKEGO_CORS_ORIGIN`.
    pub fn from_env() -> Self {
        let mut c = ServiceConfig::default();
        if let Ok(dir) = std::env::var("DUKEGO_CACHE_DIR") {
            c.cache_dir = Some(dir.into());
        }
        if let Some(cap) = std::env::var("DUKEGO_SOLVE_CAP").ok().and_then(|v| v.parse().ok()) {
            c.solve_cap = cap;
        }
        c.cors_origin = std::env::var("DUKEGO_CORS_ORIGIN").ok();
        c
    }
}

type SpaceKey = (Dims, u8, u8);
type SpaceCell = Arc<OnceCell<Option<Arc<SolveResult>>>>;

/// Solved spaces, loaded or solved once and shared read-only.
pub struct CacheStore {
    config: ServiceConfig,
    spaces: std::sync::Mutex<HashMap<SpaceKey, SpaceCell>>,
}

impl CacheStore {
    pub fn new(config: ServiceConfig) -> Self {
        CacheStore { config, spaces: std::sync::Mutex::new(HashMap::new()) }
    }

    pub fn file_name(dims: Dims, w: u8, b: u8) -> String {
        format!("{dims}w{w}b{b}.dgc")
    }

    fn cached_path(&self, key: SpaceKey) -> Option<PathBuf> {
        let dir = self.config.cache_dir.as_ref()?;
        let path = dir.join(Self::file_name(key.0, key.1, key.2));
        path.exists().then_some(path)
    }

    /// Whether `get` can produce a result for this space.
    pub fn can_solve(&self, dims: Dims, w: u8, b: u8) -> bool {
        self.cached_path((dims, w, b)).is_some() || StateIndexer::estimate(dims, w, b) <= self.config.solve_cap as u128
    }

    pub async fn get(&self, dims: Dims, w: u8, b: u8) -> Option<Arc<SolveResult>> {
        let key = (dims, w, b);
        let cell = self.spaces.lock().expect("cache map lock").entry(key).or_default().clone();
        cell.get_or_init(|| async {
            let config = self.config.clone();
            let cached = self.cached_path(key);
            tokio::task::spawn_blocking(move || load_or_solve(&config, key, cached)).await.ok().flatten()
        })
        .await
        .clone()
    }
}

fn load_or_solve(config: &ServiceConfig, key: SpaceKey, cached: Option<PathBuf>) -> Option<Arc<SolveResult>> {
    let (dims, w, b) = key;
    if let Some(path) = cached {
        match load_cache(&path) {
            Ok(res) if res.dims() == dims && res.budgets() == (w, b) => return Some(Arc::new(res)),
            Ok(_) => warn!("{} holds a different space; ignoring it", path.display()),
            Err(e) => warn!("cannot load {}: {e}", path.display()),
        }
    }
    let opts = SolveOptions { max_states: config.solve_cap, threads: config.threads };
    let res = match solve_bounded(dims, w, b, &opts) {
        Ok(res) => res,
        Err(e) => {
            info!("not solving {dims} w{w} b{b}: {e}");
            return None;
        }
    };
    if let Some(dir) = &config.cache_dir {
        let path = dir.join(CacheStore::file_name(dims, w, b));
        if let Err(e) = std::fs::create_dir_all(dir).map_err(|e| e.to_string()).and_then(|_| save_cache(&res, &path).map_err(|e| e.to_string())) {
            warn!("cannot write {}: {e}", path.display());
        }
    }
    Some(Arc::new(res))
}

/// Shared state behind the router.
pub struct AppState {
    pub caches: CacheStore,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Arc<Self> {
        Arc::new(AppState { caches: CacheStore::new(config), sessions: RwLock::new(HashMap::new()) })
    }

    async fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions.read().await.get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    async fn solver_for(&self, s: &Session) -> Option<Arc<SolveResult>> {
        if !s.solvable {
            return None;
        }
        let p = s.start;
        let b = u8::try_from(p.black_budget()?).ok()?;
        self.caches.get(p.dims(), p.white_budget(), b).await
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let origin = match &state.caches.config.cors_origin {
        Some(o) => match HeaderValue::from_str(o) {
            Ok(v) => AllowOrigin::exact(v),
            Err(_) => AllowOrigin::any(),
        },
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([Method::GET, Method::POST, Method::OPTIONS])
        .allow_headers([axum::http::header::CONTENT_TYPE]);
    Router::new()
        .route("/health", get(health))
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(submit_move))
        .route("/games/{id}/undo", post(undo))
        .route("/games/{id}/hint", get(hint))
        .route("/games/{id}/eval", get(evaluate))
        .layer(cors)
        .with_state(state)
}

/// Binds and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(config))).await
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

async fn create_game(State(state): State<Arc<AppState>>, config: Result<Json<GameConfig>, JsonRejection>) -> Result<Json<GameView>, ApiError> {
    let Json(config) = config?;
    let mut session = Session::new(config, &state.caches)?;
    let solver = state.solver_for(&session).await;
    let engine_moves = session.play_engine(solver.as_deref())?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    session.id = id.clone();
    let view = session.view(engine_moves, solver.is_some());
    state.sessions.write().await.insert(id, Arc::new(Mutex::new(session)));
    Ok(Json(view))
}

async fn get_game(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<GameView>, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    Ok(Json(s.view(Vec::new(), s.solvable)))
}

async fn submit_move(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    mv: Result<Json<MoveView>, JsonRejection>,
) -> Result<Json<GameView>, ApiError> {
    let Json(mv) = mv?;
    let s = state.session(&id).await?;
    let mut s = s.lock().await;
    s.human_move(mv.into())?;
    let solver = state.solver_for(&s).await;
    let engine_moves = s.play_engine(solver.as_deref())?;
    Ok(Json(s.view(engine_moves, solver.is_some())))
}

async fn undo(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<GameView>, ApiError> {
    let s = state.session(&id).await?;
    let mut s = s.lock().await;
    s.undo()?;
    let solver = state.solver_for(&s).await;
    Ok(Json(s.view(Vec::new(), solver.is_some())))
}

async fn hint(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<HintView>, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    let solver = state.solver_for(&s).await;
    Ok(Json(s.hint(solver.as_deref())?))
}

async fn evaluate(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<EvalView>, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    let solver = state.solver_for(&s).await.ok_or_else(ApiError::unsolved)?;
    Ok(Json(s.evaluate(&solver)?))
}
