use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use dukego::solver::{solve_bounded, Label, SolveOptions};
use dukego::{format_dpn, parse_dpn, Move, Player, Position};
use dukego_service::{router, AppState, ServiceConfig};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

struct Client {
    state: Arc<AppState>,
}

impl Client {
    fn new(solve_cap: u64) -> Self {
        Client { state: AppState::new(ServiceConfig { solve_cap, ..Default::default() }) }
    }

    async fn call(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
        let req = match body {
            Some(b) => req.body(Body::from(b.to_string())).unwrap(),
            None => req.body(Body::empty()).unwrap(),
        };
        let resp = router(self.state.clone()).oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
        (status, value)
    }

    async fn create(&self, config: Value) -> Value {
        let (status, body) = self.call(Method::POST, "/games", Some(config)).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        body
    }

    async fn play(&self, id: &str, mv: Value) -> (StatusCode, Value) {
        self.call(Method::POST, &format!("/games/{id}/moves"), Some(mv)).await
    }
}

fn id(game: &Value) -> String {
    game["id"].as_str().unwrap().to_string()
}

fn position(game: &Value) -> Position {
    parse_dpn(game["position"]["dpn"].as_str().unwrap()).unwrap()
}

/// Replays the history from the start and compares every recorded DPN.
fn assert_history_replays(game: &Value, start: Position) {
    let mut p = start;
    for entry in game["history"].as_array().unwrap() {
        let mv: Move = entry["notation"].as_str().unwrap().parse().unwrap();
        p = p.apply(mv).unwrap();
        assert_eq!(format_dpn(&p), entry["dpn"].as_str().unwrap());
    }
    assert_eq!(format_dpn(&p), game["position"]["dpn"].as_str().unwrap());
}

#[tokio::test]
async fn health_answers() {
    let c = Client::new(0);
    let (status, body) = c.call(Method::GET, "/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
}

#[tokio::test]
async fn engine_g_places_the_first_stone() {
    let c = Client::new(8_000_000);
    let game = c.create(json!({"dims": "8x8", "w": 3, "b": 0, "first": "G", "human": "D"})).await;
    assert_eq!(game["engineMoves"].as_array().unwrap().len(), 1);
    assert_eq!(game["position"]["whites"].as_array().unwrap().len(), 1);
    assert_eq!(game["position"]["toMove"], "D");
    assert_eq!(game["position"]["hands"]["whites"], 2);
    assert_eq!(game["solved"], true);
    // The engine stone keeps 8x8 out of the Duke's attractor, as the solver says it can.
    let res = solve_bounded("8x8".parse().unwrap(), 3, 0, &SolveOptions::default()).unwrap();
    assert_ne!(res.query_label(&position(&game)).unwrap(), Label::DWin);
}

#[tokio::test]
async fn engine_duke_opens_south_in_the_standard_game() {
    let c = Client::new(0);
    let game = c.create(json!({"dims": "6x9", "w": 0, "b": "inf", "first": "D", "human": "G"})).await;
    assert_eq!(game["engineMoves"], json!([{"type": "step", "direction": "S"}]));
    assert_eq!(game["position"]["duke"], json!({"row": 5, "col": 5}));
    assert_eq!(game["position"]["hands"]["blacks"], "inf");
    assert_eq!(game["solved"], false);
    let (status, hint) = c.call(Method::GET, &format!("/games/{}/hint", id(&game)), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hint["side"], "G");
}

#[tokio::test]
async fn bad_configurations_are_refused() {
    let c = Client::new(0);
    for config in [
        json!({"dims": "0x5"}),
        json!({"dims": "5x5", "w": 2, "b": "inf"}),
        json!({"dims": "9x9", "w": 2, "b": 2, "engine": "solver"}),
        json!({"dims": "8x8", "w": 3, "engine": "table"}),
    ] {
        let (status, body) = c.call(Method::POST, "/games", Some(config.clone())).await;
        assert!(status.is_client_error(), "{config}: {status}");
        assert!(body["code"].is_string() && body["message"].is_string(), "{body}");
    }
    let (status, body) = c.call(Method::POST, "/games", Some(json!({"dims": "9x9", "engine": "table"}))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
}

#[tokio::test]
async fn rule_errors_name_the_rule() {
    let c = Client::new(0);
    let game = c.create(json!({"dims": "7x7", "w": 3, "first": "G", "human": "G"})).await;
    let g = id(&game);
    let (status, body) = c.play(&g, json!({"type": "placeWhite", "row": 4, "col": 4})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["message"].as_str().unwrap().contains("square 4,4 is occupied"), "{body}");
    let (status, body) = c.play(&g, json!({"type": "step", "direction": "N"})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "wrong_turn");
    let (status, _) = c.play("nope", json!({"type": "pass"})).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, body) = c.play(&g, json!({"type": "teleport"})).await;
    assert!(status.is_client_error(), "{body}");
}

#[tokio::test]
async fn stepping_onto_the_edge_ends_the_game() {
    let c = Client::new(0);
    let game = c.create(json!({"dims": "3x3", "w": 3, "first": "D", "human": "D"})).await;
    let (status, body) = c.play(&id(&game), json!({"type": "step", "direction": "N"})).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["position"]["status"], "dWin");
    assert_eq!(body["engineMoves"], json!([]));
    let (status, body) = c.play(&id(&game), json!({"type": "step", "direction": "S"})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "game_over");
}

#[tokio::test]
async fn corner_hint_names_the_tactic() {
    let c = Client::new(0);
    let game = c.create(json!({"position": "7x9 D5,6 B[] W[] D w3 b0", "human": "D"})).await;
    assert_eq!(game["config"]["dims"], "7x9");
    let (status, hint) = c.call(Method::GET, &format!("/games/{}/hint", id(&game)), None).await;
    assert_eq!(status, StatusCode::OK, "{hint}");
    assert_eq!(hint["rationale"], "CornerWin(SE)");
    assert_eq!(hint["tactic"]["kind"], "CornerWin");
    assert_eq!(hint["tactic"]["orientation"], "SE");
    assert_eq!(hint["side"], "D");
}

#[tokio::test]
async fn evaluation_of_a_small_board_is_all_duke_wins() {
    let c = Client::new(8_000_000);
    let game = c.create(json!({"dims": "5x5", "w": 3, "first": "G", "human": "G"})).await;
    let (status, eval) = c.call(Method::GET, &format!("/games/{}/eval", id(&game)), None).await;
    assert_eq!(status, StatusCode::OK, "{eval}");
    let moves = eval["moves"].as_array().unwrap();
    // 24 placements and the pass.
    assert_eq!(moves.len(), 25);
    assert!(moves.iter().all(|m| m["label"] == "dWin" && m["distance"].is_u64()), "{eval}");
    assert_eq!(eval["position"]["label"], "dWin");
}

#[tokio::test]
async fn evaluation_on_a_fair_board_shows_a_holding_move() {
    let c = Client::new(8_000_000);
    let game = c.create(json!({"dims": "7x8", "w": 3, "first": "G", "human": "G"})).await;
    let (status, eval) = c.call(Method::GET, &format!("/games/{}/eval", id(&game)), None).await;
    assert_eq!(status, StatusCode::OK, "{eval}");
    assert!(eval["moves"].as_array().unwrap().iter().any(|m| m["label"] != "dWin"), "{eval}");
    assert_eq!(eval["position"]["winner"], "G");

    // The G hint in a solved space keeps the game out of the attractor.
    let (_, hint) = c.call(Method::GET, &format!("/games/{}/hint", id(&game)), None).await;
    assert!(hint["rationale"].as_str().unwrap().starts_with("Solver(G-win"), "{hint}");
    assert_ne!(hint["evaluation"]["label"], "dWin");
}

#[tokio::test]
async fn evaluation_needs_a_solved_space() {
    let c = Client::new(8_000_000);
    let game = c.create(json!({"dims": "9x9", "w": 2, "b": 2, "first": "G", "human": "D"})).await;
    assert_eq!(game["solved"], false);
    let (status, body) = c.call(Method::GET, &format!("/games/{}/eval", id(&game)), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "unsolved");
    assert!(body["message"].as_str().unwrap().contains("unsolved configuration"));
}

#[tokio::test]
async fn engine_replies_never_worsen_the_engine_side_and_history_replays() {
    let c = Client::new(8_000_000);
    let res = solve_bounded("6x7".parse().unwrap(), 2, 1, &SolveOptions::default()).unwrap();
    // Human G plays the first legal move every turn; the engine Duke answers.
    let game = c.create(json!({"dims": "6x7", "w": 2, "b": 1, "first": "G", "human": "G"})).await;
    let g = id(&game);
    let start = res.start_position(Player::G);
    let mut last = game;
    for _ in 0..40 {
        let p = position(&last);
        if last["position"]["status"] != "ongoing" {
            break;
        }
        let mv = p.legal_moves().unwrap()[0];
        let (status, body) = c.play(&g, serde_json::to_value(dukego_service::api::MoveView::from(mv)).unwrap()).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        let after_human = p.apply(mv).unwrap();
        if res.query_label(&after_human).unwrap() == Label::DWin {
            assert_eq!(res.query_label(&position(&body)).unwrap(), Label::DWin, "engine gave up a won game");
        }
        assert_history_replays(&body, start);
        last = body;
    }
    assert_eq!(last["position"]["status"], "dWin");

    // Undo takes back the human move and the reply after it.
    let before = last["history"].as_array().unwrap().len();
    let (status, undone) = c.call(Method::POST, &format!("/games/{g}/undo"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(undone["history"].as_array().unwrap().len() < before);
    assert_eq!(undone["position"]["toMove"], "G");
    assert_history_replays(&undone, start);
}

#[tokio::test]
async fn undo_without_moves_is_refused() {
    let c = Client::new(0);
    let game = c.create(json!({"dims": "8x8", "first": "G", "human": "D", "engine": "tactic"})).await;
    let (status, body) = c.call(Method::POST, &format!("/games/{}/undo", id(&game)), None).await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");
    let (status, got) = c.call(Method::GET, &format!("/games/{}", id(&game)), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(got["position"], game["position"]);
}

#[tokio::test]
async fn cors_preflight_is_answered() {
    let c = Client::new(0);
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/games")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = router(c.state.clone()).oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key("access-control-allow-origin"));
}

#[tokio::test]
async fn concurrent_sessions_do_not_interfere() {
    let c = Arc::new(Client::new(0));
    let mut handles = Vec::new();
    for i in 0..8u8 {
        let c = c.clone();
        handles.push(tokio::spawn(async move {
            let game = c.create(json!({"dims": "7x7", "w": 3, "first": "G", "human": "G", "engine": "tactic"})).await;
            let (status, body) = c.play(&id(&game), json!({"type": "placeWhite", "row": 1 + i % 3, "col": 1})).await;
            assert_eq!(status, StatusCode::OK, "{body}");
            assert_eq!(body["history"].as_array().unwrap().len(), 2);
        }));
    }
    for h in handles {
        h.await.unwrap();
    }
}
