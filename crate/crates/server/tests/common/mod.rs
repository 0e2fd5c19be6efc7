#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request as HttpRequest, StatusCode};
use axum::Router;
use boardkit_core::{Coord, Event, PlayerKind, RunningGame};
use boardkit_server::http::router;
use boardkit_server::{handle_request, GameStore, Request, Response};
use http_body_util::BodyExt;
use serde_json::Value;
use tempfile::TempDir;
use tower::ServiceExt;

pub const TOKEN: &str = "s3cret";

pub fn store() -> (TempDir, Arc<GameStore>) {
    let dir = tempfile::tempdir().unwrap();
    let store = GameStore::open(dir.path().join("data"), TOKEN).unwrap();
    (dir, Arc::new(store))
}

/// Creates a game of `def` with `players` joined and started; returns its id.
pub fn started_game(store: &GameStore, def: &str, players: usize, seed: u64) -> String {
    let reply = handle_request(store, Request::CreateGame { definition: def.into(), seed: Some(seed) }).unwrap();
    let Response::GameCreated { id, .. } = reply.response else { panic!("{reply:?}") };
    for i in 1..=players {
        handle_request(store, Request::Join { game: id.clone(), name: format!("P{i}"), kind: PlayerKind::Human })
            .unwrap();
    }
    handle_request(store, Request::SubmitEvent { game: id.clone(), player: Some(1), event: Event::game_start() })
        .unwrap();
    id
}

pub fn click(game: &str, player: u32, r: usize, c: usize) -> Request {
    Request::SubmitEvent { game: game.into(), player: Some(player), event: Event::tile_click(player, Coord::new(r, c), None) }
}

pub fn state(store: &GameStore, game: &str) -> RunningGame {
    match handle_request(store, Request::GetState { game: game.into() }).unwrap().response {
        Response::State { game } => game,
        other => panic!("{other:?}"),
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>, token: Option<&str>) -> (StatusCode, Value) {
    let (status, text) = call_raw(app, method, uri, body, token).await;
    let value = if text.is_empty() { Value::Null } else { serde_json::from_str(&text).unwrap() };
    (status, value)
}

pub async fn call_raw(app: &Router, method: Method, uri: &str, body: Option<Value>, token: Option<&str>) -> (StatusCode, String) {
    let mut req = HttpRequest::builder().method(method).uri(uri);
    if let Some(t) = token {
        req = req.header("authorization", format!("Bearer {t}"));
    }
    let body = match body {
        Some(Value::String(s)) => Body::from(s),
        Some(v) => Body::from(v.to_string()),
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

pub fn app(store: &Arc<GameStore>) -> Router {
    router(store.clone())
}
