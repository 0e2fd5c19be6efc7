//! HTTP/JSON binding of [`handle_request`].
//!
//! | method | path | body |
//! |---|---|---|
//! | GET | /definitions | |
//! | GET | /definitions/{name} | |
//! | PUT | /definitions/{name} | definition document, `Authorization: Bearer <token>` |
//! | POST | /games | `{"definition": name, "seed"?: n}` |
//! | POST | /games/{id}/join | `{"name": text, "kind"?: "human" \| "robot"}` |
//! | POST | /games/{id}/events | `{"player"?: id, "event": Event}` |
//! | GET | /games/{id} | |
//! | GET | /games/{id}/commands?since=N | |
//! | POST | /games/{id}/save | |
//! | POST | /games/{id}/load | |
//!
//! Errors are `{"code", "reason"}` with 404, 409 (rejections), 401, 422
//! (definition diagnostics, also listed under `"diagnostics"`), 400 or 500.

use std::future::Future;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, RawQuery, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response as HttpResponse};
use axum::routing::{get, post};
use axum::Router;
use boardkit_core::{serialize_definition, Event, PlayerId, PlayerKind, RunningGame};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::net::TcpListener;

use crate::protocol::{handle_request, Request, Response};
use crate::store::GameStore;
use crate::ServerError;

pub fn router(store: Arc<GameStore>) -> Router {
    Router::new()
        .route("/definitions", get(list_definitions))
        .route("/definitions/{name}", get(get_definition).put(put_definition))
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_state))
        .route("/games/{id}/join", post(join))
        .route("/games/{id}/events", post(submit))
        .route("/games/{id}/commands", get(get_commands))
        .route("/games/{id}/save", post(save))
        .route("/games/{id}/load", post(load))
        .with_state(store)
}

/// Serves on `listener` until `shutdown` resolves.
pub async fn serve_on(
    listener: TcpListener,
    store: Arc<GameStore>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(store)).with_graceful_shutdown(shutdown).await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateGameBody {
    definition: String,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JoinBody {
    name: String,
    #[serde(default = "human")]
    kind: PlayerKind,
}

fn human() -> PlayerKind {
    PlayerKind::Human
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EventBody {
    #[serde(default)]
    player: Option<PlayerId>,
    event: Event,
}

type St = State<Arc<GameStore>>;

async fn list_definitions(State(store): St) -> HttpResponse {
    run(store, Request::ListDefinitions).await
}

async fn get_definition(State(store): St, Path(name): Path<String>) -> HttpResponse {
    run(store, Request::GetDefinition { name }).await
}

async fn put_definition(State(store): St, Path(name): Path<String>, headers: HeaderMap, body: Bytes) -> HttpResponse {
    let token = headers
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
        .map(|t| t.trim().to_owned());
    let document = match String::from_utf8(body.to_vec()) {
        Ok(d) => d,
        Err(_) => return error(ServerError::BadRequest("body is not UTF-8".into())),
    };
    run(store, Request::PutDefinition { name, document, token }).await
}

async fn create_game(State(store): St, body: Bytes) -> HttpResponse {
    match parse::<CreateGameBody>(&body) {
        Ok(b) => run(store, Request::CreateGame { definition: b.definition, seed: b.seed }).await,
        Err(e) => error(e),
    }
}

async fn join(State(store): St, Path(game): Path<String>, body: Bytes) -> HttpResponse {
    match parse::<JoinBody>(&body) {
        Ok(b) => run(store, Request::Join { game, name: b.name, kind: b.kind }).await,
        Err(e) => error(e),
    }
}

async fn submit(State(store): St, Path(game): Path<String>, body: Bytes) -> HttpResponse {
    match parse::<EventBody>(&body) {
        Ok(b) => run(store, Request::SubmitEvent { game, player: b.player, event: b.event }).await,
        Err(e) => error(e),
    }
}

async fn get_state(State(store): St, Path(game): Path<String>) -> HttpResponse {
    run(store, Request::GetState { game }).await
}

async fn get_commands(State(store): St, Path(game): Path<String>, RawQuery(query): RawQuery) -> HttpResponse {
    let mut since = 0;
    for pair in query.as_deref().unwrap_or("").split('&').filter(|p| !p.is_empty()) {
        match pair.split_once('=') {
            Some(("since", v)) => match v.parse() {
                Ok(n) => since = n,
                Err(_) => return error(ServerError::BadRequest(format!("since={v} is not a sequence number"))),
            },
            _ => return error(ServerError::BadRequest(format!("unknown query parameter {pair:?}"))),
        }
    }
    run(store, Request::GetCommands { game, since }).await
}

async fn save(State(store): St, Path(game): Path<String>) -> HttpResponse {
    run(store, Request::SaveGame { game }).await
}

async fn load(State(store): St, Path(game): Path<String>) -> HttpResponse {
    run(store, Request::LoadGame { game }).await
}

fn parse<T: DeserializeOwned>(body: &[u8]) -> Result<T, ServerError> {
    serde_json::from_slice(body).map_err(|e| ServerError::BadRequest(e.to_string()))
}

async fn run(store: Arc<GameStore>, req: Request) -> HttpResponse {
    match tokio::task::spawn_blocking(move || handle_request(&store, req)).await {
        Ok(Ok(reply)) => render(reply.response),
        Ok(Err(e)) => error(e),
        Err(e) => {
            log::error!("request handler panicked: {e}");
            (StatusCode::INTERNAL_SERVER_ERROR, json_body(&json!({"code": "INTERNAL", "reason": "internal error"})))
                .into_response()
        }
    }
}

fn game_view(game: &RunningGame) -> Value {
    json!({ "game": game, "last_seq": game.last_seq() })
}

fn render(response: Response) -> HttpResponse {
    let (status, body) = match response {
        Response::Definitions(list) => (StatusCode::OK, json!({ "definitions": list })),
        Response::Definition(def) => {
            return ([(header::CONTENT_TYPE, "application/json")], serialize_definition(&def)).into_response()
        }
        Response::DefinitionStored { name } => (StatusCode::OK, json!({ "name": name })),
        Response::GameCreated { id, seed, game } => {
            let mut v = game_view(&game);
            v["id"] = json!(id);
            v["seed"] = json!(seed);
            (StatusCode::CREATED, v)
        }
        Response::Joined { player, commands } => (StatusCode::OK, json!({ "player": player, "commands": commands })),
        Response::EventApplied { fired, commands, state, last_seq } => (
            StatusCode::OK,
            json!({ "fired": fired, "commands": commands, "state": state, "last_seq": last_seq }),
        ),
        Response::State { game } | Response::Loaded { game } => (StatusCode::OK, game_view(&game)),
        Response::Commands { commands, last_seq } => {
            (StatusCode::OK, json!({ "commands": commands, "last_seq": last_seq }))
        }
        Response::Saved { id, path, last_seq } => {
            (StatusCode::OK, json!({ "id": id, "path": path, "last_seq": last_seq }))
        }
    };
    (status, json_body(&body)).into_response()
}

fn error(e: ServerError) -> HttpResponse {
    let status = match &e {
        ServerError::NotFound(_) => StatusCode::NOT_FOUND,
        ServerError::Rejected(_) => StatusCode::CONFLICT,
        ServerError::Unauthorized => StatusCode::UNAUTHORIZED,
        ServerError::Invalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
        ServerError::BadRequest(_) => StatusCode::BAD_REQUEST,
        ServerError::Io(_) | ServerError::Corrupt(_) => StatusCode::INTERNAL_SERVER_ERROR,
    };
    if status.is_server_error() {
        log::warn!("{e}");
    }
    let mut body = json!({ "code": e.code(), "reason": e.reason() });
    if let ServerError::Invalid(diags) = &e {
        body["diagnostics"] = json!(diags);
    }
    let mut resp = (status, json_body(&body)).into_response();
    if status == StatusCode::UNAUTHORIZED {
        resp.headers_mut().insert(header::WWW_AUTHENTICATE, header::HeaderValue::from_static("Bearer"));
    }
    resp
}

/// `serde_json::Value` objects keep their keys sorted, which gives every
/// body the canonical key order.
fn json_body(v: &Value) -> ([(header::HeaderName, &'static str); 1], String) {
    ([(header::CONTENT_TYPE, "application/json")], v.to_string())
}
