//! Transport-independent request handling. Every request touching a game
//! holds that game's lock for its whole duration, so events on one game
//! are applied in a total order while other games proceed in parallel.

use std::path::PathBuf;
use std::sync::Arc;

use boardkit_core::{
    parse_game_definition, submit_event, Command, Diagnostic, DiagnosticCode, EventKind,
    Event, GameDefinition, GameState, Player, PlayerId, PlayerKind, RunningGame, Semantics,
};
use rand::Rng;
use serde::Serialize;

use crate::store::GameStore;
use crate::ServerError;

#[derive(Debug, Clone, PartialEq)]
pub enum Request {
    ListDefinitions,
    GetDefinition { name: String },
    PutDefinition { name: String, document: String, token: Option<String> },
    CreateGame { definition: String, seed: Option<u64> },
    Join { game: String, name: String, kind: PlayerKind },
    SubmitEvent { game: String, player: Option<PlayerId>, event: Event },
    GetState { game: String },
    GetCommands { game: String, since: u64 },
    SaveGame { game: String },
    LoadGame { game: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefinitionSummary {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub semantics: Semantics,
    pub min_players: usize,
    pub max_players: usize,
}

impl From<&GameDefinition> for DefinitionSummary {
    fn from(d: &GameDefinition) -> Self {
        Self {
            name: d.name.clone(),
            rows: d.rows,
            cols: d.cols,
            semantics: d.semantics,
            min_players: d.min_players,
            max_players: d.max_players,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Response {
    Definitions(Vec<DefinitionSummary>),
    Definition(Arc<GameDefinition>),
    DefinitionStored { name: String },
    GameCreated { id: String, seed: u64, game: RunningGame },
    Joined { player: Player, commands: Vec<Command> },
    EventApplied { fired: Vec<String>, commands: Vec<Command>, state: GameState, last_seq: u64 },
    State { game: RunningGame },
    Commands { commands: Vec<Command>, last_seq: u64 },
    Saved { id: String, path: PathBuf, last_seq: u64 },
    Loaded { game: RunningGame },
}

/// A response plus the commands every client of the game must apply.
#[derive(Debug, Clone, PartialEq)]
pub struct Reply {
    pub response: Response,
    pub broadcast: Vec<Command>,
}

impl Reply {
    fn quiet(response: Response) -> Self {
        Self { response, broadcast: Vec::new() }
    }
}

/// Seeds drawn for games created without one stay below 2^53 so they
/// survive JSON clients that read numbers as doubles.
pub fn entropy_seed() -> u64 {
    rand::thread_rng().gen_range(0..1u64 << 53)
}

pub fn handle_request(store: &GameStore, req: Request) -> Result<Reply, ServerError> {
    match req {
        Request::ListDefinitions => {
            let list = store.definitions().iter().map(|d| DefinitionSummary::from(&**d)).collect();
            Ok(Reply::quiet(Response::Definitions(list)))
        }
        Request::GetDefinition { name } => {
            let def = store.definition(&name).ok_or_else(|| ServerError::NotFound(format!("definition {name}")))?;
            Ok(Reply::quiet(Response::Definition(def)))
        }
        Request::PutDefinition { name, document, token } => {
            if !store.check_token(token.as_deref()) {
                return Err(ServerError::Unauthorized);
            }
            let def = parse_game_definition(&document).map_err(ServerError::Invalid)?;
            if def.name != name {
                return Err(ServerError::Invalid(vec![Diagnostic::new(
                    DiagnosticCode::Semantics,
                    format!("document is named {:?}, not {name:?}", def.name),
                    Some("/name".into()),
                )]));
            }
            store.put_definition(def)?;
            Ok(Reply::quiet(Response::DefinitionStored { name }))
        }
        Request::CreateGame { definition, seed } => {
            let def = store
                .definition(&definition)
                .ok_or_else(|| ServerError::NotFound(format!("definition {definition}")))?;
            let seed = seed.unwrap_or_else(entropy_seed);
            let id = uuid::Uuid::new_v4().simple().to_string();
            let game = RunningGame::create(def, id.clone(), seed).map_err(|e| match e {
                boardkit_core::GameError::InvalidDefinition(d) => ServerError::Invalid(d),
                other => ServerError::BadRequest(other.to_string()),
            })?;
            store.insert_game(game.clone());
            Ok(Reply::quiet(Response::GameCreated { id, seed, game }))
        }
        Request::Join { game, name, kind } => {
            let shared = store.game(&game)?;
            let mut g = shared.lock();
            let before = g.last_seq();
            let player = g.join(name, kind).map_err(|e| match e {
                boardkit_core::GameError::GameFull(n) => ServerError::rejected("GAME_FULL", format!("game is full ({n} players)")),
                boardkit_core::GameError::WrongState(_) => ServerError::rejected("WRONG_STATE", "wrong state"),
                other => ServerError::BadRequest(other.to_string()),
            })?;
            let commands = g.commands_since(before);
            Ok(Reply { response: Response::Joined { player, commands: commands.clone() }, broadcast: commands })
        }
        Request::SubmitEvent { game, player, event } => submit(store, &game, player, event),
        Request::GetState { game } => {
            let g = store.game(&game)?.lock().clone();
            Ok(Reply::quiet(Response::State { game: g }))
        }
        Request::GetCommands { game, since } => {
            let shared = store.game(&game)?;
            let g = shared.lock();
            Ok(Reply::quiet(Response::Commands { commands: g.commands_since(since), last_seq: g.last_seq() }))
        }
        Request::SaveGame { game } => {
            let shared = store.game(&game)?;
            let g = shared.lock();
            let path = store.persist(&g)?;
            Ok(Reply::quiet(Response::Saved { id: game, path, last_seq: g.last_seq() }))
        }
        Request::LoadGame { game } => {
            let shared = store.load(&game)?;
            let g = shared.lock().clone();
            Ok(Reply::quiet(Response::Loaded { game: g }))
        }
    }
}

fn submit(store: &GameStore, id: &str, player: Option<PlayerId>, mut event: Event) -> Result<Reply, ServerError> {
    if matches!(event.kind, EventKind::PlayerJoin { .. }) {
        return Err(ServerError::rejected("INVALID_EVENT", "players join through the join request"));
    }
    match (player, event.actor) {
        (Some(p), Some(a)) if p != a => {
            return Err(ServerError::rejected("ACTOR_MISMATCH", format!("event actor {a} is not player {p}")))
        }
        (Some(p), _) => event.actor = Some(p),
        _ => {}
    }
    let shared = store.game(id)?;
    let mut g = shared.lock();
    if let Some(a) = event.actor {
        if g.player(a).is_none() {
            return Err(ServerError::rejected("UNKNOWN_PLAYER", format!("player {a} has not joined")));
        }
    }
    let was_terminated = g.state().is_terminated();
    let d = submit_event(&g, &event).map_err(ServerError::Rejected)?;
    *g = d.game;
    if !was_terminated && g.state().is_terminated() {
        if let Err(e) = store.persist(&g) {
            log::warn!("could not save finished game {id}: {e}");
        }
    }
    Ok(Reply {
        response: Response::EventApplied {
            fired: d.fired,
            commands: d.commands.clone(),
            state: g.state(),
            last_seq: g.last_seq(),
        },
        broadcast: d.commands,
    })
}
