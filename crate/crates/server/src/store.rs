//! In-memory games and definitions, with snapshot files under the data
//! directory:
//!
//! ```text
//! <data_dir>/definitions/<name>.game.json
//! <data_dir>/games/<id>.json
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use boardkit_core::{builtin, parse_game_definition, serialize_definition, GameDefinition, GameError, RunningGame};
use parking_lot::{Mutex, RwLock};

use crate::ServerError;

pub type SharedGame = Arc<Mutex<RunningGame>>;

/// Called between writing a snapshot's temp file and renaming it into
/// place. Returning an error aborts the save as a crash at that point would.
pub type FaultHook = Box<dyn Fn(&Path) -> io::Result<()> + Send + Sync>;

pub struct GameStore {
    definitions: RwLock<BTreeMap<String, Arc<GameDefinition>>>,
    games: RwLock<HashMap<String, SharedGame>>,
    data_dir: PathBuf,
    editor_token: String,
    fault_hook: RwLock<Option<FaultHook>>,
}

impl GameStore {
    /// Opens the store, creating the data directory if needed. Definitions
    /// are the builtin corpus plus every readable file under
    /// `definitions/`; a file replaces a builtin of the same name.
    pub fn open(data_dir: impl Into<PathBuf>, editor_token: impl Into<String>) -> Result<Self, ServerError> {
        let data_dir = data_dir.into();
        fs::create_dir_all(data_dir.join("definitions"))?;
        fs::create_dir_all(data_dir.join("games"))?;
        let mut definitions: BTreeMap<String, Arc<GameDefinition>> =
            builtin::corpus().into_iter().map(|(_, d)| (d.name.clone(), Arc::new(d))).collect();
        let mut files: Vec<PathBuf> = fs::read_dir(data_dir.join("definitions"))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.to_string_lossy().ends_with(".game.json"))
            .collect();
        files.sort();
        for path in files {
            let text = match fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) => {
                    log::warn!("skipping {}: {e}", path.display());
                    continue;
                }
            };
            match parse_game_definition(&text) {
                Ok(def) => {
                    definitions.insert(def.name.clone(), Arc::new(def));
                }
                Err(diags) => log::warn!("skipping {}: {} diagnostics", path.display(), diags.len()),
            }
        }
        Ok(Self {
            definitions: RwLock::new(definitions),
            games: RwLock::new(HashMap::new()),
            data_dir,
            editor_token: editor_token.into(),
            fault_hook: RwLock::new(None),
        })
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    pub fn check_token(&self, token: Option<&str>) -> bool {
        token.is_some_and(|t| !self.editor_token.is_empty() && t == self.editor_token)
    }

    pub fn set_fault_hook(&self, hook: Option<FaultHook>) {
        *self.fault_hook.write() = hook;
    }

    pub fn definitions(&self) -> Vec<Arc<GameDefinition>> {
        self.definitions.read().values().cloned().collect()
    }

    pub fn definition(&self, name: &str) -> Option<Arc<GameDefinition>> {
        self.definitions.read().get(name).cloned()
    }

    /// Stores a definition and writes it to disk. Running games keep the
    /// definition they were created with.
    pub fn put_definition(&self, def: GameDefinition) -> Result<(), ServerError> {
        check_file_name(&def.name)?;
        let path = self.data_dir.join("definitions").join(format!("{}.game.json", def.name));
        self.write_atomic(&path, &serialize_definition(&def))?;
        self.definitions.write().insert(def.name.clone(), Arc::new(def));
        Ok(())
    }

    pub fn insert_game(&self, game: RunningGame) -> SharedGame {
        let id = game.id().to_owned();
        let shared = Arc::new(Mutex::new(game));
        self.games.write().insert(id, shared.clone());
        shared
    }

    pub fn game(&self, id: &str) -> Result<SharedGame, ServerError> {
        self.games.read().get(id).cloned().ok_or_else(|| ServerError::NotFound(format!("game {id}")))
    }

    pub fn game_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.games.read().keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn snapshot_path(&self, id: &str) -> PathBuf {
        self.data_dir.join("games").join(format!("{id}.json"))
    }

    /// Writes the game's snapshot atomically. The caller holds the game.
    pub fn persist(&self, game: &RunningGame) -> Result<PathBuf, ServerError> {
        check_file_name(game.id())?;
        let path = self.snapshot_path(game.id());
        self.write_atomic(&path, &game.snapshot())?;
        Ok(path)
    }

    /// Reads a snapshot from disk and makes it the live game of that id.
    pub fn load(&self, id: &str) -> Result<SharedGame, ServerError> {
        if check_file_name(id).is_err() {
            return Err(ServerError::NotFound(format!("game {id}")));
        }
        let text = match fs::read_to_string(self.snapshot_path(id)) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                return Err(ServerError::NotFound(format!("saved game {id}")))
            }
            Err(e) => return Err(e.into()),
        };
        let game = RunningGame::restore(&text).map_err(|e| match e {
            GameError::CorruptSnapshot(m) => ServerError::Corrupt(m),
            other => ServerError::Corrupt(other.to_string()),
        })?;
        if game.id() != id {
            return Err(ServerError::Corrupt(format!("snapshot holds game {}", game.id())));
        }
        self.definitions
            .write()
            .entry(game.definition().name.clone())
            .or_insert_with(|| game.definition().clone());
        let existing = self.games.read().get(id).cloned();
        Ok(match existing {
            Some(shared) => {
                *shared.lock() = game;
                shared
            }
            None => self.insert_game(game),
        })
    }

    fn write_atomic(&self, path: &Path, text: &str) -> io::Result<()> {
        let tmp = path.with_extension("json.tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        if let Some(hook) = self.fault_hook.read().as_ref() {
            hook(&tmp)?;
        }
        fs::rename(&tmp, path)
    }
}

/// Names and ids end up in file names; keep them to a safe alphabet.
fn check_file_name(name: &str) -> Result<(), ServerError> {
    let ok = !name.is_empty()
        && name.len() <= 128
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(ServerError::BadRequest(format!("{name:?} is not a valid name")))
    }
}
