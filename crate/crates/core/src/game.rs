//! The running game: one match's state machine, its event/command log and
//! the snapshot format used to persist it.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::board::{Board, CellValue, Coord};
use crate::canonical::to_canonical_json;
use crate::dsl::validate_definition;
use crate::error::{GameError, Result};
use crate::model::{GameDefinition, GameState, Player, PlayerId, PlayerKind, StateKind};
use crate::rules::{expand_pattern, EventSelector};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum EventKind {
    GameStart,
    TileClick {
        coord: Coord,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        value: Option<CellValue>,
    },
    PlayerJoin {
        name: String,
        kind: PlayerKind,
    },
    TerminationCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    #[serde(flatten)]
    pub kind: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actor: Option<PlayerId>,
}

impl Event {
    pub fn new(kind: EventKind, actor: Option<PlayerId>) -> Self {
        Self { kind, actor }
    }

    pub fn game_start() -> Self {
        Self::new(EventKind::GameStart, None)
    }

    pub fn tile_click(actor: PlayerId, coord: Coord, value: Option<CellValue>) -> Self {
        Self::new(EventKind::TileClick { coord, value }, Some(actor))
    }

    pub fn selector(&self) -> EventSelector {
        match self.kind {
            EventKind::GameStart => EventSelector::GameStart,
            EventKind::TileClick { .. } => EventSelector::TileClick,
            EventKind::PlayerJoin { .. } => EventSelector::PlayerJoin,
            EventKind::TerminationCheck => EventSelector::TerminationCheck,
        }
    }

    pub fn coord(&self) -> Option<Coord> {
        match self.kind {
            EventKind::TileClick { coord, .. } => Some(coord),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<CellValue> {
        match self.kind {
            EventKind::TileClick { value, .. } => value,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum CommandKind {
    SetTile { coord: Coord, value: CellValue },
    SetState { state: GameState },
    SetCurrentPlayer { player: PlayerId },
    SetWinner { player: PlayerId },
    PlayerJoined { player: Player },
    Message { text: String },
}

/// A board- or state-mutating message for clients. `seq` is dense per game.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Command {
    pub seq: u64,
    #[serde(flatten)]
    pub kind: CommandKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistoryEntry {
    pub event: Event,
    pub commands: Vec<Command>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunningGame {
    id: String,
    definition: Arc<GameDefinition>,
    board: Board,
    players: Vec<Player>,
    /// Index into `players`; set once the game starts.
    current_player: Option<usize>,
    state: GameState,
    history: Vec<HistoryEntry>,
    last_seq: u64,
    rng_seed: u64,
    /// How many random turn draws have been taken from the seeded stream.
    rng_draws: u64,
    #[serde(skip)]
    win_lines: LineCache,
}

/// Expanded win-pattern lines, computed once and shared between clones.
/// Derived data, so it never takes part in equality.
#[derive(Clone, Default)]
struct LineCache(Arc<OnceLock<Vec<Vec<Coord>>>>);

impl PartialEq for LineCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for LineCache {}

impl fmt::Debug for LineCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("LineCache")
    }
}

impl RunningGame {
    pub fn create(
        definition: impl Into<Arc<GameDefinition>>,
        id: impl Into<String>,
        seed: u64,
    ) -> Result<Self> {
        let definition = definition.into();
        let diagnostics = validate_definition(&definition);
        if !diagnostics.is_empty() {
            return Err(GameError::InvalidDefinition(diagnostics));
        }
        let board = definition.initial_board()?;
        Ok(Self {
            id: id.into(),
            definition,
            board,
            players: Vec::new(),
            current_player: None,
            state: GameState::NotStarted,
            history: Vec::new(),
            last_seq: 0,
            rng_seed: seed,
            rng_draws: 0,
            win_lines: LineCache::default(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn definition(&self) -> &Arc<GameDefinition> {
        &self.definition
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn state(&self) -> GameState {
        self.state
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn last_seq(&self) -> u64 {
        self.last_seq
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn current_player_index(&self) -> Option<usize> {
        self.current_player
    }

    pub fn current_player(&self) -> Option<&Player> {
        self.current_player.and_then(|i| self.players.get(i))
    }

    pub fn current_player_id(&self) -> Option<PlayerId> {
        self.current_player().map(|p| p.id)
    }

    pub fn player(&self, id: PlayerId) -> Option<&Player> {
        self.players.iter().find(|p| p.id == id)
    }

    /// Commands with `seq > since`, in order.
    pub fn commands_since(&self, since: u64) -> Vec<Command> {
        self.history
            .iter()
            .flat_map(|h| &h.commands)
            .filter(|c| c.seq > since)
            .cloned()
            .collect()
    }

    /// The definition's win pattern expanded for this board, if it has one.
    pub fn win_lines(&self) -> Result<Option<&[Vec<Coord>]>> {
        let Some(pattern) = &self.definition.win_pattern else {
            return Ok(None);
        };
        if let Some(lines) = self.win_lines.0.get() {
            return Ok(Some(lines));
        }
        let lines = expand_pattern(pattern, self.definition.rows, self.definition.cols)?;
        Ok(Some(self.win_lines.0.get_or_init(|| lines)))
    }

    pub fn join_player(&self, name: impl Into<String>, kind: PlayerKind) -> Result<Self> {
        let mut next = self.clone();
        next.join(name, kind)?;
        Ok(next)
    }

    /// Appends a player with the next dense id and logs `PlayerJoined`.
    pub fn join(&mut self, name: impl Into<String>, kind: PlayerKind) -> Result<Player> {
        if self.state != GameState::NotStarted {
            return Err(GameError::WrongState(self.state.to_string()));
        }
        if self.players.len() >= self.definition.max_players {
            return Err(GameError::GameFull(self.definition.max_players));
        }
        let player = Player {
            id: self.players.len() as PlayerId + 1,
            name: name.into(),
            kind,
        };
        self.players.push(player.clone());
        let event = Event::new(
            EventKind::PlayerJoin { name: player.name.clone(), kind },
            Some(player.id),
        );
        self.record(event, vec![CommandKind::PlayerJoined { player: player.clone() }]);
        Ok(player)
    }

    /// Stamps `kinds` with the next seq numbers and appends a history entry.
    pub(crate) fn record(&mut self, event: Event, kinds: Vec<CommandKind>) -> Vec<Command> {
        let commands: Vec<Command> = kinds
            .into_iter()
            .map(|kind| {
                self.last_seq += 1;
                Command { seq: self.last_seq, kind }
            })
            .collect();
        self.history.push(HistoryEntry { event, commands: commands.clone() });
        commands
    }

    pub(crate) fn board_mut(&mut self) -> &mut Board {
        &mut self.board
    }

    pub(crate) fn set_state(&mut self, state: GameState) {
        self.state = state;
    }

    pub(crate) fn set_current_index(&mut self, index: usize) {
        self.current_player = Some(index);
    }

    /// Takes the next draw index of the seeded turn stream.
    pub(crate) fn next_draw(&mut self) -> (u64, u64) {
        let draw = self.rng_draws;
        self.rng_draws += 1;
        (self.rng_seed, draw)
    }

    /// Drops the log. The analyzer keys its search on board and turn only.
    pub(crate) fn forget_history(&mut self) {
        self.history.clear();
    }

    pub fn snapshot(&self) -> String {
        to_canonical_json(self)
    }

    pub fn restore(text: &str) -> Result<Self> {
        let game: RunningGame =
            serde_json::from_str(text).map_err(|e| GameError::CorruptSnapshot(e.to_string()))?;
        game.check_consistency().map_err(GameError::CorruptSnapshot)?;
        Ok(game)
    }

    fn check_consistency(&self) -> std::result::Result<(), String> {
        let def = &self.definition;
        if self.board.rows() != def.rows || self.board.cols() != def.cols {
            return Err("board dimensions differ from the definition".into());
        }
        if self.players.iter().enumerate().any(|(i, p)| p.id as usize != i + 1) {
            return Err("player ids are not dense".into());
        }
        if self.players.len() > def.max_players {
            return Err("more players than the definition allows".into());
        }
        let seqs = self.history.iter().flat_map(|h| &h.commands).map(|c| c.seq);
        if !seqs.eq(1..=self.last_seq) {
            return Err("command log is not dense".into());
        }
        match (self.state.kind(), self.current_player) {
            (StateKind::NotStarted, Some(_)) => {
                return Err("current player set before start".into());
            }
            (_, Some(i)) if i >= self.players.len() => {
                return Err("current player index out of range".into());
            }
            _ => {}
        }
        if let Some(w) = self.state.winner() {
            if self.player(w).is_none() {
                return Err(format!("winner {w} is not a joined player"));
            }
        }
        Ok(())
    }
}
