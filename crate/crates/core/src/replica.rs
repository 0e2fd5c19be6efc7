//! Client-side copy of a running game, kept in sync purely by applying the
//! server's command stream in seq order.

use serde::{Deserialize, Serialize};

use crate::board::Board;
use crate::error::{GameError, Result};
use crate::game::{Command, CommandKind, RunningGame};
use crate::model::{GameState, Player, PlayerId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replica {
    pub board: Board,
    pub players: Vec<Player>,
    pub current_player: Option<PlayerId>,
    pub state: GameState,
    pub winner: Option<PlayerId>,
    pub last_seq: u64,
}

impl Replica {
    /// Seeds a replica from a full snapshot of the server game.
    pub fn from_game(game: &RunningGame) -> Self {
        Self {
            board: game.board().clone(),
            players: game.players().to_vec(),
            current_player: if game.state() == GameState::NotStarted {
                None
            } else {
                game.current_player_id()
            },
            state: game.state(),
            winner: game.state().winner(),
            last_seq: game.last_seq(),
        }
    }

    pub fn apply_command(&mut self, cmd: &Command) -> Result<()> {
        let expected = self.last_seq + 1;
        if cmd.seq != expected {
            return Err(GameError::OutOfOrder { expected, got: cmd.seq });
        }
        match &cmd.kind {
            CommandKind::SetTile { coord, value } => self.board.set(*coord, *value)?,
            CommandKind::SetState { state } => self.state = *state,
            CommandKind::SetCurrentPlayer { player } => self.current_player = Some(*player),
            CommandKind::SetWinner { player } => self.winner = Some(*player),
            CommandKind::PlayerJoined { player } => self.players.push(player.clone()),
            CommandKind::Message { .. } => {}
        }
        self.last_seq = cmd.seq;
        Ok(())
    }

    /// Applies a batch; stops at the first failure, leaving earlier
    /// commands applied.
    pub fn apply_all<'a>(&mut self, cmds: impl IntoIterator<Item = &'a Command>) -> Result<()> {
        cmds.into_iter().try_for_each(|c| self.apply_command(c))
    }
}
