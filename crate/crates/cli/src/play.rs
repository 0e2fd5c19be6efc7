use std::io::Write;
use std::path::Path;

use boardkit_core::{
    submit_event, Command, Coord, Event, GameDefinition, GameState, Outcome, PlayerId, PlayerKind,
    Rejection, RunningGame,
};
use serde::{Deserialize, Serialize};

use crate::{emit, emit_json, load_definition, read, CmdResult, Exit, EXIT_INVALID, EXIT_REJECTED};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptMove {
    pub player: PlayerId,
    pub row: usize,
    pub col: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u32>,
}

pub type MoveScript = Vec<ScriptMove>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub index: usize,
    pub player: PlayerId,
    pub coord: Coord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u32>,
    pub fired: Vec<String>,
    pub commands: Vec<Command>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedMove {
    pub index: usize,
    pub player: PlayerId,
    pub coord: Coord,
    pub code: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayTranscript {
    pub definition: String,
    pub seed: u64,
    pub players: usize,
    pub start: Vec<String>,
    pub moves: Vec<MoveRecord>,
    pub rejected: Option<RejectedMove>,
    pub board: Vec<Vec<u32>>,
    pub state: GameState,
    /// The closing line of the text transcript.
    pub result: String,
}

pub(crate) fn run(file: &Path, script: &Path, seed: u64, json: bool, out: &mut dyn Write) -> CmdResult {
    let def = load_definition(file)?;
    let script: MoveScript = serde_json::from_str(&read(script)?)
        .map_err(|e| Exit::new(EXIT_INVALID, format!("bad script {}: {e}", script.display())))?;
    let transcript = play(def, &script, seed)?;
    if json {
        emit_json(out, &transcript)?;
    } else {
        for line in text_lines(&transcript) {
            emit(out, &line)?;
        }
    }
    match &transcript.rejected {
        Some(r) => Err(Exit::new(EXIT_REJECTED, format!("move {} rejected: {}", r.index, r.reason))),
        None => Ok(()),
    }
}

/// Joins the players the script mentions (at least the definition's
/// minimum), starts the game and submits each move in order, stopping at
/// the first rejection.
pub fn play(def: GameDefinition, script: &[ScriptMove], seed: u64) -> Result<PlayTranscript, Exit> {
    let mentioned = script.iter().map(|m| m.player as usize).max().unwrap_or(0);
    let players = mentioned.max(def.min_players);
    if players > def.max_players {
        return Err(Exit::new(
            EXIT_INVALID,
            format!("script needs {players} players but {} allows at most {}", def.name, def.max_players),
        ));
    }
    let name = def.name.clone();
    let mut game = RunningGame::create(def, "play", seed).map_err(|e| Exit::new(EXIT_INVALID, e.to_string()))?;
    for i in 1..=players {
        game.join(format!("Player{i}"), PlayerKind::Human).map_err(|e| Exit::new(EXIT_INVALID, e.to_string()))?;
    }
    let started = submit_event(&game, &Event::game_start())
        .map_err(|r| Exit::new(EXIT_REJECTED, format!("game start rejected: {}", r.reason)))?;
    game = started.game;

    let mut moves = Vec::new();
    let mut rejected = None;
    for (i, m) in script.iter().enumerate() {
        let coord = Coord::new(m.row, m.col);
        match submit_event(&game, &Event::tile_click(m.player, coord, m.value)) {
            Ok(d) => {
                game = d.game;
                moves.push(MoveRecord {
                    index: i + 1,
                    player: m.player,
                    coord,
                    value: m.value,
                    fired: d.fired,
                    commands: d.commands,
                });
            }
            Err(Rejection { code, reason }) => {
                rejected = Some(RejectedMove { index: i + 1, player: m.player, coord, code, reason });
                break;
            }
        }
    }
    Ok(PlayTranscript {
        definition: name,
        seed,
        players,
        start: started.fired,
        moves,
        rejected,
        board: game.board().grid(),
        state: game.state(),
        result: result_line(game.state()),
    })
}

fn result_line(state: GameState) -> String {
    match state {
        GameState::Terminated(Outcome::Winner(p)) => format!("winner: {p}"),
        GameState::Terminated(Outcome::Draw) => "draw".into(),
        GameState::Terminated(Outcome::Abandoned) => "abandoned".into(),
        other => format!("state: {other}"),
    }
}

fn text_lines(t: &PlayTranscript) -> Vec<String> {
    let mut lines = vec![format!("game {} with {} players, seed {}", t.definition, t.players, t.seed)];
    lines.push(format!("start: {}", t.start.join(", ")));
    for m in &t.moves {
        let value = m.value.map(|v| format!(" = {v}")).unwrap_or_default();
        lines.push(format!("move {}: player {} {}{value} -> {}", m.index, m.player, m.coord, m.fired.join(", ")));
    }
    if let Some(r) = &t.rejected {
        lines.push(format!("move {}: player {} {} rejected: {}", r.index, r.player, r.coord, r.reason));
    }
    for row in &t.board {
        let cells: Vec<String> =
            row.iter().map(|&v| if v == 0 { ".".to_string() } else { v.to_string() }).collect();
        lines.push(cells.join(" "));
    }
    lines.push(t.result.clone());
    lines
}
