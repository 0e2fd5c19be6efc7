#![allow(dead_code)]

use std::path::PathBuf;

use boardkit_core::builtin::{tictactoe_definition, TicTacToeParams};
use boardkit_core::{
    dispatch_event, Coord, Event, GameDefinition, PlayerKind, RunningGame, TurnPolicy,
};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn ttt(rows: usize, cols: usize, len: usize, players: usize) -> GameDefinition {
    tictactoe_definition(&TicTacToeParams::new(rows, cols, len, players, TurnPolicy::RoundRobin))
        .unwrap()
}

/// A game of `def` with `players` joined and the start event dispatched.
pub fn started(def: GameDefinition, players: usize, seed: u64) -> RunningGame {
    let mut g = RunningGame::create(def, "test", seed).unwrap();
    for i in 1..=players {
        g.join(format!("Player{i}"), PlayerKind::Human).unwrap();
    }
    dispatch_event(&g, &Event::game_start()).unwrap().game
}

/// Plays `moves` as the current player each time; panics if one is refused.
pub fn play(mut g: RunningGame, moves: &[(usize, usize)]) -> RunningGame {
    for &(r, c) in moves {
        let actor = g.current_player_id().expect("started game");
        let d = dispatch_event(&g, &Event::tile_click(actor, Coord::new(r, c), None)).unwrap();
        assert!(!d.fired.is_empty(), "move ({r},{c}) was refused");
        g = d.game;
    }
    g
}
