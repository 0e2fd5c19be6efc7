//! The game ontology: definitions, players and lifecycle states.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::board::{Board, CellValue, Coord};
use crate::error::Result;
use crate::rules::{Pattern, Rule};

pub type PlayerId = u32;

/// How nonzero cell values are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Value `v > 0` means player `v` owns the tile.
    Ownership,
    /// Values are symbols (digits) placed by whoever's turn it is.
    Symbols,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurnPolicy {
    RoundRobin,
    Random,
}

/// Inclusive range of legal nonzero cell values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueDomain {
    pub lo: CellValue,
    pub hi: CellValue,
}

impl ValueDomain {
    pub fn contains(&self, v: CellValue) -> bool {
        (self.lo..=self.hi).contains(&v)
    }

    pub fn size(&self) -> usize {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo) as usize + 1
        }
    }
}

/// Shape of the rectangular regions a symbols board is tiled into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub rows: usize,
    pub cols: usize,
}

impl Region {
    /// Top-left corner of the region containing `c`.
    pub fn origin(&self, c: Coord) -> Coord {
        Coord::new(c.row - c.row % self.rows, c.col - c.col % self.cols)
    }
}

/// A game as pure data. This is also the on-disk definition document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDefinition {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub semantics: Semantics,
    pub value_domain: ValueDomain,
    pub min_players: usize,
    pub max_players: usize,
    pub turn_policy: TurnPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub win_pattern: Option<Pattern>,
    pub rules: Vec<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub givens: Option<Vec<Vec<CellValue>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

impl GameDefinition {
    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Board a new running game starts from: empty, or the givens with
    /// every nonzero given locked.
    pub fn initial_board(&self) -> Result<Board> {
        let Some(givens) = &self.givens else {
            return Board::new(self.rows, self.cols, 0);
        };
        let mut board = Board::from_grid(givens)?;
        let locked: Vec<Coord> = board.coords().filter(|&c| board.get(c) != Ok(0)).collect();
        for c in locked {
            board.lock(c)?;
        }
        Ok(board)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlayerKind {
    Human,
    Robot,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Player {
    pub id: PlayerId,
    pub name: String,
    pub kind: PlayerKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Winner(PlayerId),
    Draw,
    Abandoned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameState {
    NotStarted,
    Started,
    Terminated(Outcome),
}

impl GameState {
    pub fn kind(&self) -> StateKind {
        match self {
            GameState::NotStarted => StateKind::NotStarted,
            GameState::Started => StateKind::Started,
            GameState::Terminated(_) => StateKind::Terminated,
        }
    }

    pub fn is_terminated(&self) -> bool {
        matches!(self, GameState::Terminated(_))
    }

    pub fn winner(&self) -> Option<PlayerId> {
        match self {
            GameState::Terminated(Outcome::Winner(p)) => Some(*p),
            _ => None,
        }
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameState::NotStarted => f.write_str("Not Started"),
            GameState::Started => f.write_str("Started"),
            GameState::Terminated(Outcome::Winner(p)) => write!(f, "Terminated (winner {p})"),
            GameState::Terminated(Outcome::Draw) => f.write_str("Terminated (draw)"),
            GameState::Terminated(Outcome::Abandoned) => f.write_str("Terminated (abandoned)"),
        }
    }
}

/// Lifecycle phase without the outcome; what `StateIs` conditions test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateKind {
    NotStarted,
    Started,
    Terminated,
}
