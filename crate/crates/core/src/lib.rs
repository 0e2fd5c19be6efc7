//! Board games as data.
//!
//! A game is a [`GameDefinition`]: board dimensions, a value domain, player
//! bounds, a turn policy, an optional win pattern and a list of
//! Event-Condition-Action [`Rule`]s. A [`RunningGame`] is one match of a
//! definition; events are dispatched through the rules and every mutation is
//! reported as a [`Command`] that a [`Replica`] can replay.

pub mod analyzer;
pub mod board;
pub mod builtin;
pub mod canonical;
pub mod dsl;
pub mod error;
pub mod game;
pub mod model;
pub mod replica;
pub mod rules;

pub use board::{Board, CellValue, Coord};
pub use dsl::{parse_game_definition, serialize_definition, validate_definition, Diagnostic, DiagnosticCode};
pub use error::{GameError, Result};
pub use game::{Command, CommandKind, Event, EventKind, HistoryEntry, RunningGame};
pub use model::{
    GameDefinition, GameState, Outcome, Player, PlayerId, PlayerKind, Region, Semantics, StateKind,
    TurnPolicy, ValueDomain,
};
pub use replica::Replica;
pub use rules::{dispatch_event, submit_event, Action, Condition, Dispatch, Pattern, Rejection, Rule};
