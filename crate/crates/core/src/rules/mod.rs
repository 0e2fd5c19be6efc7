//! Event-Condition-Action rules.
//!
//! A [`Rule`] is selected by the kind of event it listens to, gated by a
//! conjunction of [`Condition`]s, and on success applies its [`Action`]s in
//! order before running its component rules. Component-only rules carry no
//! `on` selector and run only when another rule names them.

mod engine;
mod graph;
mod pattern;

use serde::{Deserialize, Serialize};

use crate::model::StateKind;

pub use engine::{
    apply_action, check_winner, dispatch_event, eval_condition, explain_rejection, run_rule,
    submit_event, switch_player, winner_in_lines, Dispatch, Rejection, RuleRun,
};
pub use graph::{validate_rule_graph, RuleGraphIssue};
pub use pattern::{expand_pattern, LineFamily, Pattern};

/// Which event kind a rule listens to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventSelector {
    GameStart,
    TileClick,
    PlayerJoin,
    TerminationCheck,
}

/// Board groups that must not repeat a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupFamily {
    Rows,
    Cols,
    Regions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Condition {
    /// The definition's name equals `name`.
    GameTypeIs { name: String },
    StateIs { state: StateKind },
    /// The event's actor is the player whose turn it is.
    IsCurrentPlayer,
    TileEmpty,
    TileNotLocked,
    /// The event carries a value that is 0 (erase) or inside the value domain.
    ValueInDomain,
    /// At least `min_players` have joined.
    HasMinPlayers,
    /// Some line of the pattern is uniformly owned by one player. Without an
    /// explicit pattern the definition's `win_pattern` is used.
    PatternOwnedBySamePlayer {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pattern: Option<Pattern>,
    },
    BoardFull,
    /// No nonzero value repeats within any group of the family.
    GroupsAllDistinct { groups: GroupFamily },
    /// The event's value may be placed at its coordinate under the
    /// row/column/region uniqueness constraint.
    LegalSymbolPlacement,
}

impl Condition {
    pub const KINDS: &'static [&'static str] = &[
        "GameTypeIs",
        "StateIs",
        "IsCurrentPlayer",
        "TileEmpty",
        "TileNotLocked",
        "ValueInDomain",
        "HasMinPlayers",
        "PatternOwnedBySamePlayer",
        "BoardFull",
        "GroupsAllDistinct",
        "LegalSymbolPlacement",
    ];

    /// Conditions that read the event's tile coordinate.
    pub fn needs_tile(&self) -> bool {
        matches!(
            self,
            Condition::TileEmpty
                | Condition::TileNotLocked
                | Condition::ValueInDomain
                | Condition::LegalSymbolPlacement
        )
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Condition::GameTypeIs { .. } => "GameTypeIs",
            Condition::StateIs { .. } => "StateIs",
            Condition::IsCurrentPlayer => "IsCurrentPlayer",
            Condition::TileEmpty => "TileEmpty",
            Condition::TileNotLocked => "TileNotLocked",
            Condition::ValueInDomain => "ValueInDomain",
            Condition::HasMinPlayers => "HasMinPlayers",
            Condition::PatternOwnedBySamePlayer { .. } => "PatternOwnedBySamePlayer",
            Condition::BoardFull => "BoardFull",
            Condition::GroupsAllDistinct { .. } => "GroupsAllDistinct",
            Condition::LegalSymbolPlacement => "LegalSymbolPlacement",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Action {
    /// NotStarted → Started; the first joined player moves first.
    SetStateStarted,
    SetTileToCurrentPlayer,
    SetTileToEventValue,
    SwitchPlayer,
    /// The current player wins and the game terminates.
    SetWinnerCurrent,
    /// The owner of the first complete win-pattern line wins.
    SetWinnerMatched,
    GameOverDraw,
    SendMessage { text: String },
}

impl Action {
    pub const KINDS: &'static [&'static str] = &[
        "SetStateStarted",
        "SetTileToCurrentPlayer",
        "SetTileToEventValue",
        "SwitchPlayer",
        "SetWinnerCurrent",
        "SetWinnerMatched",
        "GameOverDraw",
        "SendMessage",
    ];

    pub fn needs_tile(&self) -> bool {
        matches!(self, Action::SetTileToCurrentPlayer | Action::SetTileToEventValue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rule {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on: Option<EventSelector>,
    #[serde(default)]
    pub conditions: Vec<Condition>,
    #[serde(default)]
    pub actions: Vec<Action>,
    #[serde(default)]
    pub components: Vec<String>,
}

impl Rule {
    pub fn new(name: impl Into<String>, on: Option<EventSelector>) -> Self {
        Self {
            name: name.into(),
            on,
            conditions: Vec::new(),
            actions: Vec::new(),
            components: Vec::new(),
        }
    }

    pub fn when(mut self, cond: Condition) -> Self {
        self.conditions.push(cond);
        self
    }

    pub fn then(mut self, act: Action) -> Self {
        self.actions.push(act);
        self
    }

    pub fn component(mut self, name: impl Into<String>) -> Self {
        self.components.push(name.into());
        self
    }
}
