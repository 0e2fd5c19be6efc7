//! The Event-Condition-Action interpreter.
//!
//! Dispatch is transactional: work happens on a copy of the game and the
//! caller only sees the result if every action succeeded. An event that
//! fires no rule leaves the game untouched and is not logged.

use std::borrow::Cow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::board::{Board, Coord};
use crate::builtin::sudoku_legal_move;
use crate::error::{GameError, Result};
use crate::game::{Command, CommandKind, Event, EventKind, RunningGame};
use crate::model::{GameState, Outcome, PlayerId, Semantics, TurnPolicy};
use crate::rules::{expand_pattern, Action, Condition, EventSelector, GroupFamily, Pattern, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dispatch {
    pub game: RunningGame,
    pub commands: Vec<Command>,
    /// Names of every rule that fired, components included, in firing order.
    pub fired: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleRun {
    pub game: RunningGame,
    pub commands: Vec<CommandKind>,
    pub fired: bool,
}

/// Why an event was not accepted, in a form fit for a client.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub code: String,
    pub reason: String,
}

impl Rejection {
    pub fn new(code: &str, reason: impl Into<String>) -> Self {
        Self { code: code.into(), reason: reason.into() }
    }
}

/// Runs every rule listening to `ev` in definition order. After a tile
/// click that fired something, rules listening to `TerminationCheck` run
/// too, unless the game already ended.
pub fn dispatch_event(rg: &RunningGame, ev: &Event) -> Result<Dispatch> {
    check_event(rg, ev)?;
    let mut run = Run::new(rg.clone());
    run.matching(ev)?;
    if ev.selector() == EventSelector::TileClick
        && !run.fired.is_empty()
        && !run.game.state().is_terminated()
    {
        run.matching(&Event::new(EventKind::TerminationCheck, ev.actor))?;
    }
    if run.fired.is_empty() {
        return Ok(Dispatch { game: rg.clone(), commands: Vec::new(), fired: Vec::new() });
    }
    let Run { mut game, commands, fired } = run;
    let commands = game.record(ev.clone(), commands);
    Ok(Dispatch { game, commands, fired })
}

/// Runs one rule and, if it fires, its components against the updated game.
pub fn run_rule(rg: &RunningGame, rule: &Rule, ev: &Event) -> Result<RuleRun> {
    let mut run = Run::new(rg.clone());
    let fired = run.rule(rule, ev, 0)?;
    Ok(RuleRun { game: run.game, commands: run.commands, fired })
}

pub fn eval_condition(rg: &RunningGame, ev: &Event, cond: &Condition) -> Result<bool> {
    let def = rg.definition();
    let tile = || ev.coord().ok_or_else(|| GameError::MissingContext(cond.kind_name().into()));
    Ok(match cond {
        Condition::GameTypeIs { name } => def.name == *name,
        Condition::StateIs { state } => rg.state().kind() == *state,
        Condition::IsCurrentPlayer => {
            rg.state() == GameState::Started
                && ev.actor.is_some()
                && ev.actor == rg.current_player_id()
        }
        Condition::TileEmpty => rg.board().get(tile()?)? == 0,
        Condition::TileNotLocked => {
            let c = tile()?;
            rg.board().get(c)?;
            !rg.board().is_locked(c)
        }
        Condition::ValueInDomain => {
            tile()?;
            ev.value().is_some_and(|v| v == 0 || def.value_domain.contains(v))
        }
        Condition::HasMinPlayers => rg.players().len() >= def.min_players,
        Condition::PatternOwnedBySamePlayer { pattern } => {
            let lines = pattern_lines(rg, pattern.as_ref())?;
            winner_in_lines(rg.board(), &lines).is_some()
        }
        Condition::BoardFull => rg.board().is_full(),
        Condition::GroupsAllDistinct { groups } => groups_distinct(rg, *groups)?,
        Condition::LegalSymbolPlacement => {
            let c = tile()?;
            match ev.value() {
                Some(v) => {
                    let domain = def.value_domain.hi;
                    matches!(sudoku_legal_move(rg.board(), c, v, domain, def.region), Ok(true))
                }
                None => false,
            }
        }
    })
}

pub fn apply_action(rg: &RunningGame, ev: &Event, act: &Action) -> Result<(RunningGame, Vec<CommandKind>)> {
    let mut game = rg.clone();
    let commands = apply_in_place(&mut game, ev, act)?;
    Ok((game, commands))
}

/// Owner of the first fully owned line of `p`, in expansion order.
pub fn check_winner(rg: &RunningGame, p: &Pattern) -> Result<Option<PlayerId>> {
    if rg.definition().semantics != Semantics::Ownership {
        return Err(GameError::Semantics("check_winner needs an ownership game".into()));
    }
    let lines = expand_pattern(p, rg.board().rows(), rg.board().cols())?;
    Ok(winner_in_lines(rg.board(), &lines))
}

pub fn winner_in_lines(board: &Board, lines: &[Vec<Coord>]) -> Option<PlayerId> {
    lines.iter().find_map(|line| {
        let first = board.get(*line.first()?).ok()?;
        (first != 0 && line.iter().all(|&c| board.get(c) == Ok(first))).then_some(first)
    })
}

pub fn switch_player(rg: &RunningGame) -> Result<(RunningGame, CommandKind)> {
    let mut game = rg.clone();
    let cmd = switch_in_place(&mut game)?;
    Ok((game, cmd))
}

/// Explains why `ev` fires nothing: the first failing condition of the
/// first rule listening to the event.
pub fn explain_rejection(rg: &RunningGame, ev: &Event) -> Rejection {
    if let Err(e) = check_event(rg, ev) {
        return Rejection::new("INVALID_EVENT", e.to_string());
    }
    let mut listeners = rg.definition().rules.iter().filter(|r| r.on == Some(ev.selector()));
    let Some(rule) = listeners.next() else {
        return Rejection::new("NO_RULE", "no rule handles this event");
    };
    for cond in &rule.conditions {
        match eval_condition(rg, ev, cond) {
            Ok(true) => continue,
            Ok(false) => return rejection_for(cond),
            Err(e) => return Rejection::new("INVALID_EVENT", e.to_string()),
        }
    }
    Rejection::new("NOT_FIRED", format!("rule {:?} did not fire", rule.name))
}

fn rejection_for(cond: &Condition) -> Rejection {
    match cond {
        Condition::GameTypeIs { .. } => Rejection::new("WRONG_GAME", "wrong game type"),
        Condition::StateIs { .. } => Rejection::new("WRONG_STATE", "wrong state"),
        Condition::IsCurrentPlayer => Rejection::new("NOT_YOUR_TURN", "not your turn"),
        Condition::TileEmpty => Rejection::new("TILE_TAKEN", "tile taken"),
        Condition::TileNotLocked => Rejection::new("LOCKED_CELL", "cell is locked"),
        Condition::ValueInDomain => Rejection::new("BAD_VALUE", "value outside the domain"),
        Condition::HasMinPlayers => Rejection::new("NOT_ENOUGH_PLAYERS", "not enough players"),
        Condition::LegalSymbolPlacement => Rejection::new("ILLEGAL_PLACEMENT", "illegal placement"),
        other => Rejection::new("CONDITION_FAILED", format!("{} does not hold", other.kind_name())),
    }
}

/// Dispatches a player's event, turning "nothing fired" into a
/// [`Rejection`]. Tile clicks must come from a joined player.
pub fn submit_event(rg: &RunningGame, ev: &Event) -> std::result::Result<Dispatch, Rejection> {
    if ev.selector() == EventSelector::TileClick {
        match ev.actor {
            Some(id) if rg.player(id).is_some() => {}
            _ => return Err(Rejection::new("UNKNOWN_PLAYER", "unknown player")),
        }
    }
    match dispatch_event(rg, ev) {
        Ok(d) if !d.fired.is_empty() => Ok(d),
        Ok(_) => Err(explain_rejection(rg, ev)),
        Err(e) => Err(Rejection::new("INVALID_EVENT", e.to_string())),
    }
}

fn check_event(rg: &RunningGame, ev: &Event) -> Result<()> {
    if let EventKind::TileClick { coord, value } = ev.kind {
        rg.board().get(coord)?;
        if let Some(v) = value {
            if v != 0 && !rg.definition().value_domain.contains(v) {
                return Err(GameError::InvalidValue(v));
            }
        }
    }
    Ok(())
}

struct Run {
    game: RunningGame,
    commands: Vec<CommandKind>,
    fired: Vec<String>,
}

impl Run {
    fn new(game: RunningGame) -> Self {
        Self { game, commands: Vec::new(), fired: Vec::new() }
    }

    fn matching(&mut self, ev: &Event) -> Result<()> {
        let def = self.game.definition().clone();
        for rule in def.rules.iter().filter(|r| r.on == Some(ev.selector())) {
            self.rule(rule, ev, 0)?;
        }
        Ok(())
    }

    fn rule(&mut self, rule: &Rule, ev: &Event, depth: usize) -> Result<bool> {
        let def = self.game.definition().clone();
        if depth > def.rules.len() {
            return Err(GameError::Semantics(format!("component cycle through {:?}", rule.name)));
        }
        for cond in &rule.conditions {
            if !eval_condition(&self.game, ev, cond)? {
                return Ok(false);
            }
        }
        for act in &rule.actions {
            let cmds = apply_in_place(&mut self.game, ev, act)?;
            self.commands.extend(cmds);
        }
        self.fired.push(rule.name.clone());
        for name in &rule.components {
            let component = def.rule(name).ok_or_else(|| GameError::UnknownRule(name.clone()))?;
            self.rule(component, ev, depth + 1)?;
        }
        Ok(true)
    }
}

fn apply_in_place(game: &mut RunningGame, ev: &Event, act: &Action) -> Result<Vec<CommandKind>> {
    let semantics = game.definition().semantics;
    let tile = || ev.coord().ok_or_else(|| GameError::MissingContext(format!("{act:?}")));
    let require_started = |game: &RunningGame| {
        if game.state() == GameState::Started {
            Ok(())
        } else {
            Err(GameError::WrongState(game.state().to_string()))
        }
    };
    Ok(match act {
        Action::SetStateStarted => {
            if game.state() != GameState::NotStarted {
                return Err(GameError::WrongState(game.state().to_string()));
            }
            game.set_state(GameState::Started);
            let mut cmds = vec![CommandKind::SetState { state: GameState::Started }];
            if let Some(first) = game.players().first().map(|p| p.id) {
                game.set_current_index(0);
                cmds.push(CommandKind::SetCurrentPlayer { player: first });
            }
            cmds
        }
        Action::SetTileToCurrentPlayer => {
            if semantics != Semantics::Ownership {
                return Err(GameError::Semantics("SetTileToCurrentPlayer needs ownership semantics".into()));
            }
            require_started(game)?;
            let coord = tile()?;
            let owner = game
                .current_player_id()
                .ok_or_else(|| GameError::WrongState("no current player".into()))?;
            game.board_mut().set(coord, owner)?;
            vec![CommandKind::SetTile { coord, value: owner }]
        }
        Action::SetTileToEventValue => {
            if semantics != Semantics::Symbols {
                return Err(GameError::Semantics("SetTileToEventValue needs symbols semantics".into()));
            }
            let coord = tile()?;
            let value = ev
                .value()
                .ok_or_else(|| GameError::MissingContext("SetTileToEventValue".into()))?;
            game.board_mut().set(coord, value)?;
            vec![CommandKind::SetTile { coord, value }]
        }
        Action::SwitchPlayer => vec![switch_in_place(game)?],
        Action::SetWinnerCurrent => {
            require_started(game)?;
            match game.current_player_id() {
                Some(p) => declare_winner(game, p),
                None => Vec::new(),
            }
        }
        Action::SetWinnerMatched => {
            require_started(game)?;
            let lines = pattern_lines(game, None)?;
            match winner_in_lines(game.board(), &lines) {
                Some(p) => declare_winner(game, p),
                None => Vec::new(),
            }
        }
        Action::GameOverDraw => {
            require_started(game)?;
            let state = GameState::Terminated(Outcome::Draw);
            game.set_state(state);
            vec![CommandKind::SetState { state }]
        }
        Action::SendMessage { text } => vec![CommandKind::Message { text: text.clone() }],
    })
}

fn declare_winner(game: &mut RunningGame, player: PlayerId) -> Vec<CommandKind> {
    let state = GameState::Terminated(Outcome::Winner(player));
    game.set_state(state);
    vec![CommandKind::SetWinner { player }, CommandKind::SetState { state }]
}

fn switch_in_place(game: &mut RunningGame) -> Result<CommandKind> {
    if game.state() != GameState::Started {
        return Err(GameError::WrongState(game.state().to_string()));
    }
    let n = game.players().len();
    let current = game
        .current_player_index()
        .filter(|_| n > 0)
        .ok_or_else(|| GameError::WrongState("no players".into()))?;
    let next = match game.definition().turn_policy {
        TurnPolicy::RoundRobin => (current + 1) % n,
        TurnPolicy::Random if n == 1 => current,
        TurnPolicy::Random => {
            // uniform over the other n - 1 players
            let (seed, draw) = game.next_draw();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(draw);
            let k = rng.gen_range(0..n - 1);
            if k >= current { k + 1 } else { k }
        }
    };
    game.set_current_index(next);
    Ok(CommandKind::SetCurrentPlayer { player: game.players()[next].id })
}

fn pattern_lines<'a>(rg: &'a RunningGame, pattern: Option<&Pattern>) -> Result<Cow<'a, [Vec<Coord>]>> {
    let def = rg.definition();
    match pattern {
        Some(p) => Ok(Cow::Owned(expand_pattern(p, def.rows, def.cols)?)),
        None => rg
            .win_lines()?
            .map(Cow::Borrowed)
            .ok_or_else(|| GameError::Semantics("definition has no win pattern".into())),
    }
}

fn groups_distinct(rg: &RunningGame, family: GroupFamily) -> Result<bool> {
    let board = rg.board();
    let (rows, cols) = (board.rows(), board.cols());
    let groups: Vec<Vec<Coord>> = match family {
        GroupFamily::Rows => (0..rows).map(|r| (0..cols).map(|c| Coord::new(r, c)).collect()).collect(),
        GroupFamily::Cols => (0..cols).map(|c| (0..rows).map(|r| Coord::new(r, c)).collect()).collect(),
        GroupFamily::Regions => {
            let region = rg
                .definition()
                .region
                .ok_or_else(|| GameError::Semantics("GroupsAllDistinct(regions) without a region".into()))?;
            board
                .coords()
                .filter(|&c| region.origin(c) == c)
                .map(|o| {
                    (0..region.rows)
                        .flat_map(|dr| (0..region.cols).map(move |dc| Coord::new(o.row + dr, o.col + dc)))
                        .collect()
                })
                .collect()
        }
    };
    Ok(groups.iter().all(|g| {
        let mut seen = std::collections::HashSet::new();
        g.iter()
            .filter_map(|&c| board.get(c).ok())
            .filter(|&v| v != 0)
            .all(|v| seen.insert(v))
    }))
}
