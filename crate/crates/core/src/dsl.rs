//! The `.game.json` definition format: parsing with located diagnostics,
//! validation of every definition invariant, and canonical serialization.
//!
//! Parsing is two-phase. The document skeleton is decoded strictly (unknown
//! fields are errors), while conditions and actions are decoded one by one
//! so an unknown kind is reported as such, at its own path.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::board::CellValue;
use crate::canonical::to_canonical_json;
use crate::error::GameError;
use crate::model::{GameDefinition, Region, Semantics, TurnPolicy, ValueDomain};
use crate::rules::{
    expand_pattern, validate_rule_graph, Action, Condition, EventSelector, GroupFamily, Pattern,
    Rule, RuleGraphIssue,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagnosticCode {
    #[serde(rename = "E_PARSE")]
    Parse,
    #[serde(rename = "E_UNKNOWN_CONDITION")]
    UnknownCondition,
    #[serde(rename = "E_UNKNOWN_ACTION")]
    UnknownAction,
    #[serde(rename = "E_UNKNOWN_RULE")]
    UnknownRule,
    #[serde(rename = "E_CYCLE")]
    Cycle,
    #[serde(rename = "E_OUT_OF_BOUNDS")]
    OutOfBounds,
    #[serde(rename = "E_PLAYER_BOUNDS")]
    PlayerBounds,
    #[serde(rename = "E_SEMANTICS")]
    Semantics,
    #[serde(rename = "E_REGION_TILING")]
    RegionTiling,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::Parse => "E_PARSE",
            DiagnosticCode::UnknownCondition => "E_UNKNOWN_CONDITION",
            DiagnosticCode::UnknownAction => "E_UNKNOWN_ACTION",
            DiagnosticCode::UnknownRule => "E_UNKNOWN_RULE",
            DiagnosticCode::Cycle => "E_CYCLE",
            DiagnosticCode::OutOfBounds => "E_OUT_OF_BOUNDS",
            DiagnosticCode::PlayerBounds => "E_PLAYER_BOUNDS",
            DiagnosticCode::Semantics => "E_SEMANTICS",
            DiagnosticCode::RegionTiling => "E_REGION_TILING",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
    /// JSON pointer into the document, or `line:col` for syntax errors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, message: impl Into<String>, location: Option<String>) -> Self {
        Self { code, message: message.into(), location }
    }

    fn at(code: DiagnosticCode, location: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(code, message, Some(location.into()))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.code, self.location.as_deref().unwrap_or("-"), self.message)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentSkeleton {
    name: String,
    rows: usize,
    cols: usize,
    semantics: Semantics,
    value_domain: ValueDomain,
    min_players: usize,
    max_players: usize,
    turn_policy: TurnPolicy,
    #[serde(default)]
    win_pattern: Option<Pattern>,
    rules: Vec<RuleSkeleton>,
    #[serde(default)]
    givens: Option<Vec<Vec<CellValue>>>,
    #[serde(default)]
    region: Option<Region>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleSkeleton {
    name: String,
    #[serde(default)]
    on: Option<EventSelector>,
    #[serde(default)]
    conditions: Vec<Value>,
    #[serde(default)]
    actions: Vec<Value>,
    #[serde(default)]
    components: Vec<String>,
}

/// Parses and validates a definition document.
pub fn parse_game_definition(text: &str) -> Result<GameDefinition, Vec<Diagnostic>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic::new(
            DiagnosticCode::Parse,
            e.to_string(),
            Some(format!("{}:{}", e.line(), e.column())),
        )]
    })?;
    let skeleton: DocumentSkeleton = serde_path_to_error::deserialize(value).map_err(|e| {
        let location = pointer(e.path());
        vec![Diagnostic::new(DiagnosticCode::Parse, e.into_inner().to_string(), Some(location))]
    })?;

    let mut diagnostics = Vec::new();
    let mut rules = Vec::with_capacity(skeleton.rules.len());
    for (i, r) in skeleton.rules.into_iter().enumerate() {
        let conditions = decode_items::<Condition>(
            r.conditions,
            Condition::KINDS,
            DiagnosticCode::UnknownCondition,
            &format!("/rules/{i}/conditions"),
            &mut diagnostics,
        );
        let actions = decode_items::<Action>(
            r.actions,
            Action::KINDS,
            DiagnosticCode::UnknownAction,
            &format!("/rules/{i}/actions"),
            &mut diagnostics,
        );
        rules.push(Rule { name: r.name, on: r.on, conditions, actions, components: r.components });
    }
    if !diagnostics.is_empty() {
        return Err(diagnostics);
    }

    let def = GameDefinition {
        name: skeleton.name,
        rows: skeleton.rows,
        cols: skeleton.cols,
        semantics: skeleton.semantics,
        value_domain: skeleton.value_domain,
        min_players: skeleton.min_players,
        max_players: skeleton.max_players,
        turn_policy: skeleton.turn_policy,
        win_pattern: skeleton.win_pattern,
        rules,
        givens: skeleton.givens,
        region: skeleton.region,
    };
    let diagnostics = validate_definition(&def);
    if diagnostics.is_empty() {
        Ok(def)
    } else {
        Err(diagnostics)
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } | Segment::Enum { variant: key } => {
                out.push('/');
                out.push_str(key);
            }
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn decode_items<T: serde::de::DeserializeOwned>(
    items: Vec<Value>,
    known: &[&str],
    unknown_code: DiagnosticCode,
    base: &str,
    diagnostics: &mut Vec<Diagnostic>,
) -> Vec<T> {
    let mut out = Vec::with_capacity(items.len());
    for (j, item) in items.into_iter().enumerate() {
        let location = format!("{base}/{j}");
        let kind = item.get("kind").and_then(Value::as_str).map(str::to_owned);
        match serde_json::from_value::<T>(item) {
            Ok(v) => out.push(v),
            Err(e) => match kind {
                Some(k) if !known.contains(&k.as_str()) => {
                    diagnostics.push(Diagnostic::at(unknown_code, location, format!("unknown kind {k:?}")))
                }
                _ => diagnostics.push(Diagnostic::at(DiagnosticCode::Parse, location, e.to_string())),
            },
        }
    }
    out
}

/// Canonical document text: sorted keys, 2-space indent, arrays in authored
/// order. Structurally equal definitions serialize to identical bytes.
pub fn serialize_definition(def: &GameDefinition) -> String {
    to_canonical_json(def)
}

/// Every invariant a playable definition must satisfy. Empty means valid.
pub fn validate_definition(def: &GameDefinition) -> Vec<Diagnostic> {
    use DiagnosticCode as C;
    let mut out = Vec::new();

    let dims_ok = def.rows >= 1 && def.cols >= 1;
    if !dims_ok {
        out.push(Diagnostic::at(C::OutOfBounds, "/rows", format!("board {}x{} is empty", def.rows, def.cols)));
    }
    if def.min_players < 1 || def.min_players > def.max_players {
        out.push(Diagnostic::at(
            C::PlayerBounds,
            "/min_players",
            format!("need 1 <= min_players <= max_players, got {}..{}", def.min_players, def.max_players),
        ));
    }
    let domain = def.value_domain;
    if domain.lo < 1 || domain.lo > domain.hi {
        out.push(Diagnostic::at(C::Semantics, "/value_domain", format!("bad value domain [{}, {}]", domain.lo, domain.hi)));
    }

    match def.semantics {
        Semantics::Ownership => {
            if domain.lo != 1 || domain.hi as usize != def.max_players {
                out.push(Diagnostic::at(
                    C::Semantics,
                    "/value_domain",
                    format!("ownership games need value domain [1, {}]", def.max_players),
                ));
            }
            if def.win_pattern.is_none() {
                out.push(Diagnostic::at(C::Semantics, "/win_pattern", "ownership games need a win pattern"));
            }
            if def.givens.is_some() {
                out.push(Diagnostic::at(C::Semantics, "/givens", "givens only apply to symbols games"));
            }
            if def.region.is_some() {
                out.push(Diagnostic::at(C::Semantics, "/region", "regions only apply to symbols games"));
            }
        }
        Semantics::Symbols => {
            if def.win_pattern.is_some() {
                out.push(Diagnostic::at(C::Semantics, "/win_pattern", "symbols games have no win pattern"));
            }
        }
    }

    if let (Some(p), true) = (&def.win_pattern, dims_ok) {
        check_pattern(p, def, "/win_pattern", &mut out);
    }

    if let Some(region) = def.region {
        let tiles = region.rows >= 1
            && region.cols >= 1
            && region.rows * region.cols == domain.size()
            && def.rows % region.rows == 0
            && def.cols % region.cols == 0;
        if !tiles {
            out.push(Diagnostic::at(
                C::RegionTiling,
                "/region",
                format!(
                    "{}x{} regions do not tile a {}x{} board with {} symbols",
                    region.rows, region.cols, def.rows, def.cols, domain.size()
                ),
            ));
        }
    }

    if let Some(givens) = &def.givens {
        check_givens(givens, def, &mut out);
    }

    check_rules(def, &mut out);
    out
}

fn check_pattern(p: &Pattern, def: &GameDefinition, location: &str, out: &mut Vec<Diagnostic>) {
    if let Err(e) = expand_pattern(p, def.rows, def.cols) {
        let message = match e {
            GameError::OutOfBounds { coord, .. } => format!("tile {coord} is off the {}x{} board", def.rows, def.cols),
            other => other.to_string(),
        };
        out.push(Diagnostic::at(DiagnosticCode::OutOfBounds, location, message));
    }
}

fn check_givens(givens: &[Vec<CellValue>], def: &GameDefinition, out: &mut Vec<Diagnostic>) {
    use DiagnosticCode as C;
    if givens.len() != def.rows || givens.iter().any(|r| r.len() != def.cols) {
        out.push(Diagnostic::at(C::OutOfBounds, "/givens", format!("givens grid is not {}x{}", def.rows, def.cols)));
        return;
    }
    for (r, row) in givens.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v != 0 && !def.value_domain.contains(v) {
                out.push(Diagnostic::at(C::Semantics, format!("/givens/{r}/{c}"), format!("given {v} is outside the value domain")));
            }
        }
    }
    if let Some(conflict) = givens_conflict(givens, def.region) {
        out.push(Diagnostic::at(C::Semantics, "/givens", conflict));
    }
}

/// First repeated nonzero given within a row, column or region.
pub(crate) fn givens_conflict(givens: &[Vec<CellValue>], region: Option<Region>) -> Option<String> {
    let cols = givens.first().map_or(0, Vec::len);
    let mut seen: HashMap<(u8, usize, CellValue), (usize, usize)> = HashMap::new();
    for (r, row) in givens.iter().enumerate() {
        for (c, &v) in row.iter().enumerate().filter(|(_, &v)| v != 0) {
            let mut groups = vec![(0u8, r, "row"), (1, c, "column")];
            if let Some(reg) = region.filter(|reg| reg.rows >= 1 && reg.cols >= 1) {
                let idx = (r / reg.rows) * cols.div_ceil(reg.cols) + c / reg.cols;
                groups.push((2, idx, "region"));
            }
            for (family, idx, label) in groups {
                if let Some(&(pr, pc)) = seen.get(&(family, idx, v)) {
                    return Some(format!("{v} repeats in a {label}: ({pr},{pc}) and ({r},{c})"));
                }
                seen.insert((family, idx, v), (r, c));
            }
        }
    }
    None
}

fn check_rules(def: &GameDefinition, out: &mut Vec<Diagnostic>) {
    use DiagnosticCode as C;
    let mut names = HashSet::new();
    for (i, rule) in def.rules.iter().enumerate() {
        if !names.insert(rule.name.as_str()) {
            out.push(Diagnostic::at(C::Semantics, format!("/rules/{i}/name"), format!("duplicate rule name {:?}", rule.name)));
        }
    }

    let position = |name: &str| def.rules.iter().position(|r| r.name == name);
    for issue in validate_rule_graph(&def.rules) {
        match issue {
            RuleGraphIssue::UnknownRule { rule, component } => {
                let i = position(&rule).unwrap_or(0);
                let j = def.rules[i].components.iter().position(|c| *c == component).unwrap_or(0);
                out.push(Diagnostic::at(
                    C::UnknownRule,
                    format!("/rules/{i}/components/{j}"),
                    format!("rule {rule:?} names unknown component {component:?}"),
                ));
            }
            RuleGraphIssue::CycleDetected(cycle) => {
                let i = position(&cycle[0]).unwrap_or(0);
                out.push(Diagnostic::at(
                    C::Cycle,
                    format!("/rules/{i}/components"),
                    format!("component cycle: {} -> {}", cycle.join(" -> "), cycle[0]),
                ));
            }
        }
    }

    let contexts = event_contexts(def);
    for (i, rule) in def.rules.iter().enumerate() {
        let ctx = &contexts[i];
        let tile_safe = ctx.iter().all(|s| *s == EventSelector::TileClick);
        for (j, cond) in rule.conditions.iter().enumerate() {
            let location = format!("/rules/{i}/conditions/{j}");
            if cond.needs_tile() && !tile_safe {
                out.push(Diagnostic::at(C::Semantics, &location, format!("{} needs a tile event", cond.kind_name())));
            }
            match cond {
                Condition::PatternOwnedBySamePlayer { pattern: Some(p) } => {
                    check_pattern(p, def, &format!("{location}/pattern"), out)
                }
                Condition::PatternOwnedBySamePlayer { pattern: None } if def.win_pattern.is_none() => {
                    out.push(Diagnostic::at(C::Semantics, &location, "no pattern given and the definition has no win pattern"))
                }
                Condition::GroupsAllDistinct { groups: GroupFamily::Regions } if def.region.is_none() => {
                    out.push(Diagnostic::at(C::Semantics, &location, "region groups need a region"))
                }
                Condition::LegalSymbolPlacement if def.semantics != Semantics::Symbols => {
                    out.push(Diagnostic::at(C::Semantics, &location, "LegalSymbolPlacement needs symbols semantics"))
                }
                _ => {}
            }
        }
        for (j, act) in rule.actions.iter().enumerate() {
            let location = format!("/rules/{i}/actions/{j}");
            if act.needs_tile() && !tile_safe {
                out.push(Diagnostic::at(C::Semantics, &location, format!("{act:?} needs a tile event")));
            }
            let mismatch = match act {
                Action::SetTileToCurrentPlayer => def.semantics != Semantics::Ownership,
                Action::SetTileToEventValue => def.semantics != Semantics::Symbols,
                Action::SetWinnerMatched => def.win_pattern.is_none(),
                _ => false,
            };
            if mismatch {
                out.push(Diagnostic::at(C::Semantics, &location, format!("{act:?} does not fit {:?} semantics", def.semantics)));
            }
        }
    }
}

/// For each rule, the event kinds it can run under: its own selector plus
/// those of every rule that (transitively) lists it as a component.
fn event_contexts(def: &GameDefinition) -> Vec<HashSet<EventSelector>> {
    let mut ctx: Vec<HashSet<EventSelector>> =
        def.rules.iter().map(|r| r.on.into_iter().collect()).collect();
    let edges: Vec<(usize, usize)> = def
        .rules
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            r.components
                .iter()
                .filter_map(|c| def.rules.iter().position(|x| x.name == *c))
                .map(move |j| (i, j))
                .collect::<Vec<_>>()
        })
        .collect();
    loop {
        let mut changed = false;
        for &(from, to) in &edges {
            let add: Vec<_> = ctx[from].difference(&ctx[to]).copied().collect();
            if !add.is_empty() {
                ctx[to].extend(add);
                changed = true;
            }
        }
        if !changed {
            return ctx;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{sudoku_definition, tictactoe_definition, SudokuParams, TicTacToeParams};
    use crate::board::Coord;

    fn codes(d: &[Diagnostic]) -> Vec<DiagnosticCode> {
        d.iter().map(|d| d.code).collect()
    }

    #[test]
    fn syntax_error() {
        let err = parse_game_definition("{").unwrap_err();
        assert_eq!(codes(&err), vec![DiagnosticCode::Parse]);
        assert!(err[0].location.is_some());
    }

    #[test]
    fn unknown_condition_located() {
        let def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        let text = serialize_definition(&def).replacen("\"TileEmpty\"", "\"IsWizard\"", 1);
        let err = parse_game_definition(&text).unwrap_err();
        assert_eq!(codes(&err), vec![DiagnosticCode::UnknownCondition]);
        assert!(err[0].location.as_deref().unwrap().starts_with("/rules/1/conditions/"));
    }

    #[test]
    fn unknown_action_and_field() {
        let def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        let text = serialize_definition(&def).replacen("\"SwitchPlayer\"", "\"Teleport\"", 1);
        assert_eq!(codes(&parse_game_definition(&text).unwrap_err()), vec![DiagnosticCode::UnknownAction]);

        let text = serialize_definition(&def).replacen("\"cols\": 3", "\"cols\": 3,\n  \"colour\": 1", 1);
        let err = parse_game_definition(&text).unwrap_err();
        assert_eq!(codes(&err), vec![DiagnosticCode::Parse]);
    }

    #[test]
    fn builtin_validates_and_round_trips() {
        let def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        assert!(validate_definition(&def).is_empty());
        let text = serialize_definition(&def);
        let back = parse_game_definition(&text).unwrap();
        assert_eq!(back, def);
        assert_eq!(serialize_definition(&back), text);
    }

    #[test]
    fn out_of_bounds_tiles() {
        let mut def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        def.win_pattern = Some(Pattern::Tiles(vec![vec![Coord::new(9, 9)]]));
        assert_eq!(codes(&validate_definition(&def)), vec![DiagnosticCode::OutOfBounds]);
    }

    #[test]
    fn region_tiling() {
        let mut def = sudoku_definition(&SudokuParams::empty(4)).unwrap();
        def.region = Some(Region { rows: 2, cols: 3 });
        assert_eq!(codes(&validate_definition(&def)), vec![DiagnosticCode::RegionTiling]);
    }

    #[test]
    fn player_bounds_and_semantics() {
        let mut def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        def.min_players = 0;
        assert_eq!(codes(&validate_definition(&def)), vec![DiagnosticCode::PlayerBounds]);

        let mut def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        def.rules[1].actions = vec![Action::SetTileToEventValue];
        assert_eq!(codes(&validate_definition(&def)), vec![DiagnosticCode::Semantics]);
    }

    #[test]
    fn tile_condition_outside_tile_context() {
        let mut def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        def.rules[0].conditions.push(Condition::TileEmpty);
        let d = validate_definition(&def);
        assert_eq!(codes(&d), vec![DiagnosticCode::Semantics]);
        assert_eq!(d[0].location.as_deref(), Some("/rules/0/conditions/3"));
    }

    #[test]
    fn cycles_and_unknown_components() {
        let mut def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        def.rules[2].components.push("Tile Click".into());
        assert_eq!(codes(&validate_definition(&def)), vec![DiagnosticCode::Cycle]);

        let mut def = tictactoe_definition(&TicTacToeParams::standard()).unwrap();
        def.rules[1].components.push("nosuch".into());
        assert_eq!(codes(&validate_definition(&def)), vec![DiagnosticCode::UnknownRule]);
    }
}
