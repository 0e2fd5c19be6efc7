mod common;

use boardkit_core::builtin::{
    sample_sudoku_givens, sudoku_definition, tictactoe_definition, SudokuParams, TicTacToeParams,
};
use boardkit_core::{
    parse_game_definition, serialize_definition, validate_definition, Diagnostic, DiagnosticCode,
    GameDefinition, TurnPolicy,
};
use common::ttt;
use serde_json::{json, Value};

fn codes(diags: &[Diagnostic]) -> Vec<DiagnosticCode> {
    diags.iter().map(|d| d.code).collect()
}

/// Parses `def` after `edit` has been applied to its JSON form.
fn parse_edited(def: &GameDefinition, edit: impl FnOnce(&mut Value)) -> Result<GameDefinition, Vec<Diagnostic>> {
    let mut v: Value = serde_json::from_str(&serialize_definition(def)).unwrap();
    edit(&mut v);
    parse_game_definition(&v.to_string())
}

#[test]
fn generated_definitions_always_validate() {
    for rows in 1..=8 {
        for cols in 1..=8 {
            for len in 1..=rows.max(cols) {
                for players in 2..=5 {
                    for policy in [TurnPolicy::RoundRobin, TurnPolicy::Random] {
                        let p = TicTacToeParams::new(rows, cols, len, players, policy);
                        let def = tictactoe_definition(&p).unwrap();
                        assert!(validate_definition(&def).is_empty(), "{}", def.name);
                        let text = serialize_definition(&def);
                        assert_eq!(parse_game_definition(&text).unwrap(), def);
                    }
                }
            }
        }
    }
    for side in [1, 4, 9, 16] {
        for players in 1..=3 {
            let mut p = SudokuParams::empty(side);
            p.players = players;
            let def = sudoku_definition(&p).unwrap();
            assert!(validate_definition(&def).is_empty(), "{}", def.name);
            assert_eq!(parse_game_definition(&serialize_definition(&def)).unwrap(), def);
        }
    }
    let def = sudoku_definition(&SudokuParams::with_givens(9, sample_sudoku_givens())).unwrap();
    assert!(validate_definition(&def).is_empty());
}

#[test]
fn generator_names_and_shapes() {
    let def = ttt(3, 3, 3, 2);
    assert_eq!(def.name, "ttt-3x3");
    assert_eq!((def.min_players, def.max_players), (2, 2));
    assert_eq!(ttt(4, 4, 4, 2).name, "ttt-4x4-len4");
    assert_eq!(ttt(3, 3, 3, 4).name, "ttt-3x3-4p");
    assert!(sudoku_definition(&SudokuParams::empty(6)).is_err());
    assert!(tictactoe_definition(&TicTacToeParams::new(3, 3, 3, 1, TurnPolicy::RoundRobin)).is_err());
    let clash = vec![vec![1, 1, 0, 0], vec![0; 4], vec![0; 4], vec![0; 4]];
    assert!(sudoku_definition(&SudokuParams::with_givens(4, clash)).is_err());
}

#[test]
fn serialization_is_canonical() {
    let def = ttt(4, 4, 3, 2);
    let text = serialize_definition(&def);
    assert!(text.ends_with("}\n"));
    assert!(text.starts_with("{\n  \"cols\": 4,"));
    // key order in the input does not matter
    let v: Value = serde_json::from_str(&text).unwrap();
    let mut pairs: Vec<(String, Value)> = v.as_object().unwrap().clone().into_iter().collect();
    pairs.reverse();
    let shuffled = format!(
        "{{{}}}",
        pairs.iter().map(|(k, v)| format!("{}:{}", json!(k), v)).collect::<Vec<_>>().join(",")
    );
    assert_eq!(serialize_definition(&parse_game_definition(&shuffled).unwrap()), text);
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let diags = parse_game_definition("{\n  \"name\": \"x\",\n  oops\n}").unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::Parse]);
    assert_eq!(diags[0].location.as_deref(), Some("3:3"));
}

#[test]
fn unknown_fields_and_missing_fields() {
    let def = ttt(3, 3, 3, 2);
    let diags = parse_edited(&def, |v| v["colour"] = json!("red")).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::Parse]);
    let diags = parse_edited(&def, |v| {
        v.as_object_mut().unwrap().remove("rows");
    })
    .unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::Parse]);
    let diags = parse_edited(&def, |v| v["rules"][1]["on"] = json!("Teleport")).unwrap_err();
    assert_eq!(diags[0].location.as_deref(), Some("/rules/1/on"));
}

#[test]
fn unknown_condition_and_action() {
    let def = ttt(3, 3, 3, 2);
    let diags = parse_edited(&def, |v| v["rules"][1]["conditions"][2] = json!({"kind": "IsMoonFull"})).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::UnknownCondition]);
    assert_eq!(diags[0].location.as_deref(), Some("/rules/1/conditions/2"));
    let diags = parse_edited(&def, |v| v["rules"][0]["actions"][0] = json!({"kind": "Explode"})).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::UnknownAction]);
    assert_eq!(diags[0].location.as_deref(), Some("/rules/0/actions/0"));
    // a known kind with bad fields is a parse error, not an unknown kind
    let diags = parse_edited(&def, |v| v["rules"][0]["conditions"][0] = json!({"kind": "GameTypeIs"})).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::Parse]);
}

#[test]
fn rule_graph_errors() {
    let def = ttt(3, 3, 3, 2);
    let diags = parse_edited(&def, |v| v["rules"][1]["components"][0] = json!("Check Loser")).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::UnknownRule]);
    assert_eq!(diags[0].location.as_deref(), Some("/rules/1/components/0"));
    let diags = parse_edited(&def, |v| v["rules"][3]["components"] = json!(["Switch Player"])).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::Cycle]);
}

#[test]
fn bounds_and_semantics_errors() {
    let def = ttt(3, 3, 3, 2);
    let diags = parse_edited(&def, |v| v["min_players"] = json!(3)).unwrap_err();
    assert!(codes(&diags).contains(&DiagnosticCode::PlayerBounds));
    let diags = parse_edited(&def, |v| v["rows"] = json!(0)).unwrap_err();
    assert!(codes(&diags).contains(&DiagnosticCode::OutOfBounds));
    let diags = parse_edited(&def, |v| v["win_pattern"] = json!({"tiles": [[[0, 0], [3, 0]]]})).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::OutOfBounds]);
    let diags = parse_edited(&def, |v| v["semantics"] = json!("symbols")).unwrap_err();
    assert!(codes(&diags).contains(&DiagnosticCode::Semantics));
    // a tile condition on an event without a tile
    let diags = parse_edited(&def, |v| v["rules"][0]["conditions"][0] = json!({"kind": "TileEmpty"})).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::Semantics]);
    assert_eq!(diags[0].location.as_deref(), Some("/rules/0/conditions/0"));
}

#[test]
fn region_errors() {
    let def = sudoku_definition(&SudokuParams::empty(4)).unwrap();
    let diags = parse_edited(&def, |v| v["region"] = json!({"rows": 3, "cols": 3})).unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::RegionTiling]);
    let diags = parse_edited(&def, |v| v["givens"] = json!([[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]))
        .unwrap_err();
    assert_eq!(codes(&diags), vec![DiagnosticCode::Semantics]);
}

#[test]
fn diagnostics_serialize_with_string_codes() {
    let def = ttt(3, 3, 3, 2);
    let diags = parse_edited(&def, |v| v["rules"][1]["components"][0] = json!("Nope")).unwrap_err();
    let v = serde_json::to_value(&diags).unwrap();
    assert_eq!(v[0]["code"], "E_UNKNOWN_RULE");
    assert_eq!(v[0]["location"], "/rules/1/components/0");
}
