use std::io::Write;
use std::path::Path;

use boardkit_core::analyzer::{
    min_players_without_winner, ontology_distance_weighted, winnable, DistanceWeights, FeatureVector,
    MinPlayersResult, SearchBudget, Verdict,
};
use boardkit_core::{GameDefinition, GameError, Semantics};
use clap::Subcommand;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::{emit, emit_json, load_definition, CmdResult, Exit, EXIT_INVALID, EXIT_UNSUPPORTED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum AnalyzeMode {
    /// Can some sequence of legal moves produce a winner?
    Winnable {
        #[arg(long)]
        players: usize,
    },
    /// Smallest player count (2..=max) at which nobody can win.
    MinPlayers {
        #[arg(long)]
        max: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub players: usize,
    pub verdict: Verdict,
    pub states_explored: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AnalyzeReport {
    Winnable {
        definition: String,
        players: usize,
        verdict: Verdict,
        states_explored: u64,
        budget: u64,
        budget_exhausted: bool,
    },
    MinPlayers {
        definition: String,
        max: usize,
        result: MinPlayersResult,
        scanned: Vec<ScanEntry>,
        states_explored: u64,
        budget: u64,
        budget_exhausted: bool,
    },
}

fn unsupported(def: &GameDefinition) -> Exit {
    Exit::new(
        EXIT_UNSUPPORTED,
        format!(
            "cannot analyze {}: playability search needs an ownership game with a win pattern, and this one uses symbols",
            def.name
        ),
    )
}

fn analysis_error(def: &GameDefinition, e: GameError) -> Exit {
    match e {
        GameError::Semantics(_) => unsupported(def),
        other => Exit::new(EXIT_INVALID, other.to_string()),
    }
}

pub(crate) fn analyze(file: &Path, mode: AnalyzeMode, budget: Option<u64>, json: bool, out: &mut dyn Write) -> CmdResult {
    let def = load_definition(file)?;
    if def.semantics == Semantics::Symbols {
        return Err(unsupported(&def));
    }
    let budget = budget.map(|max_states| SearchBudget { max_states }).unwrap_or_default();
    let report = match mode {
        AnalyzeMode::Winnable { players } => {
            if players == 0 {
                return Err(Exit::new(EXIT_INVALID, "--players must be at least 1"));
            }
            let r = winnable(&def, players, budget).map_err(|e| analysis_error(&def, e))?;
            AnalyzeReport::Winnable {
                definition: def.name.clone(),
                players,
                verdict: r.verdict,
                states_explored: r.states_explored,
                budget: budget.max_states,
                budget_exhausted: r.verdict == Verdict::Unknown,
            }
        }
        AnalyzeMode::MinPlayers { max } => {
            let r = min_players_without_winner(&def, max, budget).map_err(|e| analysis_error(&def, e))?;
            AnalyzeReport::MinPlayers {
                definition: def.name.clone(),
                max,
                states_explored: r.states_explored(),
                budget_exhausted: matches!(r.result, MinPlayersResult::Unknown { .. }),
                result: r.result,
                scanned: r
                    .scanned
                    .iter()
                    .map(|(n, s)| ScanEntry { players: *n, verdict: s.verdict, states_explored: s.states_explored })
                    .collect(),
                budget: budget.max_states,
            }
        }
    };
    if json {
        return emit_json(out, &report);
    }
    match &report {
        AnalyzeReport::Winnable { verdict, states_explored, budget, budget_exhausted, .. } => {
            emit(out, verdict_word(*verdict))?;
            emit(out, &budget_line(*states_explored, *budget, *budget_exhausted))
        }
        AnalyzeReport::MinPlayers { result, scanned, states_explored, budget, budget_exhausted, .. } => {
            let answer = match result {
                MinPlayersResult::Found { players } => players.to_string(),
                MinPlayersResult::NoneFound => "none".into(),
                MinPlayersResult::Unknown { .. } => "unknown".into(),
            };
            emit(out, &answer)?;
            for s in scanned {
                emit(
                    out,
                    &format!("  {} players: {} ({} states)", s.players, verdict_word(s.verdict), s.states_explored),
                )?;
            }
            emit(out, &budget_line(*states_explored, *budget, *budget_exhausted))
        }
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Unknown => "unknown",
    }
}

fn budget_line(explored: u64, budget: u64, exhausted: bool) -> String {
    let status = if exhausted { "exhausted" } else { "within budget" };
    format!("states explored: {explored} (budget {budget} per player count, {status})")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub a: String,
    pub b: String,
    pub distance: f64,
    pub features: BTreeMap<String, f64>,
    pub weights: BTreeMap<String, f64>,
}

pub(crate) fn distance(a: &Path, b: &Path, weights: Option<Vec<f64>>, json: bool, out: &mut dyn Write) -> CmdResult {
    let (da, db) = (load_definition(a)?, load_definition(b)?);
    let weights = match weights {
        None => DistanceWeights::default(),
        Some(w) => {
            let arr: [f64; FeatureVector::FEATURES] = w
                .try_into()
                .map_err(|_| Exit::new(EXIT_INVALID, "--weights takes six numbers"))?;
            if arr.iter().any(|x| !x.is_finite() || *x < 0.0) || arr.iter().sum::<f64>() <= 0.0 {
                return Err(Exit::new(EXIT_INVALID, "weights must be non-negative with a positive sum"));
            }
            DistanceWeights(arr)
        }
    };
    let per_feature = FeatureVector::of(&da).distances(&FeatureVector::of(&db));
    let names = FeatureVector::NAMES.iter().map(|n| n.to_string());
    let report = DistanceReport {
        a: da.name.clone(),
        b: db.name.clone(),
        distance: ontology_distance_weighted(&da, &db, &weights),
        features: names.clone().zip(per_feature).collect(),
        weights: names.zip(weights.0).collect(),
    };
    if json {
        return emit_json(out, &report);
    }
    emit(out, &format!("{:.6}", report.distance))?;
    for (name, d) in FeatureVector::NAMES.iter().zip(per_feature) {
        emit(out, &format!("  {name}: {d:.6}"))?;
    }
    Ok(())
}
