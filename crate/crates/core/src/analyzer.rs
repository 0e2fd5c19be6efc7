//! Playability analysis by exhaustive search, and a feature-based distance
//! between game definitions for recognising variants of one game type.
//!
//! "Winnable" is existential: some sequence of legal moves, under
//! round-robin turns, ends with a winner. The search is a depth-first walk
//! over reachable positions driven by the definition's own rules, memoized
//! on (board, current player). Positions already explored without finding a
//! win are not revisited, which is sound because the rules only look at the
//! board and whose turn it is.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::board::CellValue;
use crate::error::{GameError, Result};
use crate::game::{Event, RunningGame};
use crate::model::{GameDefinition, GameState, Outcome, PlayerKind, Semantics, TurnPolicy, ValueDomain};
use crate::rules::{dispatch_event, LineFamily, Pattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Distinct positions the search may expand before giving up.
    pub max_states: u64,
}

impl SearchBudget {
    pub const DEFAULT: SearchBudget = SearchBudget { max_states: 5_000_000 };
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    /// The budget ran out before the question was settled.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub verdict: Verdict,
    pub states_explored: u64,
}

/// Tile clicks by the current player that would fire at least one rule.
pub fn legal_events(rg: &RunningGame) -> Vec<Event> {
    if rg.state().is_terminated() {
        return Vec::new();
    }
    candidate_events(rg)
        .into_iter()
        .filter(|ev| dispatch_event(rg, ev).is_ok_and(|d| !d.fired.is_empty()))
        .collect()
}

fn candidate_events(rg: &RunningGame) -> Vec<Event> {
    let Some(actor) = rg.current_player_id() else {
        return Vec::new();
    };
    let def = rg.definition();
    let values: Vec<Option<CellValue>> = match def.semantics {
        Semantics::Ownership => vec![None],
        Semantics::Symbols => (0..=def.value_domain.hi).map(Some).collect(),
    };
    rg.board()
        .coords()
        .flat_map(|c| values.iter().map(move |&v| Event::tile_click(actor, c, v)))
        .collect()
}

/// The definition re-bounded for `players` participants with round-robin
/// turns, as the search assumes.
fn analysis_definition(def: &GameDefinition, players: usize) -> Result<GameDefinition> {
    if def.semantics != Semantics::Ownership {
        return Err(GameError::Semantics(
            "playability search applies to ownership games; symbols games are won by completion".into(),
        ));
    }
    if players < 1 {
        return Err(GameError::InvalidParams("need at least one player".into()));
    }
    let mut def = def.clone();
    def.min_players = players;
    def.max_players = players;
    def.value_domain = ValueDomain { lo: 1, hi: players as CellValue };
    def.turn_policy = TurnPolicy::RoundRobin;
    Ok(def)
}

/// Starts a game of `def` with `players` robots, ready for search.
pub fn started_game(def: &GameDefinition, players: usize) -> Result<RunningGame> {
    let def = analysis_definition(def, players)?;
    let mut game = RunningGame::create(def, "analysis", 0)?;
    for i in 1..=players {
        game.join(format!("Robot{i}"), PlayerKind::Robot)?;
    }
    let mut game = dispatch_event(&game, &Event::game_start())?.game;
    game.forget_history();
    Ok(game)
}

pub fn winnable(def: &GameDefinition, players: usize, budget: SearchBudget) -> Result<SearchReport> {
    let root = started_game(def, players)?;
    let mut search = Search { visited: HashSet::new(), explored: 0, budget };
    let verdict = match search.visit(root)? {
        Some(true) => Verdict::True,
        Some(false) => Verdict::False,
        None => Verdict::Unknown,
    };
    Ok(SearchReport { verdict, states_explored: search.explored })
}

struct Search {
    visited: HashSet<(Vec<CellValue>, Option<usize>)>,
    explored: u64,
    budget: SearchBudget,
}

impl Search {
    /// `Some(found)` when settled, `None` when the budget ran out.
    fn visit(&mut self, game: RunningGame) -> Result<Option<bool>> {
        match game.state() {
            GameState::Terminated(Outcome::Winner(_)) => return Ok(Some(true)),
            GameState::Terminated(_) => return Ok(Some(false)),
            _ => {}
        }
        let key = (game.board().cells().to_vec(), game.current_player_index());
        if !self.visited.insert(key) {
            return Ok(Some(false));
        }
        self.explored += 1;
        if self.explored > self.budget.max_states {
            return Ok(None);
        }
        for ev in candidate_events(&game) {
            let d = dispatch_event(&game, &ev)?;
            if d.fired.is_empty() {
                continue;
            }
            let mut child = d.game;
            child.forget_history();
            match self.visit(child)? {
                Some(false) => {}
                settled_or_unknown => return Ok(settled_or_unknown),
            }
        }
        Ok(Some(false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum MinPlayersResult {
    /// Smallest tested count with no possible winner.
    Found { players: usize },
    /// Every tested count admits a winner.
    NoneFound,
    /// The search budget ran out at this count.
    Unknown { players: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPlayersReport {
    pub result: MinPlayersResult,
    /// `(players, report)` for every count that was searched.
    pub scanned: Vec<(usize, SearchReport)>,
}

impl MinPlayersReport {
    pub fn answer(&self) -> Option<usize> {
        match self.result {
            MinPlayersResult::Found { players } => Some(players),
            _ => None,
        }
    }

    pub fn states_explored(&self) -> u64 {
        self.scanned.iter().map(|(_, r)| r.states_explored).sum()
    }
}

/// Scans player counts 2..=n_max upward for the first that cannot produce a
/// winner.
pub fn min_players_without_winner(
    def: &GameDefinition,
    n_max: usize,
    budget: SearchBudget,
) -> Result<MinPlayersReport> {
    if n_max < 2 {
        return Err(GameError::InvalidParams("n_max must be at least 2".into()));
    }
    let mut scanned = Vec::new();
    for n in 2..=n_max {
        let report = winnable(def, n, budget)?;
        scanned.push((n, report));
        let result = match report.verdict {
            Verdict::False => MinPlayersResult::Found { players: n },
            Verdict::Unknown => MinPlayersResult::Unknown { players: n },
            Verdict::True => continue,
        };
        return Ok(MinPlayersReport { result, scanned });
    }
    Ok(MinPlayersReport { result: MinPlayersResult::NoneFound, scanned })
}

/// Win-pattern shape as a comparable feature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternFingerprint {
    Absent,
    Lines { len: usize, families: Vec<LineFamily> },
    /// Tiles or composite patterns, compared by canonical text.
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub rows: usize,
    pub cols: usize,
    pub pattern: PatternFingerprint,
    pub semantics: Semantics,
    pub turn_policy: TurnPolicy,
    pub min_players: usize,
    pub max_players: usize,
    pub domain_size: usize,
}

impl FeatureVector {
    pub const FEATURES: usize = 6;
    pub const NAMES: [&'static str; Self::FEATURES] =
        ["dims", "pattern", "semantics", "turn_policy", "players", "domain_size"];

    pub fn of(def: &GameDefinition) -> Self {
        let pattern = match &def.win_pattern {
            None => PatternFingerprint::Absent,
            Some(Pattern::Lines { len, families }) => {
                PatternFingerprint::Lines { len: *len, families: families.iter().copied().collect() }
            }
            Some(p) => PatternFingerprint::Other(crate::canonical::to_canonical_json(p)),
        };
        Self {
            rows: def.rows,
            cols: def.cols,
            pattern,
            semantics: def.semantics,
            turn_policy: def.turn_policy,
            min_players: def.min_players,
            max_players: def.max_players,
            domain_size: def.value_domain.size(),
        }
    }

    /// Per-feature distances, each in [0, 1]: board dims, pattern,
    /// semantics, turn policy, player range, value-domain size.
    pub fn distances(&self, other: &Self) -> [f64; Self::FEATURES] {
        let pattern = match (&self.pattern, &other.pattern) {
            (
                PatternFingerprint::Lines { len: a, families: fa },
                PatternFingerprint::Lines { len: b, families: fb },
            ) if fa == fb => relative(*a, *b),
            (a, b) => categorical(a == b),
        };
        [
            (relative(self.rows, other.rows) + relative(self.cols, other.cols)) / 2.0,
            pattern,
            categorical(self.semantics == other.semantics),
            categorical(self.turn_policy == other.turn_policy),
            (relative(self.min_players, other.min_players) + relative(self.max_players, other.max_players)) / 2.0,
            relative(self.domain_size, other.domain_size),
        ]
    }
}

fn relative(x: usize, y: usize) -> f64 {
    let hi = x.max(y);
    if hi == 0 {
        0.0
    } else {
        x.abs_diff(y) as f64 / hi as f64
    }
}

fn categorical(equal: bool) -> f64 {
    if equal {
        0.0
    } else {
        1.0
    }
}

/// Relative weight of each feature in the distance mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceWeights(pub [f64; FeatureVector::FEATURES]);

impl Default for DistanceWeights {
    fn default() -> Self {
        Self([1.0; FeatureVector::FEATURES])
    }
}

pub fn ontology_distance(a: &GameDefinition, b: &GameDefinition) -> f64 {
    ontology_distance_weighted(a, b, &DistanceWeights::default())
}

pub fn ontology_distance_weighted(a: &GameDefinition, b: &GameDefinition, w: &DistanceWeights) -> f64 {
    let d = FeatureVector::of(a).distances(&FeatureVector::of(b));
    let total: f64 = w.0.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    d.iter().zip(w.0).map(|(d, w)| d * w).sum::<f64>() / total
}

pub fn same_type(a: &GameDefinition, b: &GameDefinition, threshold: f64) -> bool {
    ontology_distance(a, b) <= threshold
}
