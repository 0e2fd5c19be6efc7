//! Generators for the case-study games: tic-tac-toe along its extension axes
//! (board size, line length, player count, turn policy) and Sudoku.

use crate::board::{Board, CellValue, Coord};
use crate::dsl::givens_conflict;
use crate::error::{GameError, Result};
use crate::model::{GameDefinition, Region, Semantics, StateKind, TurnPolicy, ValueDomain};
use crate::rules::{Action, Condition, EventSelector, GroupFamily, Pattern, Rule};

pub const GAME_START: &str = "Game Start";
pub const TILE_CLICK: &str = "Tile Click";
pub const CHECK_WINNER: &str = "Check Winner";
pub const SWITCH_PLAYER: &str = "Switch Player";
pub const CHECK_DRAW: &str = "Check Draw";
pub const CHECK_SOLVED: &str = "Check Solved";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TicTacToeParams {
    pub rows: usize,
    pub cols: usize,
    pub line_len: usize,
    pub players: usize,
    pub turn_policy: TurnPolicy,
    /// Overrides the generated name.
    pub name: Option<String>,
}

impl TicTacToeParams {
    pub fn new(rows: usize, cols: usize, line_len: usize, players: usize, turn_policy: TurnPolicy) -> Self {
        Self { rows, cols, line_len, players, turn_policy, name: None }
    }

    /// 3×3, three in a row, two players, alternating turns.
    pub fn standard() -> Self {
        Self::new(3, 3, 3, 2, TurnPolicy::RoundRobin)
    }

    /// `ttt-3x3` for the standard game; other variants append `-len{L}`,
    /// `-{p}p` and `-random` as they differ from it.
    pub fn default_name(&self) -> String {
        let mut name = format!("ttt-{}x{}", self.rows, self.cols);
        if (self.rows, self.cols, self.line_len) != (3, 3, 3) {
            name.push_str(&format!("-len{}", self.line_len));
        }
        if self.players != 2 {
            name.push_str(&format!("-{}p", self.players));
        }
        if self.turn_policy == TurnPolicy::Random {
            name.push_str("-random");
        }
        name
    }
}

pub fn tictactoe_definition(p: &TicTacToeParams) -> Result<GameDefinition> {
    if p.rows < 1 || p.cols < 1 {
        return Err(GameError::InvalidParams(format!("board {}x{} is empty", p.rows, p.cols)));
    }
    if p.line_len < 1 || p.line_len > p.rows.max(p.cols) {
        return Err(GameError::InvalidParams(format!(
            "line length {} does not fit a {}x{} board",
            p.line_len, p.rows, p.cols
        )));
    }
    if p.players < 2 {
        return Err(GameError::InvalidParams("tic-tac-toe needs at least 2 players".into()));
    }
    let name = p.name.clone().unwrap_or_else(|| p.default_name());
    let rules = vec![
        game_start_rule(&name),
        Rule::new(TILE_CLICK, Some(EventSelector::TileClick))
            .when(Condition::GameTypeIs { name: name.clone() })
            .when(Condition::StateIs { state: StateKind::Started })
            .when(Condition::IsCurrentPlayer)
            .when(Condition::TileEmpty)
            .then(Action::SetTileToCurrentPlayer)
            .component(CHECK_WINNER)
            .component(SWITCH_PLAYER),
        Rule::new(CHECK_WINNER, None)
            .when(Condition::StateIs { state: StateKind::Started })
            .when(Condition::PatternOwnedBySamePlayer { pattern: None })
            .then(Action::SetWinnerCurrent),
        switch_player_rule(),
        Rule::new(CHECK_DRAW, Some(EventSelector::TerminationCheck))
            .when(Condition::StateIs { state: StateKind::Started })
            .when(Condition::BoardFull)
            .then(Action::GameOverDraw),
    ];
    Ok(GameDefinition {
        name,
        rows: p.rows,
        cols: p.cols,
        semantics: Semantics::Ownership,
        value_domain: ValueDomain { lo: 1, hi: p.players as CellValue },
        min_players: p.players,
        max_players: p.players,
        turn_policy: p.turn_policy,
        win_pattern: Some(Pattern::all_lines(p.line_len)),
        rules,
        givens: None,
        region: None,
    })
}

fn game_start_rule(name: &str) -> Rule {
    Rule::new(GAME_START, Some(EventSelector::GameStart))
        .when(Condition::GameTypeIs { name: name.into() })
        .when(Condition::StateIs { state: StateKind::NotStarted })
        .when(Condition::HasMinPlayers)
        .then(Action::SetStateStarted)
        .then(Action::SendMessage { text: "Game started".into() })
}

fn switch_player_rule() -> Rule {
    Rule::new(SWITCH_PLAYER, None)
        .when(Condition::StateIs { state: StateKind::Started })
        .then(Action::SwitchPlayer)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SudokuParams {
    pub name: Option<String>,
    pub side: usize,
    /// Explicit region shape; derived from a perfect-square side otherwise.
    pub region: Option<Region>,
    pub givens: Option<Vec<Vec<CellValue>>>,
    pub players: usize,
}

impl SudokuParams {
    pub fn empty(side: usize) -> Self {
        Self { name: None, side, region: None, givens: None, players: 1 }
    }

    pub fn with_givens(side: usize, givens: Vec<Vec<CellValue>>) -> Self {
        Self { givens: Some(givens), ..Self::empty(side) }
    }

    fn region(&self) -> Result<Region> {
        if let Some(r) = self.region {
            return Ok(r);
        }
        let root = (1..=self.side).find(|k| k * k >= self.side).unwrap_or(1);
        if root * root == self.side {
            Ok(Region { rows: root, cols: root })
        } else {
            Err(GameError::InvalidParams(format!(
                "side {} is not a perfect square and no region shape was given",
                self.side
            )))
        }
    }
}

/// The classic 9×9 sample puzzle shipped in the corpus.
pub fn sample_sudoku_givens() -> Vec<Vec<CellValue>> {
    [
        "53..7....",
        "6..195...",
        ".98....6.",
        "8...6...3",
        "4..8.3..1",
        "7...2...6",
        ".6....28.",
        "...419..5",
        "....8..79",
    ]
    .iter()
    .map(|row| row.chars().map(|ch| ch.to_digit(10).unwrap_or(0)).collect())
    .collect()
}

pub fn sudoku_definition(p: &SudokuParams) -> Result<GameDefinition> {
    if p.side < 1 {
        return Err(GameError::InvalidParams("side must be at least 1".into()));
    }
    if p.players < 1 {
        return Err(GameError::InvalidParams("need at least one player".into()));
    }
    let region = p.region()?;
    if region.rows * region.cols != p.side || p.side % region.rows != 0 || p.side % region.cols != 0 {
        return Err(GameError::InvalidParams(format!(
            "{}x{} regions do not tile a {side}x{side} board",
            region.rows,
            region.cols,
            side = p.side
        )));
    }
    if let Some(givens) = &p.givens {
        if givens.len() != p.side || givens.iter().any(|r| r.len() != p.side) {
            return Err(GameError::InvalidGivens(format!("givens grid is not {0}x{0}", p.side)));
        }
        if let Some(v) = givens.iter().flatten().find(|&&v| v as usize > p.side) {
            return Err(GameError::InvalidGivens(format!("given {v} is outside 1..={}", p.side)));
        }
        if let Some(conflict) = givens_conflict(givens, Some(region)) {
            return Err(GameError::InvalidGivens(conflict));
        }
    }

    let name = p.name.clone().unwrap_or_else(|| format!("sudoku-{0}x{0}", p.side));
    let mut tile_click = Rule::new(TILE_CLICK, Some(EventSelector::TileClick))
        .when(Condition::GameTypeIs { name: name.clone() })
        .when(Condition::StateIs { state: StateKind::Started })
        .when(Condition::IsCurrentPlayer)
        .when(Condition::TileNotLocked)
        .when(Condition::ValueInDomain)
        .when(Condition::LegalSymbolPlacement)
        .then(Action::SetTileToEventValue)
        .component(CHECK_SOLVED);
    let mut rules = vec![game_start_rule(&name)];
    let check_solved = Rule::new(CHECK_SOLVED, None)
        .when(Condition::StateIs { state: StateKind::Started })
        .when(Condition::BoardFull)
        .when(Condition::GroupsAllDistinct { groups: GroupFamily::Rows })
        .when(Condition::GroupsAllDistinct { groups: GroupFamily::Cols })
        .when(Condition::GroupsAllDistinct { groups: GroupFamily::Regions })
        .then(Action::SetWinnerCurrent);
    if p.players > 1 {
        tile_click = tile_click.component(SWITCH_PLAYER);
    }
    rules.push(tile_click);
    rules.push(check_solved);
    if p.players > 1 {
        rules.push(switch_player_rule());
    }

    Ok(GameDefinition {
        name,
        rows: p.side,
        cols: p.side,
        semantics: Semantics::Symbols,
        value_domain: ValueDomain { lo: 1, hi: p.side as CellValue },
        min_players: p.players,
        max_players: p.players,
        turn_policy: TurnPolicy::RoundRobin,
        win_pattern: None,
        rules,
        givens: p.givens.clone(),
        region: Some(region),
    })
}

/// Whether `digit` may be written at `c`: the cell is not a given, and the
/// digit is either 0 (erase) or absent from every other cell of the row,
/// column and region.
pub fn sudoku_legal_move(
    board: &Board,
    c: Coord,
    digit: CellValue,
    max_digit: CellValue,
    region: Option<Region>,
) -> Result<bool> {
    board.get(c)?;
    if digit > max_digit {
        return Err(GameError::InvalidValue(digit));
    }
    if board.is_locked(c) {
        return Ok(false);
    }
    if digit == 0 {
        return Ok(true);
    }
    let in_region = |o: Coord| match region {
        Some(reg) => reg.origin(o) == reg.origin(c),
        None => false,
    };
    let clash = board
        .coords()
        .filter(|&o| o != c && (o.row == c.row || o.col == c.col || in_region(o)))
        .any(|o| board.get(o) == Ok(digit));
    Ok(!clash)
}

/// Full grid with every row, column and region holding distinct values.
pub fn sudoku_solved(board: &Board, region: Option<Region>) -> bool {
    if !board.is_full() {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    board.coords().all(|c| {
        let v = board.get(c).unwrap_or(0);
        let mut keys = vec![(0, c.row, v), (1, c.col, v)];
        if let Some(reg) = region {
            let o = reg.origin(c);
            keys.push((2, o.row * board.cols() + o.col, v));
        }
        keys.into_iter().all(|k| seen.insert(k))
    })
}

/// The shipped `.game.json` corpus, as `(file name, definition)` pairs.
pub fn corpus() -> Vec<(&'static str, GameDefinition)> {
    let ttt = |rows, cols, len, players| {
        tictactoe_definition(&TicTacToeParams::new(rows, cols, len, players, TurnPolicy::RoundRobin))
            .expect("corpus parameters are valid")
    };
    let sample = SudokuParams {
        name: Some("sudoku-9x9-sample".into()),
        ..SudokuParams::with_givens(9, sample_sudoku_givens())
    };
    let compact = SudokuParams { name: Some("sudoku-4x4-empty".into()), ..SudokuParams::empty(4) };
    vec![
        ("ttt-3x3.game.json", ttt(3, 3, 3, 2)),
        ("ttt-4x4-len4.game.json", ttt(4, 4, 4, 2)),
        ("ttt-4x4-len3.game.json", ttt(4, 4, 3, 2)),
        ("ttt-3x3-4p.game.json", ttt(3, 3, 3, 4)),
        ("sudoku-9x9-sample.game.json", sudoku_definition(&sample).expect("sample givens are consistent")),
        ("sudoku-4x4-empty.game.json", sudoku_definition(&compact).expect("4x4 tiles with 2x2 regions")),
    ]
}
