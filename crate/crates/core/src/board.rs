//! The game board: a dense row-major matrix of integer cell values.
//!
//! Zero always means "empty". What a nonzero value means depends on the
//! definition's [`Semantics`](crate::model::Semantics): in ownership games it
//! is the id of the player owning the tile, in symbols games it is a digit.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};

pub type CellValue = u32;

/// A board location. Serialized as a `[row, col]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl From<(usize, usize)> for Coord {
    fn from((row, col): (usize, usize)) -> Self {
        Self { row, col }
    }
}

impl From<Coord> for (usize, usize) {
    fn from(c: Coord) -> Self {
        (c.row, c.col)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BoardRepr", into = "BoardRepr")]
pub struct Board {
    rows: usize,
    cols: usize,
    cells: Vec<CellValue>,
    locked: BTreeSet<Coord>,
}

impl Board {
    pub fn new(rows: usize, cols: usize, fill: CellValue) -> Result<Self> {
        if rows < 1 || cols < 1 {
            return Err(GameError::InvalidDimensions { rows, cols });
        }
        Ok(Self {
            rows,
            cols,
            cells: vec![fill; rows * cols],
            locked: BTreeSet::new(),
        })
    }

    /// Builds a board from a row-major grid. All rows must have equal length.
    pub fn from_grid(grid: &[Vec<CellValue>]) -> Result<Self> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        if rows < 1 || cols < 1 || grid.iter().any(|r| r.len() != cols) {
            return Err(GameError::InvalidDimensions { rows, cols });
        }
        Ok(Self {
            rows,
            cols,
            cells: grid.concat(),
            locked: BTreeSet::new(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.row < self.rows && c.col < self.cols
    }

    fn index(&self, c: Coord) -> Result<usize> {
        if self.contains(c) {
            Ok(c.row * self.cols + c.col)
        } else {
            Err(GameError::OutOfBounds { coord: c, rows: self.rows, cols: self.cols })
        }
    }

    pub fn get(&self, c: Coord) -> Result<CellValue> {
        self.index(c).map(|i| self.cells[i])
    }

    /// Writes `v` at `c`. Locked cells refuse writes.
    pub fn set(&mut self, c: Coord, v: CellValue) -> Result<()> {
        let i = self.index(c)?;
        if self.locked.contains(&c) {
            return Err(GameError::LockedCell(c));
        }
        self.cells[i] = v;
        Ok(())
    }

    /// Value-returning form of [`Board::set`].
    pub fn with_cell(&self, c: Coord, v: CellValue) -> Result<Self> {
        let mut next = self.clone();
        next.set(c, v)?;
        Ok(next)
    }

    pub fn lock(&mut self, c: Coord) -> Result<()> {
        self.index(c)?;
        self.locked.insert(c);
        Ok(())
    }

    pub fn is_locked(&self, c: Coord) -> bool {
        self.locked.contains(&c)
    }

    pub fn locked(&self) -> &BTreeSet<Coord> {
        &self.locked
    }

    pub fn cells(&self) -> &[CellValue] {
        &self.cells
    }

    pub fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| Coord::new(r, c)))
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(|&v| v != 0)
    }

    pub fn grid(&self) -> Vec<Vec<CellValue>> {
        self.cells.chunks(self.cols).map(<[_]>::to_vec).collect()
    }
}

/// Wire form of a board: explicit dims so a corrupted grid is caught on load.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoardRepr {
    rows: usize,
    cols: usize,
    cells: Vec<Vec<CellValue>>,
    locked: Vec<Coord>,
}

impl From<Board> for BoardRepr {
    fn from(b: Board) -> Self {
        BoardRepr {
            rows: b.rows,
            cols: b.cols,
            cells: b.grid(),
            locked: b.locked.into_iter().collect(),
        }
    }
}

impl TryFrom<BoardRepr> for Board {
    type Error = GameError;

    fn try_from(r: BoardRepr) -> Result<Self> {
        let mut board = Board::from_grid(&r.cells)?;
        if board.rows != r.rows || board.cols != r.cols {
            return Err(GameError::InvalidDimensions { rows: r.rows, cols: r.cols });
        }
        for c in r.locked {
            board.lock(c)?;
        }
        Ok(board)
    }
}
