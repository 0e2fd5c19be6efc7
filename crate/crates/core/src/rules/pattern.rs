use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::board::Coord;
use crate::error::{GameError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineFamily {
    Rows,
    Cols,
    Diag,
    Antidiag,
}

impl LineFamily {
    pub const ALL: [LineFamily; 4] =
        [LineFamily::Rows, LineFamily::Cols, LineFamily::Diag, LineFamily::Antidiag];
}

/// A win pattern at one of three levels of description: explicit tile
/// lists, line families, or a composite of other patterns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Pattern {
    Tiles(Vec<Vec<Coord>>),
    Lines { len: usize, families: BTreeSet<LineFamily> },
    Composite(Vec<Pattern>),
}

impl Pattern {
    pub fn lines(len: usize, families: impl IntoIterator<Item = LineFamily>) -> Self {
        Pattern::Lines { len, families: families.into_iter().collect() }
    }

    pub fn all_lines(len: usize) -> Self {
        Self::lines(len, LineFamily::ALL)
    }
}

/// Expands a pattern to its coordinate lists for a `rows`×`cols` board.
///
/// Order is Tiles as given, then for line families rows top-to-bottom
/// (windows left-to-right), cols, diag, antidiag. Lists covering the same
/// set of cells are kept once, at their first position.
pub fn expand_pattern(p: &Pattern, rows: usize, cols: usize) -> Result<Vec<Vec<Coord>>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    expand_into(p, rows, cols, &mut out, &mut seen)?;
    Ok(out)
}

fn expand_into(
    p: &Pattern,
    rows: usize,
    cols: usize,
    out: &mut Vec<Vec<Coord>>,
    seen: &mut HashSet<BTreeSet<Coord>>,
) -> Result<()> {
    let mut push = |list: Vec<Coord>| {
        if seen.insert(list.iter().copied().collect()) {
            out.push(list);
        }
    };
    match p {
        Pattern::Tiles(lists) => {
            for list in lists {
                if let Some(&bad) = list.iter().find(|c| c.row >= rows || c.col >= cols) {
                    return Err(GameError::OutOfBounds { coord: bad, rows, cols });
                }
                push(list.clone());
            }
        }
        Pattern::Lines { len, families } => {
            let len = *len;
            if len == 0 {
                return Err(GameError::InvalidParams("line length must be at least 1".into()));
            }
            for family in families {
                for list in family_windows(*family, len, rows, cols) {
                    push(list);
                }
            }
        }
        Pattern::Composite(children) => {
            for child in children {
                expand_into(child, rows, cols, out, seen)?;
            }
        }
    }
    Ok(())
}

fn family_windows(family: LineFamily, len: usize, rows: usize, cols: usize) -> Vec<Vec<Coord>> {
    // (row step, col step) and the admissible start ranges for that direction
    let (dr, dc): (isize, isize) = match family {
        LineFamily::Rows => (0, 1),
        LineFamily::Cols => (1, 0),
        LineFamily::Diag => (1, 1),
        LineFamily::Antidiag => (1, -1),
    };
    let span = len - 1;
    let row_starts = if dr == 0 { 0..rows } else { 0..rows.saturating_sub(span) };
    let col_starts = match dc {
        0 => 0..cols,
        1 => 0..cols.saturating_sub(span),
        _ => span.min(cols)..cols,
    };
    let mut windows = Vec::new();
    if family == LineFamily::Cols {
        // columns left-to-right, windows top-to-bottom within each column
        for c in col_starts {
            for r in row_starts.clone() {
                windows.push(walk(r, c, dr, dc, len));
            }
        }
    } else {
        for r in row_starts {
            for c in col_starts.clone() {
                windows.push(walk(r, c, dr, dc, len));
            }
        }
    }
    windows
}

fn walk(r: usize, c: usize, dr: isize, dc: isize, len: usize) -> Vec<Coord> {
    (0..len as isize)
        .map(|k| Coord::new((r as isize + k * dr) as usize, (c as isize + k * dc) as usize))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent enumerator: every start cell, every direction, keep the
    /// windows whose end stays on the board.
    fn brute_force_count(len: usize, rows: usize, cols: usize, dirs: &[(i64, i64)]) -> usize {
        let mut n = 0;
        for r in 0..rows as i64 {
            for c in 0..cols as i64 {
                for &(dr, dc) in dirs {
                    let (er, ec) = (r + dr * (len as i64 - 1), c + dc * (len as i64 - 1));
                    if (0..rows as i64).contains(&er) && (0..cols as i64).contains(&ec) {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn standard_counts() {
        assert_eq!(expand_pattern(&Pattern::all_lines(3), 3, 3).unwrap().len(), 8);
        assert_eq!(expand_pattern(&Pattern::all_lines(4), 4, 4).unwrap().len(), 10);
        assert_eq!(expand_pattern(&Pattern::all_lines(3), 4, 4).unwrap().len(), 24);
        assert_eq!(brute_force_count(3, 4, 4, &[(0, 1), (1, 0), (1, 1), (1, -1)]), 24);
    }

    #[test]
    fn expansion_order() {
        let lines = expand_pattern(&Pattern::all_lines(3), 3, 3).unwrap();
        let c = |r, c| Coord::new(r, c);
        assert_eq!(lines[0], vec![c(0, 0), c(0, 1), c(0, 2)]);
        assert_eq!(lines[2], vec![c(2, 0), c(2, 1), c(2, 2)]);
        assert_eq!(lines[3], vec![c(0, 0), c(1, 0), c(2, 0)]);
        assert_eq!(lines[6], vec![c(0, 0), c(1, 1), c(2, 2)]);
        assert_eq!(lines[7], vec![c(0, 2), c(1, 1), c(2, 0)]);
    }

    #[test]
    fn rectangular_and_oversized() {
        for (rows, cols) in [(2, 5), (5, 2), (3, 4), (1, 1), (6, 3)] {
            for len in 1..=6 {
                for fam in LineFamily::ALL {
                    let dir = match fam {
                        LineFamily::Rows => (0, 1),
                        LineFamily::Cols => (1, 0),
                        LineFamily::Diag => (1, 1),
                        LineFamily::Antidiag => (1, -1),
                    };
                    let got = family_windows(fam, len, rows, cols).len();
                    let want = brute_force_count(len, rows, cols, &[dir]);
                    assert_eq!(got, want, "{fam:?} len {len} on {rows}x{cols}");
                }
            }
        }
    }

    #[test]
    fn composite_dedups_and_tiles_bounds() {
        let p = Pattern::Composite(vec![
            Pattern::Tiles(vec![vec![Coord::new(0, 2), Coord::new(0, 1), Coord::new(0, 0)]]),
            Pattern::all_lines(3),
        ]);
        let lines = expand_pattern(&p, 3, 3).unwrap();
        assert_eq!(lines.len(), 8);
        assert_eq!(lines[0][0], Coord::new(0, 2));

        let bad = Pattern::Tiles(vec![vec![Coord::new(9, 9)]]);
        assert!(matches!(expand_pattern(&bad, 3, 3), Err(GameError::OutOfBounds { .. })));
        assert!(expand_pattern(&Pattern::all_lines(0), 3, 3).is_err());
        assert!(expand_pattern(&Pattern::Tiles(vec![]), 3, 3).unwrap().is_empty());
    }

    #[test]
    fn json_shapes() {
        let p = Pattern::lines(3, [LineFamily::Cols, LineFamily::Rows]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"lines":{"len":3,"families":["rows","cols"]}}"#);
        let t: Pattern = serde_json::from_str(r#"{"tiles":[[[0,0],[1,1]]]}"#).unwrap();
        assert_eq!(t, Pattern::Tiles(vec![vec![Coord::new(0, 0), Coord::new(1, 1)]]));
    }
}
