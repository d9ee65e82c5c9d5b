//! Cells of the formal n-square and collections of them.
//!
//! Columns and rows are numbered `0..n`. The rank of `(col, row)` is
//! `col + n * row`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest square size supported by the bitmask-based search routines.
pub const MAX_MASK_N: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub col: usize,
    pub row: usize,
}

impl Position {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }

    pub fn rank(self, n: usize) -> usize {
        self.col + n * self.row
    }

    pub fn from_rank(rank: usize, n: usize) -> Self {
        Self {
            col: rank % n,
            row: rank / n,
        }
    }

    pub fn transpose(self) -> Self {
        Self {
            col: self.row,
            row: self.col,
        }
    }

    pub fn check(self, n: usize) -> Result<Self> {
        if self.col >= n || self.row >= n {
            Err(Error::OutOfRange {
                col: self.col,
                row: self.row,
                n,
            })
        } else {
            Ok(self)
        }
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidSize(n))
    } else {
        Ok(())
    }
}

/// Rotates the low `n` bits of `mask` by `by` places (bit `i` goes to `i + by mod n`).
#[inline]
pub fn rotate_mask(mask: u128, by: usize, n: usize) -> u128 {
    let by = by % n;
    if by == 0 {
        return mask;
    }
    let full = full_mask(n);
    ((mask << by) | (mask >> (n - by))) & full
}

#[inline]
pub fn full_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Row statistics of a position set (the column-dual is obtained by transposing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowProfile {
    pub n: usize,
    /// Number of occupied rows.
    pub rows: usize,
    /// Rows disjoint from the set.
    pub free: usize,
    /// Occupied rows holding at least two positions.
    pub body: usize,
    /// Positions that are alone in their row.
    pub row_unique: usize,
    /// Column numbers present in each row, ascending.
    pub per_row: Vec<Vec<usize>>,
}

impl RowProfile {
    /// Sizes of the body rows, in row order.
    pub fn body_sizes(&self) -> Vec<usize> {
        self.per_row
            .iter()
            .map(Vec::len)
            .filter(|&s| s >= 2)
            .collect()
    }

    /// Total number of positions on body rows.
    pub fn body_size(&self) -> usize {
        self.body_sizes().iter().sum()
    }
}

/// An unordered set of distinct positions of a formal n-square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionSet {
    n: usize,
    cells: Vec<Position>,
}

impl PositionSet {
    pub fn new(n: usize, cells: impl IntoIterator<Item = Position>) -> Result<Self> {
        check_n(n)?;
        let mut cells: Vec<Position> = cells.into_iter().collect();
        for p in &cells {
            p.check(n)?;
        }
        cells.sort_unstable();
        for w in cells.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Duplicate {
                    col: w[0].col,
                    row: w[0].row,
                });
            }
        }
        Ok(Self { n, cells })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(c, r)| Position::new(c, r)))
    }

    pub fn from_ranks(n: usize, ranks: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(n, ranks.into_iter().map(|r| Position::from_rank(r, n)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, p: Position) -> bool {
        self.cells.binary_search(&p).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Position> + '_ {
        self.cells.iter().copied()
    }

    pub fn as_slice(&self) -> &[Position] {
        &self.cells
    }

    pub fn transpose(&self) -> Self {
        let mut cells: Vec<Position> = self.cells.iter().map(|p| p.transpose()).collect();
        cells.sort_unstable();
        Self { n: self.n, cells }
    }

    /// Column numbers present in each row.
    pub fn row_sets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for p in &self.cells {
            out[p.row].push(p.col);
        }
        for v in &mut out {
            v.sort_unstable();
        }
        out
    }

    /// Row numbers present in each column.
    pub fn col_sets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for p in &self.cells {
            out[p.col].push(p.row);
        }
        for v in &mut out {
            v.sort_unstable();
        }
        out
    }

    /// Per-row column bitmasks; requires `n <= 128`.
    pub fn row_masks(&self) -> Result<Vec<u128>> {
        if self.n > MAX_MASK_N {
            return Err(Error::Unsupported(self.n));
        }
        let mut out = vec![0u128; self.n];
        for p in &self.cells {
            out[p.row] |= 1u128 << p.col;
        }
        Ok(out)
    }

    /// Per-column row bitmasks; requires `n <= 128`.
    pub fn col_masks(&self) -> Result<Vec<u128>> {
        if self.n > MAX_MASK_N {
            return Err(Error::Unsupported(self.n));
        }
        let mut out = vec![0u128; self.n];
        for p in &self.cells {
            out[p.col] |= 1u128 << p.row;
        }
        Ok(out)
    }

    pub fn row_count(&self) -> usize {
        self.row_sets().iter().filter(|r| !r.is_empty()).count()
    }

    pub fn col_count(&self) -> usize {
        self.col_sets().iter().filter(|c| !c.is_empty()).count()
    }

    pub fn row_profile(&self) -> RowProfile {
        let per_row = self.row_sets();
        let rows = per_row.iter().filter(|r| !r.is_empty()).count();
        let body = per_row.iter().filter(|r| r.len() >= 2).count();
        let row_unique = per_row.iter().filter(|r| r.len() == 1).count();
        RowProfile {
            n: self.n,
            rows,
            free: self.n - rows,
            body,
            row_unique,
            per_row,
        }
    }

    pub fn col_profile(&self) -> RowProfile {
        self.transpose().row_profile()
    }

    /// One position in every column.
    pub fn is_h_graph(&self) -> bool {
        self.cells.len() == self.n && self.col_sets().iter().all(|c| c.len() == 1)
    }

    /// One position in every row.
    pub fn is_v_graph(&self) -> bool {
        self.cells.len() == self.n && self.row_sets().iter().all(|r| r.len() == 1)
    }

    /// Transversal to both rows and columns.
    pub fn is_complete_transversal(&self) -> bool {
        self.is_h_graph() && self.is_v_graph()
    }
}

/// An ordered list of distinct positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionArray {
    n: usize,
    cells: Vec<Position>,
}

impl PositionArray {
    pub fn new(n: usize, cells: Vec<Position>) -> Result<Self> {
        check_n(n)?;
        let mut seen = vec![false; n * n];
        for p in &cells {
            p.check(n)?;
            let r = p.rank(n);
            if seen[r] {
                return Err(Error::Duplicate {
                    col: p.col,
                    row: p.row,
                });
            }
            seen[r] = true;
        }
        Ok(Self { n, cells })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(c, r)| Position::new(c, r)).collect())
    }

    /// The H-graph `{(k, rows[k])}` ordered by column.
    pub fn h_graph(n: usize, rows: &[usize]) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        Self::new(
            n,
            rows.iter()
                .enumerate()
                .map(|(k, &r)| Position::new(k, r))
                .collect(),
        )
    }

    /// The bottom row, ordered by column.
    pub fn bottom_row(n: usize) -> Self {
        Self {
            n,
            cells: (0..n).map(|k| Position::new(k, 0)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, i: usize) -> Position {
        self.cells[i]
    }

    pub fn as_slice(&self) -> &[Position] {
        &self.cells
    }

    pub fn iter(&self) -> impl Iterator<Item = Position> + '_ {
        self.cells.iter().copied()
    }

    pub fn to_set(&self) -> PositionSet {
        let mut cells = self.cells.clone();
        cells.sort_unstable();
        PositionSet { n: self.n, cells }
    }

    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            cells: self.cells.iter().map(|p| p.transpose()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_of_v_graph() {
        let s = PositionSet::from_pairs(4, &[(2, 0), (0, 1), (3, 2), (0, 3)]).unwrap();
        let p = s.row_profile();
        assert_eq!((p.rows, p.body, p.free, p.row_unique), (4, 0, 0, 4));
        assert!(s.is_v_graph());
        assert!(!s.is_h_graph());
    }

    #[test]
    fn profile_of_six_set() {
        let s =
            PositionSet::from_pairs(6, &[(0, 0), (1, 0), (1, 1), (2, 1), (0, 2), (2, 2)]).unwrap();
        let p = s.row_profile();
        assert_eq!((p.rows, p.body, p.free, p.row_unique), (3, 3, 3, 0));
        assert_eq!(p.body_size(), 6);
        let c = s.col_profile();
        assert_eq!((c.rows, c.body, c.free), (3, 3, 3));
    }

    #[test]
    fn profile_of_empty_set() {
        let s = PositionSet::empty(5).unwrap();
        let p = s.row_profile();
        assert_eq!((p.rows, p.free), (0, 5));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PositionSet::from_pairs(3, &[(3, 0)]).is_err());
        assert!(PositionSet::from_pairs(3, &[(1, 1), (1, 1)]).is_err());
        assert!(PositionArray::from_pairs(3, &[(0, 0), (0, 0)]).is_err());
        assert_eq!(PositionSet::empty(1), Err(Error::InvalidSize(1)));
    }

    #[test]
    fn mask_rotation_wraps() {
        assert_eq!(rotate_mask(0b101, 1, 3), 0b011);
        assert_eq!(rotate_mask(0b1, 5, 5), 0b1);
        assert_eq!(rotate_mask(1u128 << 127, 1, 128), 1);
    }

    #[test]
    fn rank_round_trip() {
        for r in 0..49 {
            assert_eq!(Position::from_rank(r, 7).rank(7), r);
        }
    }
}
