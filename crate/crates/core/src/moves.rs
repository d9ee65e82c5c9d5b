//! Elementary row/column rotations and alternating move sequences.
//!
//! An H-move with offset `a` on row `r` sends `(c, r)` to `(c + a, r)`; a
//! V-move with offset `a` on column `c` sends `(c, r)` to `(c, r + a)`, all
//! mod n. Sequence lengths are counted in elementary moves, i.e. in halves of
//! a shuffle.

use crate::error::{Error, Result};
use crate::position::{check_n, Position, PositionArray, PositionSet};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    H,
    V,
}

impl Axis {
    pub fn other(self) -> Self {
        match self {
            Axis::H => Axis::V,
            Axis::V => Axis::H,
        }
    }
}

/// Independent rotation of every row (H) or every column (V).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementaryMove {
    pub axis: Axis,
    pub offsets: Vec<usize>,
}

impl ElementaryMove {
    pub fn new(axis: Axis, offsets: Vec<usize>) -> Result<Self> {
        let n = offsets.len();
        check_n(n)?;
        Ok(Self {
            axis,
            offsets: offsets.into_iter().map(|o| o % n).collect(),
        })
    }

    /// Builds a move from signed offsets, reducing each mod n.
    pub fn from_signed(axis: Axis, offsets: &[i64]) -> Result<Self> {
        let n = offsets.len();
        check_n(n)?;
        let m = n as i64;
        Ok(Self {
            axis,
            offsets: offsets.iter().map(|o| o.rem_euclid(m) as usize).collect(),
        })
    }

    pub fn zero(axis: Axis, n: usize) -> Self {
        Self {
            axis,
            offsets: vec![0; n],
        }
    }

    /// The same offset on every line.
    pub fn uniform(axis: Axis, n: usize, offset: i64) -> Self {
        let o = offset.rem_euclid(n as i64) as usize;
        Self {
            axis,
            offsets: vec![o; n],
        }
    }

    /// A single line rotated, all others fixed.
    pub fn single(axis: Axis, n: usize, line: usize, offset: i64) -> Self {
        let mut m = Self::zero(axis, n);
        m.offsets[line] = offset.rem_euclid(n as i64) as usize;
        m
    }

    pub fn n(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_identity(&self) -> bool {
        self.offsets.iter().all(|&o| o == 0)
    }

    pub fn inverse(&self) -> Self {
        let n = self.n();
        Self {
            axis: self.axis,
            offsets: self.offsets.iter().map(|&o| (n - o) % n).collect(),
        }
    }

    /// Adds another same-axis move's offsets.
    fn merge(&mut self, other: &Self) {
        let n = self.n();
        for (a, b) in self.offsets.iter_mut().zip(&other.offsets) {
            *a = (*a + b) % n;
        }
    }

    #[inline]
    pub fn apply(&self, p: Position) -> Position {
        let n = self.n();
        match self.axis {
            Axis::H => Position::new((p.col + self.offsets[p.row]) % n, p.row),
            Axis::V => Position::new(p.col, (p.row + self.offsets[p.col]) % n),
        }
    }

    pub fn try_apply(&self, p: Position) -> Result<Position> {
        p.check(self.n())?;
        Ok(self.apply(p))
    }

    /// The transposed move acting on the transposed square.
    pub fn transpose(&self) -> Self {
        Self {
            axis: self.axis.other(),
            offsets: self.offsets.clone(),
        }
    }
}

/// A list of elementary moves applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoveSequence {
    n: usize,
    moves: Vec<ElementaryMove>,
}

impl MoveSequence {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            moves: Vec::new(),
        }
    }

    pub fn from_moves(n: usize, moves: Vec<ElementaryMove>) -> Result<Self> {
        check_n(n)?;
        for m in &moves {
            if m.n() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: m.n(),
                });
            }
        }
        Ok(Self { n, moves })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn moves(&self) -> &[ElementaryMove] {
        &self.moves
    }

    pub fn into_moves(self) -> Vec<ElementaryMove> {
        self.moves
    }

    pub fn push(&mut self, m: ElementaryMove) {
        assert_eq!(m.n(), self.n, "move size differs from sequence size");
        self.moves.push(m);
    }

    pub fn extend(&mut self, other: &MoveSequence) {
        assert_eq!(other.n, self.n, "sequence sizes differ");
        self.moves.extend(other.moves.iter().cloned());
    }

    pub fn then(mut self, other: &MoveSequence) -> Self {
        self.extend(other);
        self
    }

    /// Number of elementary moves, i.e. the shuffle length in half-units.
    pub fn half_shuffles(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Shuffle length rendered with a `½` suffix where needed, e.g. `2½`.
    pub fn shuffle_length(&self) -> String {
        format_half_units(self.moves.len())
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            moves: self
                .moves
                .iter()
                .rev()
                .map(ElementaryMove::inverse)
                .collect(),
        }
    }

    /// Drops identity moves and merges adjacent same-axis moves.
    pub fn normalize(&self) -> Self {
        let mut out: Vec<ElementaryMove> = Vec::with_capacity(self.moves.len());
        for m in &self.moves {
            if m.is_identity() {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.axis == m.axis => {
                    last.merge(m);
                    if last.is_identity() {
                        out.pop();
                    }
                }
                _ => out.push(m.clone()),
            }
        }
        Self {
            n: self.n,
            moves: out,
        }
    }

    /// True when no two adjacent moves share an axis.
    pub fn is_alternating(&self) -> bool {
        self.moves.windows(2).all(|w| w[0].axis != w[1].axis)
    }

    pub fn apply(&self, p: Position) -> Position {
        self.moves.iter().fold(p, |q, m| m.apply(q))
    }

    pub fn apply_set(&self, s: &PositionSet) -> Result<PositionSet> {
        self.check_size(s.n())?;
        PositionSet::new(self.n, s.iter().map(|p| self.apply(p)))
    }

    pub fn apply_array(&self, a: &PositionArray) -> Result<PositionArray> {
        self.check_size(a.n())?;
        PositionArray::new(self.n, a.iter().map(|p| self.apply(p)).collect())
    }

    /// Realized cell permutation: entry `i` is the rank reached from rank `i`.
    pub fn permutation(&self) -> Vec<usize> {
        let n = self.n;
        let mut perm: Vec<usize> = (0..n * n).collect();
        for m in &self.moves {
            for t in perm.iter_mut() {
                *t = m.apply(Position::from_rank(*t, n)).rank(n);
            }
        }
        perm
    }

    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            moves: self.moves.iter().map(ElementaryMove::transpose).collect(),
        }
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n != self.n {
            Err(Error::SizeMismatch {
                expected: self.n,
                found: n,
            })
        } else {
            Ok(())
        }
    }

    /// JSON array of `{"axis": "H"|"V", "offsets": [...]}` records.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.moves).expect("moves serialize")
    }

    /// Parses the layout written by [`MoveSequence::to_json`]. `n` is needed
    /// because an empty list carries no size.
    pub fn from_json(text: &str, n: usize) -> Result<Self> {
        let raw: Vec<ElementaryMove> = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let mut moves = Vec::with_capacity(raw.len());
        for m in raw {
            if m.offsets.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: m.offsets.len(),
                });
            }
            if let Some(&bad) = m.offsets.iter().find(|&&o| o >= n) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("offset {bad} not in [0, {n})"),
                });
            }
            moves.push(m);
        }
        Self::from_moves(n, moves)
    }
}

impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.moves.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let axis = match m.axis {
                Axis::H => 'H',
                Axis::V => 'V',
            };
            write!(f, "{axis}{:?}", m.offsets)?;
        }
        Ok(())
    }
}

/// Renders a count of half-shuffles, e.g. 25 -> `12½`.
pub fn format_half_units(h: usize) -> String {
    if h % 2 == 0 {
        format!("{}", h / 2)
    } else {
        format!("{}½", h / 2)
    }
}

/// Composition helper: `first` then `second` as cell permutations.
pub fn compose_perm(first: &[usize], second: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| second[i]).collect()
}

pub fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_move_convention() {
        let m = ElementaryMove::new(Axis::H, vec![1, 0]).unwrap();
        assert_eq!(m.apply(Position::new(0, 0)), Position::new(1, 0));
        assert_eq!(m.apply(Position::new(0, 1)), Position::new(0, 1));
        let v = ElementaryMove::single(Axis::V, 3, 2, -1);
        assert_eq!(v.apply(Position::new(2, 0)), Position::new(2, 2));
    }

    #[test]
    fn inverse_pair_normalizes_away() {
        let mut s = MoveSequence::new(4);
        s.push(ElementaryMove::uniform(Axis::H, 4, 1));
        s.push(ElementaryMove::uniform(Axis::H, 4, -1));
        assert!(s.normalize().is_empty());
    }

    #[test]
    fn nested_cancellation() {
        let mut s = MoveSequence::new(3);
        s.push(ElementaryMove::single(Axis::H, 3, 0, 1));
        s.push(ElementaryMove::single(Axis::V, 3, 1, 2));
        s.push(ElementaryMove::single(Axis::V, 3, 1, 1));
        s.push(ElementaryMove::single(Axis::H, 3, 0, 2));
        assert!(s.normalize().is_empty());
    }

    #[test]
    fn half_unit_rendering() {
        assert_eq!(format_half_units(5), "2½");
        assert_eq!(format_half_units(25), "12½");
        assert_eq!(format_half_units(4), "2");
        assert_eq!(format_half_units(0), "0");
    }

    #[test]
    fn json_round_trip() {
        let mut s = MoveSequence::new(3);
        s.push(ElementaryMove::new(Axis::H, vec![1, 2, 0]).unwrap());
        s.push(ElementaryMove::new(Axis::V, vec![0, 0, 2]).unwrap());
        let text = s.to_json();
        assert!(text.contains("\"axis\": \"H\""));
        assert_eq!(MoveSequence::from_json(&text, 3).unwrap(), s);
        assert!(MoveSequence::from_json(&text, 4).is_err());
        assert!(MoveSequence::from_json("[{\"axis\":\"H\",\"offsets\":[0,5,0]}]", 3).is_err());
        assert_eq!(
            MoveSequence::from_json("[]", 5).unwrap(),
            MoveSequence::new(5)
        );
    }

    #[test]
    fn permutation_matches_pointwise_application() {
        let mut s = MoveSequence::new(4);
        s.push(ElementaryMove::new(Axis::H, vec![1, 3, 0, 2]).unwrap());
        s.push(ElementaryMove::new(Axis::V, vec![2, 0, 1, 1]).unwrap());
        let perm = s.permutation();
        for r in 0..16 {
            assert_eq!(perm[r], s.apply(Position::from_rank(r, 4)).rank(4));
        }
        let inv = s.inverse().permutation();
        assert_eq!(compose_perm(&perm, &inv), (0..16).collect::<Vec<_>>());
    }
}
