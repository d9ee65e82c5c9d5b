//! Equi-n-squares: colorings of the n² cells with each digit used n times.

use crate::error::{Error, Result};
use crate::moves::{ElementaryMove, MoveSequence};
use crate::position::{check_n, Position};
use rand::seq::SliceRandom;
use rand::Rng;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareState {
    n: usize,
    /// Digit at each rank `col + n * row`.
    digits: Vec<usize>,
}

impl SquareState {
    /// Validates shape, range and multiplicities.
    pub fn new(n: usize, digits: Vec<usize>) -> Result<Self> {
        check_n(n)?;
        if digits.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                found: digits.len(),
            });
        }
        let mut count = vec![0usize; n];
        for (r, &d) in digits.iter().enumerate() {
            if d >= n {
                let p = Position::from_rank(r, n);
                return Err(Error::Parse {
                    line: n - p.row,
                    msg: format!("digit {d} not in [0, {n})"),
                });
            }
            count[d] += 1;
        }
        if let Some((digit, &c)) = count.iter().enumerate().find(|(_, &c)| c != n) {
            return Err(Error::Multiplicity { digit, count: c, n });
        }
        Ok(Self { n, digits })
    }

    pub fn from_fn(n: usize, f: impl Fn(Position) -> usize) -> Result<Self> {
        check_n(n)?;
        Self::new(
            n,
            (0..n * n).map(|r| f(Position::from_rank(r, n))).collect(),
        )
    }

    /// Digit equal to the row number; H-indirection reads its input back.
    pub fn row_index(n: usize) -> Result<Self> {
        Self::from_fn(n, |p| p.row)
    }

    /// The cyclic latin square `digit = col + row mod n`.
    pub fn cyclic_latin(n: usize) -> Result<Self> {
        Self::from_fn(n, |p| (p.col + p.row) % n)
    }

    /// Uniformly random equi-n-square.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        let mut digits: Vec<usize> = (0..n * n).map(|r| r / n).collect();
        digits.shuffle(rng);
        Ok(Self { n, digits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn digit(&self, p: Position) -> usize {
        self.digits[p.rank(self.n)]
    }

    #[inline]
    pub fn digit_at_rank(&self, r: usize) -> usize {
        self.digits[r]
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    /// Cells of each digit, ascending by rank.
    pub fn color_classes(&self) -> Vec<Vec<Position>> {
        let mut out = vec![Vec::with_capacity(self.n); self.n];
        for (r, &d) in self.digits.iter().enumerate() {
            out[d].push(Position::from_rank(r, self.n));
        }
        out
    }

    /// Moves cell contents along `perm` (rank `i` goes to `perm[i]`).
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.digits.len() {
            return Err(Error::SizeMismatch {
                expected: self.digits.len(),
                found: perm.len(),
            });
        }
        let mut digits = vec![usize::MAX; self.digits.len()];
        for (i, &j) in perm.iter().enumerate() {
            if j >= digits.len() || digits[j] != usize::MAX {
                return Err(Error::Precondition("not a permutation".into()));
            }
            digits[j] = self.digits[i];
        }
        Ok(Self { n: self.n, digits })
    }

    pub fn apply_move(&self, m: &ElementaryMove) -> Result<Self> {
        if m.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: m.n(),
            });
        }
        let n = self.n;
        let mut digits = vec![0; n * n];
        for (r, &d) in self.digits.iter().enumerate() {
            digits[m.apply(Position::from_rank(r, n)).rank(n)] = d;
        }
        Ok(Self { n, digits })
    }

    pub fn apply(&self, seq: &MoveSequence) -> Result<Self> {
        if seq.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: seq.n(),
            });
        }
        let mut s = self.clone();
        for m in seq.moves() {
            s = s.apply_move(m)?;
        }
        Ok(s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |p| self.digit(p.transpose()))
            .expect("transpose keeps multiplicities")
    }

    /// True when the cells carry pairwise distinct digits.
    pub fn is_latin_set(&self, cells: impl IntoIterator<Item = Position>) -> bool {
        let mut seen = vec![false; self.n];
        for p in cells {
            let d = self.digit(p);
            if seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    pub fn has_latin_rows(&self) -> bool {
        (0..self.n).all(|r| self.is_latin_set((0..self.n).map(|c| Position::new(c, r))))
    }

    pub fn has_latin_cols(&self) -> bool {
        (0..self.n).all(|c| self.is_latin_set((0..self.n).map(|r| Position::new(c, r))))
    }

    /// Parses the text layout: top line is row n-1, leftmost token is
    /// column n-1, tokens separated by single spaces.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let n = lines.len();
        check_n(n).map_err(|_| Error::Parse {
            line: 1,
            msg: format!("{n} lines, need at least 2"),
        })?;
        let mut digits = vec![0usize; n * n];
        for (i, line) in lines.iter().enumerate() {
            let row = n - 1 - i;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("{} tokens, expected {n}", toks.len()),
                });
            }
            for (j, t) in toks.iter().enumerate() {
                let col = n - 1 - j;
                let d: usize = t.parse().map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("bad token {t:?}"),
                })?;
                digits[col + n * row] = d;
            }
        }
        Self::new(n, digits)
    }

    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SquareState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        for row in (0..n).rev() {
            for col in (0..n).rev() {
                if col != n - 1 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.digits[col + n * row])?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::Axis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn text_layout_orientation() {
        let s = SquareState::parse("0 1\n1 0\n").unwrap();
        // bottom line "1 0": column 1 holds 1, column 0 holds 0
        assert_eq!(s.digit(Position::new(0, 0)), 0);
        assert_eq!(s.digit(Position::new(1, 0)), 1);
        assert_eq!(s.digit(Position::new(1, 1)), 0);
        assert_eq!(s.format(), "0 1\n1 0\n");
    }

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..12 {
            let s = SquareState::random(n, &mut rng).unwrap();
            assert_eq!(SquareState::parse(&s.format()).unwrap(), s);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            SquareState::parse("0 1 0\n1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SquareState::parse("0 0\n0 1\n"),
            Err(Error::Multiplicity {
                digit: 0,
                count: 3,
                n: 2
            })
        ));
        assert!(matches!(
            SquareState::parse("0 2\n1 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(SquareState::parse("0\n").is_err());
    }

    #[test]
    fn moves_keep_multiplicities() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = SquareState::random(5, &mut rng).unwrap();
        let m = ElementaryMove::new(Axis::V, vec![1, 2, 3, 4, 0]).unwrap();
        let t = s.apply_move(&m).unwrap();
        assert!(SquareState::new(5, t.digits().to_vec()).is_ok());
        assert_eq!(t.digit(Position::new(1, 3)), s.digit(Position::new(1, 1)));
    }
}
