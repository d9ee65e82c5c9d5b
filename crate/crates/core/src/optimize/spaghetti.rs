//! Least matrix size `n(b, f)` for rotating `b` body rows apart with `f`
//! free rows, and the resulting spaghetti boundary estimate.

use crate::error::{Error, Result};

/// Smallest integer strictly above `((b - 1) / b²) (b + f)²`.
pub fn n_bf(b: usize, f: usize) -> usize {
    assert!(b >= 2 && b <= f, "n(b, f) needs 2 <= b <= f");
    (b - 1) * (b + f) * (b + f) / (b * b) + 1
}

/// Sizes where a finer case analysis lowers the estimate by one more unit.
pub const CASE_CORRECTIONS: [usize; 4] = [32, 37, 43, 50];

/// Upper limits on the number of free rows for which the rotate-apart
/// sufficient condition holds, by number of body rows `b = 2..=16`.
pub const FREE_ROW_LIMITS: [(usize, usize); 15] = [
    (2, 35),
    (3, 21),
    (4, 21),
    (5, 23),
    (6, 26),
    (7, 28),
    (8, 32),
    (9, 35),
    (10, 37),
    (11, 40),
    (12, 43),
    (13, 46),
    (14, 49),
    (15, 51),
    (16, 55),
];

/// Largest `n` for which the table method is used.
pub const SPAGHETTI_MAX_N: usize = 80;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaghettiBound {
    pub n: usize,
    /// Largest `f` with `n(b, f) <= n` for all `2 <= b <= f`.
    pub f_max: usize,
    /// `n - f_max - 1` (0 for n = 2, 3).
    pub estimate: usize,
    /// Lowered because the first failing column `f` fails only at
    /// `b = f = n/4 + 1`, where any `b` 2-sets can be rotated apart.
    pub pairs_correction: bool,
    /// Lowered by one of [`CASE_CORRECTIONS`].
    pub case_correction: bool,
    pub value: usize,
}

/// Body-row counts `b` at which column `f` of the table exceeds `n`.
pub fn failing_rows(n: usize, f: usize) -> Vec<usize> {
    (2..=f).filter(|&b| n_bf(b, f) > n).collect()
}

pub fn spaghetti_boundary(n: usize) -> Result<SpaghettiBound> {
    if !(2..=SPAGHETTI_MAX_N).contains(&n) {
        return Err(Error::Unsupported(n));
    }
    let mut f_max = 1;
    while failing_rows(n, f_max + 1).is_empty() {
        f_max += 1;
    }
    let estimate = if n <= 3 { 0 } else { n - f_max - 1 };
    // with f = b every body row has exactly two positions
    let f = f_max + 1;
    let pairs_correction = n >= 8 && n % 4 == 0 && f == n / 4 + 1 && failing_rows(n, f) == [f];
    let case_correction = CASE_CORRECTIONS.contains(&n);
    let value = estimate - usize::from(pairs_correction) - usize::from(case_correction);
    Ok(SpaghettiBound {
        n,
        f_max,
        estimate,
        pairs_correction,
        case_correction,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_corners() {
        assert_eq!(n_bf(2, 2), 5);
        assert_eq!(n_bf(3, 3), 9);
        assert_eq!(n_bf(3, 9), 33);
        assert_eq!(n_bf(21, 21), 81);
        assert_eq!(n_bf(2, 21), 133);
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(spaghetti_boundary(8).unwrap().value, 4);
        assert_eq!(spaghetti_boundary(21).unwrap().value, 14);
        assert_eq!(spaghetti_boundary(32).unwrap().value, 22);
        assert_eq!(spaghetti_boundary(2).unwrap().value, 0);
        assert_eq!(spaghetti_boundary(4).unwrap().value, 2);
        assert!(spaghetti_boundary(81).is_err());
    }

    #[test]
    fn pair_correction_sizes() {
        for n in 2..=SPAGHETTI_MAX_N {
            let b = spaghetti_boundary(n).unwrap();
            assert_eq!(
                b.pairs_correction,
                n % 4 == 0 && (8..=28).contains(&n),
                "n={n}"
            );
        }
    }
}
