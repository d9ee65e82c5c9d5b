//! Subsets of Z/nZ viewed as vertex sets of the regular n-gon.

mod poly;
mod rotate;

pub use poly::{cyclotomic, cyclotomic_table, divisors, euler_totient, Coeff, Poly};
pub use rotate::{separate_masks, FamilyOutcome};

use crate::error::{Error, Result};
use crate::position::MAX_MASK_N;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NGonSet {
    n: usize,
    members: Vec<usize>,
}

impl NGonSet {
    /// Reduces every element mod n and drops repeats.
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(0));
        }
        let mut members: Vec<usize> = members.into_iter().map(|x| x % n).collect();
        members.sort_unstable();
        members.dedup();
        Ok(Self { n, members })
    }

    pub fn from_signed(n: usize, members: &[i64]) -> Result<Self> {
        Self::new(n, members.iter().map(|&x| x.rem_euclid(n as i64) as usize))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&(x % self.n)).is_ok()
    }

    pub fn translate(&self, v: usize) -> Self {
        Self::new(self.n, self.members.iter().map(|x| x + v)).unwrap()
    }

    pub fn negate(&self) -> Self {
        Self::new(self.n, self.members.iter().map(|x| self.n - x)).unwrap()
    }

    /// Image under multiplication by `u` (a bijection when `gcd(u, n) = 1`).
    pub fn dilate(&self, u: usize) -> Self {
        Self::new(self.n, self.members.iter().map(|x| x * u)).unwrap()
    }

    pub fn intersection_size(&self, other: &Self) -> usize {
        self.members.iter().filter(|&&x| other.contains(x)).count()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection_size(other) == 0
    }

    /// `Σ_{i in S} x^i`.
    pub fn poly<T: Coeff>(&self) -> Poly<T> {
        Poly::from_exponents(self.members.iter().copied())
    }

    pub fn mask(&self) -> Result<u128> {
        if self.n > MAX_MASK_N {
            return Err(Error::Unsupported(self.n));
        }
        Ok(self.members.iter().fold(0u128, |m, &x| m | (1u128 << x)))
    }

    /// Positive circular distances between distinct members, as a sorted set.
    pub fn distances(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                let d = b - a;
                out.push(d.min(self.n - d));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn same_modulus(a: &NGonSet, b: &NGonSet) -> Result<()> {
    if a.n != b.n {
        Err(Error::SizeMismatch {
            expected: a.n,
            found: b.n,
        })
    } else {
        Ok(())
    }
}

/// Least `v` with `(S + v) ∩ T = ∅`, or `None` when every rotation meets `T`.
pub fn rotate_apart_pair(s: &NGonSet, t: &NGonSet) -> Result<Option<usize>> {
    same_modulus(s, t)?;
    let n = s.n;
    let mut hit = vec![false; n];
    for &i in &s.members {
        for &j in &t.members {
            hit[(j + n - i) % n] = true;
        }
    }
    Ok(hit.iter().position(|h| !h))
}

/// Rotations (first set fixed at 0) making all sets pairwise disjoint.
/// `Inseparable` is returned only after the search is exhausted; running out
/// of `budget` rotation trials yields `Unknown`.
pub fn rotate_apart_family(sets: &[NGonSet], budget: u64) -> Result<FamilyOutcome> {
    let Some(first) = sets.first() else {
        return Ok(FamilyOutcome::Separated(Vec::new()));
    };
    for s in sets {
        same_modulus(first, s)?;
    }
    let masks = sets.iter().map(NGonSet::mask).collect::<Result<Vec<_>>>()?;
    Ok(separate_masks(first.n, &masks, budget))
}

/// Sufficient condition `s1 * s2 < n + c - 1` for rotating two sets apart.
pub fn pair_apart_guarantee(s1: usize, s2: usize, c: usize, n: usize) -> bool {
    s1 * s2 + 1 < n + c
}

/// Sufficient condition `((b-1)/b²) s² < n` for rotating `b` sets of the
/// given sizes (each at least 2) apart, together with its side condition:
/// `b <= 2`, or all sizes equal, or `s - b <= 21`.
pub fn family_apart_guarantee(sizes: &[usize], n: usize) -> bool {
    let b = sizes.len();
    if b < 2 || sizes.iter().any(|&s| s < 2) {
        return false;
    }
    let s: usize = sizes.iter().sum();
    let side = b <= 2 || sizes.iter().all(|&x| x == sizes[0]) || s - b <= 21;
    let lhs = BigRational::new(BigInt::from(b - 1), BigInt::from(b * b))
        * BigRational::from_integer(BigInt::from(s * s));
    side && lhs < BigRational::from_integer(BigInt::from(n))
}

/// True iff `S(ω^d) = 0` for a primitive n-th root of unity ω, certified by
/// exact divisibility of `S(x)` by `C_m(x)`, `m = n / gcd(n, d)`.
pub fn is_d_balanced(s: &NGonSet, d: usize) -> Result<bool> {
    let n = s.n;
    if d == 0 || d >= n {
        return Err(Error::Precondition(format!("d = {d} must lie in [1, {n})")));
    }
    let m = n / n.gcd(&d);
    let c = cyclotomic::<BigInt>(m);
    Ok(s.poly::<BigInt>().is_divisible_by(&c))
}

/// True iff every residue has exactly one representation `i + j`,
/// `i in S`, `j in T`. Requires `#S * #T = n`.
pub fn perfect_sum_cover(s: &NGonSet, t: &NGonSet) -> Result<bool> {
    same_modulus(s, t)?;
    let n = s.n;
    if s.len() * t.len() != n {
        return Err(Error::Precondition(format!(
            "#S * #T = {} differs from n = {n}",
            s.len() * t.len()
        )));
    }
    let mut count = vec![0usize; n];
    for &i in &s.members {
        for &j in &t.members {
            count[(i + j) % n] += 1;
        }
    }
    Ok(count.iter().all(|&c| c == 1))
}

/// `Some(m)` when `S` is a coset of the subgroup of `n/m`-multiples, `m = #S`.
pub fn is_regular_subpolygon(s: &NGonSet) -> Option<usize> {
    let m = s.len();
    if m == 0 || s.n % m != 0 {
        return None;
    }
    let step = s.n / m;
    let a = s.members[0];
    (0..m).all(|k| s.contains(a + k * step)).then_some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> NGonSet {
        NGonSet::new(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn pair_examples() {
        assert_eq!(
            rotate_apart_pair(&set(2, &[0]), &set(2, &[0])).unwrap(),
            Some(1)
        );
        let s = set(36, &[25, 24, 13, 12, 1, 0]);
        let t = set(36, &[10, 8, 6, 4, 2, 0]);
        assert_eq!(rotate_apart_pair(&s, &t).unwrap(), None);
        let v = rotate_apart_pair(&set(5, &[0, 1]), &set(5, &[0, 2]))
            .unwrap()
            .unwrap();
        assert!(set(5, &[0, 1]).translate(v).is_disjoint(&set(5, &[0, 2])));
        assert!(rotate_apart_pair(&set(5, &[0]), &set(6, &[0])).is_err());
    }

    #[test]
    fn guarantees() {
        assert!(!pair_apart_guarantee(2, 2, 1, 4));
        assert!(pair_apart_guarantee(2, 2, 1, 5));
        assert!(!pair_apart_guarantee(2, 2, 0, 5));
        assert!(!family_apart_guarantee(&[2, 2, 2], 8));
        assert!(family_apart_guarantee(&[4, 4, 4], 33));
        assert!(!family_apart_guarantee(&[4, 4, 4], 32));
    }

    #[test]
    fn balance() {
        let s = set(36, &[25, 24, 13, 12, 1, 0]);
        assert!(is_d_balanced(&s, 1).unwrap());
        for d in 1..12 {
            assert!(!is_d_balanced(&set(12, &[5]), d).unwrap());
        }
        assert!(is_d_balanced(&set(9, &[0, 3, 6]), 1).unwrap());
        assert!(is_d_balanced(&set(9, &[0, 1]), 0).is_err());
    }

    #[test]
    fn sum_cover() {
        assert!(perfect_sum_cover(&set(4, &[0, 1]), &set(4, &[0, 2])).unwrap());
        assert!(!perfect_sum_cover(&set(4, &[0, 1]), &set(4, &[0, 1])).unwrap());
        assert!(perfect_sum_cover(&set(15, &[0, 5, 10]), &set(15, &[0, 1, 2, 3, 4])).unwrap());
        assert!(perfect_sum_cover(&set(4, &[0]), &set(4, &[0])).is_err());
    }

    #[test]
    fn subpolygons() {
        assert_eq!(is_regular_subpolygon(&set(36, &[0, 12, 24])), Some(3));
        assert_eq!(is_regular_subpolygon(&set(36, &[1, 13, 25])), Some(3));
        assert_eq!(
            is_regular_subpolygon(&set(36, &[25, 24, 13, 12, 1, 0])),
            None
        );
    }

    #[test]
    fn family_wrapper_checks_modulus() {
        assert!(rotate_apart_family(&[set(5, &[0]), set(6, &[0])], 10).is_err());
        let out = rotate_apart_family(&[set(8, &[0, 1]), set(8, &[0, 3]), set(8, &[0, 2])], 1000)
            .unwrap();
        assert!(out.rotations().is_some());
    }
}
