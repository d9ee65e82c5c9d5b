//! Closed-form counting quantities: number of states, the latin-square lower
//! bound, the shuffle-distance floor and the average number of shuffles
//! needed to reach a random n-array.

use crate::error::Result;
use crate::position::check_n;
use crate::scalar::{log2_biguint, ratio_to_real, Real};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Exact number of states `(n²)! / (n!)^(n-1)`.
pub fn state_count(n: usize) -> Result<BigUint> {
    check_n(n)?;
    Ok(factorial(n * n) / factorial(n).pow((n - 1) as u32))
}

/// `log2` of [`state_count`].
pub fn log2_state_count<T: Real>(n: usize) -> Result<T> {
    let s = state_count(n)?;
    Ok(T::from_f64(log2_biguint(&s)).unwrap())
}

/// `log2((n!)^(2n) / n^(n²))`, the latin-square count lower bound.
pub fn log2_latin_lower_bound<T: Real>(n: usize) -> Result<T> {
    check_n(n)?;
    let num = factorial(n).pow((2 * n) as u32);
    let den = BigUint::from(n).pow((n * n) as u32);
    Ok(T::from_f64(log2_biguint(&num) - log2_biguint(&den)).unwrap())
}

/// Least `d` with `n^(2nd) >= s_n`: states reachable with `d` shuffles cannot
/// outnumber the shuffles themselves.
pub fn shuffle_lower_bound(n: usize) -> Result<usize> {
    let s = state_count(n)?;
    let per_shuffle = BigUint::from(n).pow((2 * n) as u32);
    let mut reach = BigUint::one();
    let mut d = 0;
    while reach < s {
        reach *= &per_shuffle;
        d += 1;
    }
    Ok(d)
}

/// Exact `n^(2n) / (n² (n²-1) ... (n²-n+1))`.
pub fn avg_shuffles_exact(n: usize) -> Result<BigRational> {
    check_n(n)?;
    let num = BigInt::from(n).pow((2 * n) as u32);
    let nn = n * n;
    let den = (0..n).fold(BigInt::one(), |acc, i| acc * BigInt::from(nn - i));
    Ok(BigRational::new(num, den))
}

/// Average number of shuffles, evaluated in log space so that it never
/// overflows: `exp(-Σ ln(1 - i/n²))`.
pub fn avg_shuffles<T: Real>(n: usize) -> Result<T> {
    check_n(n)?;
    if n <= 64 {
        return Ok(ratio_to_real(&avg_shuffles_exact(n)?));
    }
    let nn = (n as f64) * (n as f64);
    let log: f64 = (1..n).map(|i| -(-(i as f64) / nn).ln_1p()).sum();
    Ok(T::from_f64(log.exp()).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_has_twelve_states() {
        assert_eq!(state_count(2).unwrap(), BigUint::from(12u32));
        let l: f64 = log2_state_count(2).unwrap();
        assert!((l - 12f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn floor_small_values() {
        assert_eq!(shuffle_lower_bound(2).unwrap(), 1);
        assert_eq!(shuffle_lower_bound(16).unwrap(), 8);
    }

    #[test]
    fn sh_of_three() {
        let q = avg_shuffles_exact(3).unwrap();
        assert_eq!(q, BigRational::new(BigInt::from(729), BigInt::from(504)));
        let v: f64 = avg_shuffles(3).unwrap();
        assert!((v - 1.446428571).abs() < 1e-8);
    }

    #[test]
    fn log_space_agrees_with_exact_near_switch() {
        for n in [65usize, 80, 100] {
            let exact: f64 = ratio_to_real(&avg_shuffles_exact(n).unwrap());
            let v: f64 = avg_shuffles(n).unwrap();
            assert!((exact - v).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn f32_flavor() {
        let v: f32 = avg_shuffles(2).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-6);
    }
}
