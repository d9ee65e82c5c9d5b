//! Scalar abstractions for the real-valued quantities (state counts, shuffle
//! averages, bias figures). Exact work is done in big integers and
//! [`BigRational`]; the final conversion goes through [`Real`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive, Zero};
use std::fmt::{Debug, Display};

/// Floating-point scalar used for reported real values.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync {}

impl Real for f32 {}
impl Real for f64 {}

/// `log2(x)` of a positive big integer, accurate to the precision of `f64`.
pub fn log2_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// Converts an exact rational into a scalar.
///
/// Numerator and denominator are scaled down together first so that values
/// with huge components stay finite.
pub fn ratio_to_real<T: Real>(q: &BigRational) -> T {
    let num = q.numer();
    let den = q.denom();
    if num.is_zero() {
        return T::zero();
    }
    let nb = num.bits();
    let db = den.bits();
    let excess = nb.max(db).saturating_sub(900);
    let n: BigInt = num >> excess;
    let d: BigInt = den >> excess;
    let v = n.to_f64().unwrap() / d.to_f64().unwrap();
    T::from_f64(v).unwrap()
}

/// Rounds a rational to `places` decimals (half away from zero) and renders it.
pub fn ratio_to_decimal(q: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = q * BigRational::from_integer(scale.clone());
    let neg = scaled < BigRational::zero();
    let abs = if neg { -scaled } else { scaled };
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let rounded = (abs + half).floor().to_integer();
    let int_part = &rounded / &scale;
    let frac = &rounded % &scale;
    let sign = if neg && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac.to_string(),
            width = places as usize
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_of_large_powers() {
        let x = BigUint::from(1u32) << 200u32;
        assert!((log2_biguint(&x) - 200.0).abs() < 1e-12);
        let y = BigUint::from(12u32);
        assert!((log2_biguint(&y) - 12f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn decimal_rendering_rounds_half_up() {
        let q = BigRational::new(BigInt::from(5), BigInt::from(3));
        assert_eq!(ratio_to_decimal(&q, 2), "1.67");
        let q = BigRational::new(BigInt::from(1), BigInt::from(8));
        assert_eq!(ratio_to_decimal(&q, 2), "0.13");
        let q = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert_eq!(ratio_to_decimal(&q, 3), "-0.333");
    }

    #[test]
    fn huge_ratio_converts() {
        let num = BigInt::from(3) * (BigInt::from(1) << 5000u32);
        let den = BigInt::from(1) << 5000u32;
        let q = BigRational::new(num, den);
        let v: f64 = ratio_to_real(&q);
        assert!((v - 3.0).abs() < 1e-12);
        let w: f32 = ratio_to_real(&q);
        assert!((w - 3.0).abs() < 1e-6);
    }
}
