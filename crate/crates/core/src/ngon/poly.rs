//! Dense univariate polynomials with integer-like coefficients and
//! cyclotomic polynomials by exact division.

use num_traits::{Num, Signed};
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient ring: machine or big integers.
pub trait Coeff: Clone + Num + Signed + Debug + Display {}
impl<T: Clone + Num + Signed + Debug + Display> Coeff for T {}

/// Coefficients indexed by exponent, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![T::one()],
        }
    }

    /// `c * x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut v = vec![T::zero(); n + 1];
        v[0] = -T::one();
        v[n] = T::one();
        Self::new(v)
    }

    /// `Σ_{e in exps} x^e`, adding repeated exponents.
    pub fn from_exponents(exps: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<T> = Vec::new();
        for e in exps {
            if v.len() <= e {
                v.resize(e + 1, T::zero());
            }
            v[e] = v[e].clone() + T::one();
        }
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `p(x^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![T::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::new(v)
    }

    /// Long division by `d`; `None` if some step needs a non-integral
    /// quotient coefficient.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = rem[i + dd].clone();
            if top.is_zero() {
                continue;
            }
            if !(top.clone() % lead.clone()).is_zero() {
                return None;
            }
            let q = top / lead.clone();
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - q.clone() * c.clone();
            }
            quot[i] = q;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient when `d` divides `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        match self.div_rem(d) {
            Some((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// True iff `d` divides `self` in Z[x].
    pub fn is_divisible_by(&self, d: &Self) -> bool {
        self.div_exact(d).is_some()
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[T], i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        Poly::new(
            (0..len)
                .map(|i| get(&self.coeffs, i) + get(&o.coeffs, i))
                .collect(),
        )
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        self + &(-o)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<T: Coeff> Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("x")?,
                1 => write!(f, "{mag}*x")?,
                _ if unit => write!(f, "x^{e}")?,
                _ => write!(f, "{mag}*x^{e}")?,
            }
        }
        Ok(())
    }
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn euler_totient(n: usize) -> usize {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count()
}

/// `C_1, ..., C_max` (index 0 unused), each obtained by dividing `x^m - 1`
/// by the cyclotomic polynomials of the proper divisors of `m`.
pub fn cyclotomic_table<T: Coeff>(max: usize) -> Vec<Poly<T>> {
    let mut table: Vec<Poly<T>> = vec![Poly::zero()];
    for m in 1..=max {
        let mut p = Poly::x_pow_minus_one(m);
        for d in divisors(m) {
            if d < m {
                p = p
                    .div_exact(&table[d])
                    .expect("cyclotomic factors divide x^m - 1");
            }
        }
        table.push(p);
    }
    table
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic<T: Coeff>(n: usize) -> Poly<T> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let divs = divisors(n);
    let mut done: Vec<(usize, Poly<T>)> = Vec::with_capacity(divs.len());
    for &m in &divs {
        let mut p = Poly::x_pow_minus_one(m);
        for (d, c) in &done {
            if m % d == 0 {
                p = p.div_exact(c).expect("cyclotomic factors divide x^m - 1");
            }
        }
        done.push((m, p));
    }
    done.pop().unwrap().1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = Poly<i64>;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic::<i64>(1), P::new(vec![-1, 1]));
        assert_eq!(cyclotomic::<i64>(2), P::new(vec![1, 1]));
        assert_eq!(cyclotomic::<i64>(4), P::new(vec![1, 0, 1]));
        assert_eq!(cyclotomic::<i64>(6), P::new(vec![1, -1, 1]));
        assert_eq!(cyclotomic::<i64>(36).to_string(), "x^12 - x^6 + 1");
    }

    #[test]
    fn c105_has_a_two() {
        let c = cyclotomic::<BigInt>(105);
        assert!(c.coeffs().iter().any(|x| *x == BigInt::from(-2)));
    }

    #[test]
    fn division_detects_non_integral_steps() {
        let a = P::new(vec![1, 0, 1]);
        let d = P::new(vec![1, 2]);
        assert!(a.div_rem(&d).is_none());
        let (q, r) = P::new(vec![0, 0, 0, 1])
            .div_rem(&P::new(vec![-1, 1]))
            .unwrap();
        assert_eq!(q, P::new(vec![1, 1, 1]));
        assert_eq!(r, P::new(vec![1]));
    }

    #[test]
    fn arithmetic() {
        let a = P::new(vec![1, 1]);
        let b = P::new(vec![-1, 1]);
        assert_eq!(&a * &b, P::new(vec![-1, 0, 1]));
        assert_eq!(&(&a + &b) - &a, b);
        assert_eq!(P::new(vec![1, 0, 3, 0]).degree(), Some(2));
        assert_eq!(a.substitute_power(3), P::new(vec![1, 0, 0, 1]));
        assert_eq!(P::new(vec![2, -3, 1]).eval(&5), 12);
    }
}
