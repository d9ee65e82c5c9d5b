//! Indirection, the standard operation mode, output forcing and the
//! intrinsic-bias figures.

use crate::error::{Error, Result};
use crate::moves::{Axis, ElementaryMove, MoveSequence};
use crate::optimize::{array_onto_graph, in_guaranteed_range, KeyOptions};
use crate::position::{check_n, Position, PositionArray};
use crate::state::SquareState;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// A number below `n^n` kept as its `n` base-n digits, least significant
/// first (`digits[k] = x_k`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseNNumber {
    n: usize,
    digits: Vec<usize>,
}

impl BaseNNumber {
    pub fn new(n: usize, digits: Vec<usize>) -> Result<Self> {
        check_n(n)?;
        if digits.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: digits.len(),
            });
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= n) {
            return Err(Error::Precondition(format!("digit {d} not in [0, {n})")));
        }
        Ok(Self { n, digits })
    }

    pub fn from_value(n: usize, value: &BigUint) -> Result<Self> {
        check_n(n)?;
        let base = BigUint::from(n);
        let mut v = value.clone();
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            let (q, r) = v.div_rem(&base);
            digits.push(r.to_usize().expect("remainder below n"));
            v = q;
        }
        if !v.is_zero() {
            return Err(Error::Precondition(format!("{value} is not below {n}^{n}")));
        }
        Ok(Self { n, digits })
    }

    pub fn value(&self) -> BigUint {
        let base = BigUint::from(self.n);
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &base + BigUint::from(d))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            digits: (0..n).map(|_| rng.gen_range(0..n)).collect(),
        })
    }

    /// Parses a decimal value, or digits `x_{n-1} ... x_0` separated by
    /// spaces or commas.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let bad = |msg: String| Error::Parse { line: 0, msg };
        match tokens.len() {
            1 => {
                let v: BigUint = tokens[0]
                    .parse()
                    .map_err(|_| bad(format!("not a number: {}", tokens[0])))?;
                Self::from_value(n, &v)
            }
            k if k == n => {
                let mut digits = tokens
                    .iter()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| bad(format!("not a digit: {t}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                digits.reverse();
                Self::new(n, digits)
            }
            k => Err(bad(format!(
                "expected 1 value or {n} digits, got {k} tokens"
            ))),
        }
    }

    /// Digits `x_{n-1} ... x_0` separated by spaces.
    pub fn digit_string(&self) -> String {
        self.digits
            .iter()
            .rev()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The H-graph `(k, x_k)` read by H-indirection.
    pub fn h_graph(&self) -> PositionArray {
        PositionArray::h_graph(self.n, &self.digits).expect("digits are rows")
    }
}

impl fmt::Display for BaseNNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

fn check_same_n(state: &SquareState, x: &BaseNNumber) -> Result<()> {
    if state.n() != x.n() {
        return Err(Error::SizeMismatch {
            expected: state.n(),
            found: x.n(),
        });
    }
    Ok(())
}

/// `y_k` is the digit at `(k, x_k)`.
pub fn h_indirect(state: &SquareState, x: &BaseNNumber) -> Result<BaseNNumber> {
    check_same_n(state, x)?;
    let digits = x
        .digits
        .iter()
        .enumerate()
        .map(|(k, &r)| state.digit(Position::new(k, r)))
        .collect();
    Ok(BaseNNumber { n: x.n, digits })
}

/// `y_k` is the digit at `(x_k, k)`.
pub fn v_indirect(state: &SquareState, x: &BaseNNumber) -> Result<BaseNNumber> {
    check_same_n(state, x)?;
    let digits = x
        .digits
        .iter()
        .enumerate()
        .map(|(k, &c)| state.digit(Position::new(c, k)))
        .collect();
    Ok(BaseNNumber { n: x.n, digits })
}

/// Reads `n` arbitrary cells (repeats allowed): `y_k` is the digit at
/// `cells[k]`.
pub fn general_indirect(state: &SquareState, cells: &[Position]) -> Result<BaseNNumber> {
    let n = state.n();
    if cells.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: cells.len(),
        });
    }
    let digits = cells
        .iter()
        .map(|p| p.check(n).map(|p| state.digit(p)))
        .collect::<Result<_>>()?;
    Ok(BaseNNumber { n, digits })
}

/// Where the two HV-shuffles of each standard-mode step come from.
#[derive(Clone, Debug)]
pub enum ShuffleSource {
    /// Uniform random offsets.
    Seeded(ChaCha8Rng),
    /// An explicit list of moves, consumed four (HVHV) at a time.
    Schedule {
        moves: Vec<ElementaryMove>,
        next: usize,
    },
}

impl ShuffleSource {
    pub fn seeded(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        ShuffleSource::Seeded(rng)
    }

    pub fn schedule(seq: &MoveSequence) -> Self {
        ShuffleSource::Schedule {
            moves: seq.moves().to_vec(),
            next: 0,
        }
    }

    /// The next two HV-shuffles.
    pub fn next_step(&mut self, n: usize) -> Result<MoveSequence> {
        match self {
            ShuffleSource::Seeded(rng) => {
                let moves = [Axis::H, Axis::V, Axis::H, Axis::V]
                    .into_iter()
                    .map(|axis| {
                        ElementaryMove::new(axis, (0..n).map(|_| rng.gen_range(0..n)).collect())
                    })
                    .collect::<Result<Vec<_>>>()?;
                MoveSequence::from_moves(n, moves)
            }
            ShuffleSource::Schedule { moves, next } => {
                let step = *next / 4;
                if *next + 4 > moves.len() {
                    return Err(Error::SourceExhausted(step));
                }
                let chunk = moves[*next..*next + 4].to_vec();
                if chunk
                    .iter()
                    .zip([Axis::H, Axis::V, Axis::H, Axis::V])
                    .any(|(m, a)| m.axis != a)
                {
                    return Err(Error::Precondition(format!(
                        "schedule step {step} is not HVHV"
                    )));
                }
                *next += 4;
                MoveSequence::from_moves(n, chunk)
            }
        }
    }
}

/// For each input: two HV-shuffles from `src`, then H-indirection.
pub fn standard_mode_run(
    state: &SquareState,
    inputs: &[BaseNNumber],
    src: &mut ShuffleSource,
) -> Result<(Vec<BaseNNumber>, SquareState)> {
    let mut cur = state.clone();
    let mut out = Vec::with_capacity(inputs.len());
    for x in inputs {
        let step = src.next_step(cur.n())?;
        cur = cur.apply(&step)?;
        out.push(h_indirect(&cur, x)?);
    }
    Ok((out, cur))
}

/// Two HV-shuffles after which H-indirection of `x` yields `y`: cells
/// spelling `y` are mapped in order onto the H-graph of `x`.
pub fn force_shuffles(
    state: &SquareState,
    x: &BaseNNumber,
    y: &BaseNNumber,
    opts: &KeyOptions,
) -> Result<MoveSequence> {
    check_same_n(state, x)?;
    check_same_n(state, y)?;
    let n = state.n();
    if !in_guaranteed_range(n) {
        return Err(Error::Unsupported(n));
    }
    let mut pools: Vec<Vec<Position>> = state.color_classes();
    for p in &mut pools {
        p.reverse();
    }
    let cells: Vec<Position> = y
        .digits
        .iter()
        .map(|&d| pools[d].pop().expect("each digit has n cells"))
        .collect();
    let seq = array_onto_graph(&PositionArray::new(n, cells)?, &x.h_graph(), opts)?;
    if h_indirect(&state.apply(&seq)?, x)? != *y {
        return Err(Error::Internal(
            "forced shuffles do not reproduce the target".into(),
        ));
    }
    Ok(seq)
}

/// A schedule of `4 l` moves under which the standard mode maps `inputs`
/// to `targets`.
pub fn force_run(
    state: &SquareState,
    inputs: &[BaseNNumber],
    targets: &[BaseNNumber],
    opts: &KeyOptions,
) -> Result<MoveSequence> {
    if inputs.len() != targets.len() {
        return Err(Error::SizeMismatch {
            expected: inputs.len(),
            found: targets.len(),
        });
    }
    let mut cur = state.clone();
    let mut out = MoveSequence::new(state.n());
    for (x, y) in inputs.iter().zip(targets) {
        let step = force_shuffles(&cur, x, y, opts)?;
        cur = cur.apply(&step)?;
        out.extend(&step);
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Expected colors `e` of a uniform n-set, missing colors `b = n - e`, and
/// expected absent digits `b_n` of a uniform n-digit base-n string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bias {
    pub n: usize,
    pub e: BigRational,
    pub b: BigRational,
    pub b_n: BigRational,
}

pub fn bias(n: usize) -> Result<Bias> {
    check_n(n)?;
    let mut num = BigInt::zero();
    for r in 1..=n {
        let mut with_all = BigInt::zero();
        for k in 0..r {
            let term = binomial(r, k) * binomial((r - k) * n, n);
            if k % 2 == 0 {
                with_all += term;
            } else {
                with_all -= term;
            }
        }
        num += BigInt::from(r) * binomial(n, r) * with_all;
    }
    let e = BigRational::new(num, binomial(n * n, n));
    let nn = BigRational::from_integer(BigInt::from(n));
    let b = &nn - &e;
    let ratio = BigRational::new(BigInt::from(n - 1), BigInt::from(n));
    let b_n = &nn * num_traits::pow(ratio, n);
    Ok(Bias { n, e, b, b_n })
}

/// Whether some row or column shows at least √n distinct digits (always
/// true for an equi-n-square).
pub fn stein_check(state: &SquareState) -> bool {
    let n = state.n();
    let distinct = |cells: &mut dyn Iterator<Item = Position>| {
        let mut seen = vec![false; n];
        cells
            .filter(|&p| !std::mem::replace(&mut seen[state.digit(p)], true))
            .count()
    };
    (0..n).any(|i| {
        let r = distinct(&mut (0..n).map(|c| Position::new(c, i)));
        let c = distinct(&mut (0..n).map(|r| Position::new(i, r)));
        r * r >= n || c * c >= n
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio_to_decimal;

    #[test]
    fn base_n_round_trip() {
        let x = BaseNNumber::from_value(3, &BigUint::from(11u32)).unwrap();
        assert_eq!(x.digits(), &[2, 0, 1]);
        assert_eq!(x.value(), BigUint::from(11u32));
        assert_eq!(x.digit_string(), "1 0 2");
        assert_eq!(BaseNNumber::parse(3, "1 0 2").unwrap(), x);
        assert_eq!(BaseNNumber::parse(3, "11").unwrap(), x);
        assert!(BaseNNumber::parse(3, "27").is_err());
        assert!(BaseNNumber::new(3, vec![0, 3, 0]).is_err());
    }

    #[test]
    fn indirection_examples() {
        let s = SquareState::row_index(5).unwrap();
        let x = BaseNNumber::new(5, vec![4, 0, 2, 2, 1]).unwrap();
        assert_eq!(h_indirect(&s, &x).unwrap(), x);
        // digit(0,0)=0, digit(1,0)=1, digit(0,1)=1, digit(1,1)=0
        let s = SquareState::new(2, vec![0, 1, 1, 0]).unwrap();
        let x = BaseNNumber::from_value(2, &BigUint::from(1u32)).unwrap();
        let y = h_indirect(&s, &x).unwrap();
        assert_eq!(y.value(), BigUint::from(3u32));
        assert!(x.h_graph().to_set().is_h_graph());
        assert_eq!(v_indirect(&s.transpose(), &x).unwrap(), y);
    }

    #[test]
    fn zero_shuffles_read_back() {
        let n = 4;
        let s = SquareState::row_index(n).unwrap();
        let zero: Vec<ElementaryMove> = (0..8)
            .map(|i| ElementaryMove::zero(if i % 2 == 0 { Axis::H } else { Axis::V }, n))
            .collect();
        let mut src = ShuffleSource::schedule(&MoveSequence::from_moves(n, zero).unwrap());
        let inputs = vec![
            BaseNNumber::new(n, vec![1, 2, 3, 0]).unwrap(),
            BaseNNumber::new(n, vec![0, 0, 3, 3]).unwrap(),
        ];
        let (out, end) = standard_mode_run(&s, &inputs, &mut src).unwrap();
        assert_eq!(out, inputs);
        assert_eq!(end, s);
        assert!(matches!(
            standard_mode_run(&s, &inputs[..1], &mut src),
            Err(Error::SourceExhausted(2))
        ));
    }

    #[test]
    fn seeded_runs_replay() {
        let n = 6;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = SquareState::random(n, &mut rng).unwrap();
        let inputs: Vec<_> = (0..10)
            .map(|_| BaseNNumber::random(n, &mut rng).unwrap())
            .collect();
        let a = standard_mode_run(&s, &inputs, &mut ShuffleSource::seeded(7, 0)).unwrap();
        let b = standard_mode_run(&s, &inputs, &mut ShuffleSource::seeded(7, 0)).unwrap();
        let c = standard_mode_run(&s, &inputs, &mut ShuffleSource::seeded(7, 1)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn forcing() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let opts = KeyOptions::default();
        for n in [2, 5, 9, 16] {
            let s = SquareState::random(n, &mut rng).unwrap();
            let x = BaseNNumber::random(n, &mut rng).unwrap();
            let y = BaseNNumber::random(n, &mut rng).unwrap();
            let seq = force_shuffles(&s, &x, &y, &opts).unwrap();
            assert_eq!(seq.half_shuffles(), 4);
            assert_eq!(h_indirect(&s.apply(&seq).unwrap(), &x).unwrap(), y);
            let same =
                force_shuffles(&s, &x, &BaseNNumber::new(n, vec![1; n]).unwrap(), &opts).unwrap();
            assert_eq!(
                h_indirect(&s.apply(&same).unwrap(), &x).unwrap().digits(),
                vec![1; n].as_slice()
            );
        }
    }

    #[test]
    fn forced_schedule_replays() {
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = SquareState::random(n, &mut rng).unwrap();
        let xs: Vec<_> = (0..5)
            .map(|_| BaseNNumber::random(n, &mut rng).unwrap())
            .collect();
        let ys: Vec<_> = (0..5)
            .map(|_| BaseNNumber::random(n, &mut rng).unwrap())
            .collect();
        let sched = force_run(&s, &xs, &ys, &KeyOptions::default()).unwrap();
        assert_eq!(sched.half_shuffles(), 20);
        let (out, _) = standard_mode_run(&s, &xs, &mut ShuffleSource::schedule(&sched)).unwrap();
        assert_eq!(out, ys);
    }

    #[test]
    fn bias_figures() {
        let b2 = bias(2).unwrap();
        assert_eq!(ratio_to_decimal(&b2.e, 2), "1.67");
        assert_eq!(ratio_to_decimal(&b2.b, 2), "0.33");
        assert_eq!(ratio_to_decimal(&bias(10).unwrap().b_n, 2), "3.49");
        for n in 2..=12 {
            let b = bias(n).unwrap();
            assert_eq!(&b.e + &b.b, BigRational::from_integer(BigInt::from(n)));
            assert!(b.b < b.b_n);
        }
    }

    #[test]
    fn general_reading_and_stein() {
        let s = SquareState::cyclic_latin(3).unwrap();
        let cells = [Position::new(0, 0); 3];
        assert_eq!(general_indirect(&s, &cells).unwrap().digits(), &[0, 0, 0]);
        assert!(stein_check(&s));
        assert!(stein_check(&SquareState::row_index(9).unwrap()));
    }
}
