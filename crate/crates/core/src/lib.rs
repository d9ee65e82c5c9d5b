//! Shuffled equi-n-squares.
//!
//! An equi-n-square is an n×n grid colored with digits `0..n`, each digit
//! used n times. The state is changed by H-moves (independent row
//! rotations) and V-moves (independent column rotations) and read out by
//! indirection: the input's base-n digits `x_k` select the cells `(k, x_k)`.
//!
//! Modules:
//! - [`position`], [`moves`], [`state`], [`counting`]: the formal square,
//!   rotations, states and closed-form counts.
//! - [`ngon`]: subsets of Z/nZ, rotate-apart search and cyclotomic balance.
//! - [`optimize`]: row-maximizing V-moves, Minrows, the spaghetti boundary
//!   and one-shuffle mapping of n-sets onto graphs.
//! - [`flows`]: common transversals by max-flow, latin partitions and the
//!   wavy-latin check.
//! - [`transit`]: compiling state transitions into move sequences.
//! - [`stream`]: indirection, the standard operation mode, output forcing
//!   and bias figures.

pub mod counting;
pub mod error;
pub mod flows;
pub mod moves;
pub mod ngon;
pub mod optimize;
pub mod position;
pub mod scalar;
pub mod state;
pub mod stream;
pub mod transit;

pub use error::{Error, Result};
pub use moves::{Axis, ElementaryMove, MoveSequence};
pub use position::{Position, PositionArray, PositionSet};
pub use state::SquareState;

/// Default real scalar for reported floating-point figures.
pub type Scalar = f64;
/// Exact rational used for bias figures and bound checks.
pub type Rational = num_rational::BigRational;
/// Integer polynomials over machine integers (cyclotomics up to moderate n).
pub type IntPoly = ngon::Poly<i64>;
/// Integer polynomials over big integers.
pub type BigPoly = ngon::Poly<num_bigint::BigInt>;
