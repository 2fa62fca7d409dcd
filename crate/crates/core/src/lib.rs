//! Exact solving and numerical verification for split families of Thue
//! equations whose factors are linear recurrence sequences.
//!
//! The crate is organised around a pipeline: define a family of integer
//! sequences ([`sequences`]), instantiate the split Thue form for a
//! parameter `n` ([`family`]), isolate its real roots with certified
//! rational intervals ([`roots`]), build the grid of unit values
//! `eta[i][j] = alpha_i - G_j(n)` and its log matrices ([`eta`]), solve the
//! equation exactly for bounded `|y|` ([`solver`]), and run the asymptotic
//! growth analyses ([`analysis`]).
//!
//! All integer computations are exact (`num-bigint`), all real quantities
//! are dyadic rationals carried at a configurable bit precision, and every
//! strict inequality that a verdict depends on is decided in exact rational
//! arithmetic.

pub mod analysis;
pub mod config;
pub mod dyadic;
pub mod eigen;
pub mod error;
pub mod eta;
pub mod family;
pub mod fit;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod roots;
pub mod sequences;
pub mod solver;

pub use error::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;
/// Exact integer scalar used throughout the crate.
pub type Int = num_bigint::BigInt;

pub type Result<T> = std::result::Result<T, Error>;
