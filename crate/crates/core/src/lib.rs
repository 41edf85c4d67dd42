//! Exact calculus for compactly supported piecewise-polynomial functions on the
//! real line, specialised to the binomial simple-function sequence
//!
//! ```text
//! f_0 = χ[-1/2, 1/2),    f_{n+1}(x) = f_n(x + 1/2) + f_n(x - 1/2)
//! ```
//!
//! whose closed form takes the value `C(n, i)` on the `i`-th unit interval of
//! its support. Everything is computed with arbitrary-precision rationals; the
//! only inexact path is the enclosure arithmetic in [`highprec`], used to
//! compare sums and products of real `p`-th roots.
//!
//! Module map:
//! - [`exact_arith`]: big integers/rationals, binomials, Catalan numbers, rendering.
//! - [`piecewise`]: the function algebra (shift, add, multiply, convolve, integrate, norms).
//! - [`highprec`]: rigorous dyadic enclosures of real roots and powers.
//! - [`binom_seq`]: `f_n` and its closed-form products, sums and convolutions.
//! - [`verify`]: identity and inequality suites with structured reports.

pub mod binom_seq;
pub mod error;
pub mod exact_arith;
pub mod highprec;
pub mod piecewise;
pub mod verify;

pub use binom_seq::{BinomSeqHandle, ConvClosedForm};
pub use error::{Error, Result};
pub use exact_arith::{ExactInteger, ExactRational};
pub use highprec::{Enclosure, Exponent};
pub use piecewise::{Interval, Piece, PiecewiseFn, Poly};
pub use verify::{CheckRecord, GridConfig, VerificationReport};
