//! Rigorous real enclosures for quantities like `(Σ a_i^p)^{1/p}` with
//! rational `a_i` and rational `p`.
//!
//! An [`Enclosure`] is a closed interval with exact rational endpoints that
//! provably contains the real value. Roots are computed from exact big-integer
//! `n`-th roots, and every operation rounds its endpoints outward to a dyadic
//! with a caller-chosen number of significant bits, which keeps endpoint sizes
//! bounded while preserving containment.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, int, parse_rational, to_decimal_string, ExactRational};

pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// A norm exponent `1 <= p <= ∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(ExactRational),
    Infinite,
}

impl Exponent {
    pub fn finite(p: ExactRational) -> Result<Self> {
        if p < int(1) {
            return Err(Error::InvalidArgument(format!(
                "exponent {} is below 1",
                format_rational(&p)
            )));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn integer(p: u32) -> Self {
        assert!(p >= 1, "exponent must be >= 1");
        Exponent::Finite(int(p as i64))
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> ExactRational {
        match self {
            Exponent::Finite(p) => p.recip(),
            Exponent::Infinite => ExactRational::zero(),
        }
    }

    /// Inverse of [`Self::reciprocal`]; `None` unless `0 <= r <= 1`.
    pub fn from_reciprocal(r: &ExactRational) -> Option<Self> {
        if r.is_negative() || r > &int(1) {
            None
        } else if r.is_zero() {
            Some(Exponent::Infinite)
        } else {
            Some(Exponent::Finite(r.recip()))
        }
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(&self) -> Exponent {
        Exponent::from_reciprocal(&(int(1) - self.reciprocal())).expect("1 - 1/p lies in [0, 1]")
    }

    /// `Some(k)` when the exponent is a (small) integer.
    pub fn as_integer(&self) -> Option<u32> {
        match self {
            Exponent::Finite(p) if p.is_integer() => p.to_integer().to_u32(),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => f.write_str(&format_rational(p)),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
            other => Exponent::finite(parse_rational(other)?),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Closed interval `[lo, hi]` known to contain a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: ExactRational,
    hi: ExactRational,
}

impl Enclosure {
    pub fn exact(v: ExactRational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.hi
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &ExactRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Midpoint with `places` decimals.
    pub fn to_decimal(&self, places: usize) -> String {
        to_decimal_string(&self.midpoint(), places)
    }

    /// `width <= 2^-bits * max(|lo|, |hi|)`.
    pub fn relative_width_within(&self, bits: u32) -> bool {
        let mag = self.lo.abs().max(self.hi.abs());
        if mag.is_zero() {
            return true;
        }
        self.width() * BigRational::from_integer(BigInt::one() << bits) <= mag
    }

    pub fn clamp_nonnegative(self) -> Self {
        let zero = ExactRational::zero();
        Enclosure {
            lo: self.lo.max(zero.clone()),
            hi: self.hi.max(zero),
        }
    }

    fn outward(lo: ExactRational, hi: ExactRational, bits: u32) -> Self {
        Enclosure {
            lo: round_down(&lo, bits),
            hi: round_up(&hi, bits),
        }
    }

    pub fn add(&self, other: &Enclosure, bits: u32) -> Self {
        Enclosure::outward(&self.lo + &other.lo, &self.hi + &other.hi, bits)
    }

    pub fn sub(&self, other: &Enclosure, bits: u32) -> Self {
        Enclosure::outward(&self.lo - &other.hi, &self.hi - &other.lo, bits)
    }

    pub fn scale(&self, c: &ExactRational, bits: u32) -> Self {
        if c.is_negative() {
            Enclosure::outward(&self.hi * c, &self.lo * c, bits)
        } else {
            Enclosure::outward(&self.lo * c, &self.hi * c, bits)
        }
    }

    pub fn mul(&self, other: &Enclosure, bits: u32) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("nonempty").clone();
        let hi = products.iter().max().expect("nonempty").clone();
        Enclosure::outward(lo, hi, bits)
    }

    /// `x^e` for rational `e >= 0`; negative parts of the enclosure are
    /// treated as 0, since `x^e` is only taken of nonnegative quantities.
    pub fn pow(&self, e: &ExactRational, bits: u32) -> Self {
        assert!(!e.is_negative(), "negative exponent");
        if e.is_zero() {
            return Enclosure::exact(ExactRational::one());
        }
        let zero = ExactRational::zero();
        let lo = self.lo.clone().max(zero.clone());
        let hi = self.hi.clone().max(zero);
        let a = e.numer().to_u32().expect("exponent numerator fits in u32");
        let b = e
            .denom()
            .to_u32()
            .expect("exponent denominator fits in u32");
        Enclosure::outward(
            rational_root(&lo, a, b, bits, false),
            rational_root(&hi, a, b, bits, true),
            bits,
        )
    }

    /// `x^{1/p}`.
    pub fn root(&self, p: &ExactRational, bits: u32) -> Self {
        self.pow(&p.recip(), bits)
    }

    #[cfg(test)]
    pub(crate) fn contains_f64_approx(&self, v: f64, tol: f64) -> bool {
        (self.to_f64() - v).abs() <= tol
    }
}

impl fmt::Display for Enclosure {
    /// Exact value as `p/q` when the enclosure is a point, otherwise the
    /// midpoint to 30 decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            f.write_str(&format_rational(&self.lo))
        } else {
            f.write_str(&self.to_decimal(30))
        }
    }
}

/// Outcome of comparing two real quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    StrictlyLess,
    EqualWithin,
    StrictlyGreater,
}

/// Decides `lhs` vs `rhs` from enclosures computed at `bits`, retrying once
/// at `2 * bits`. Overlapping enclosures whose union is narrower than
/// `2^{-bits/2}` (relative to the larger magnitude, floored at 1) count as
/// equal.
pub fn decide<L, R>(lhs: L, rhs: R, bits: u32) -> Result<Decision>
where
    L: Fn(u32) -> Result<Enclosure>,
    R: Fn(u32) -> Result<Enclosure>,
{
    for attempt in [bits, bits * 2] {
        let l = lhs(attempt)?;
        let r = rhs(attempt)?;
        if l.hi < r.lo {
            return Ok(Decision::StrictlyLess);
        }
        if l.lo > r.hi {
            return Ok(Decision::StrictlyGreater);
        }
        let span = (&l.hi).max(&r.hi) - (&l.lo).min(&r.lo);
        let scale = l.hi.abs().max(r.hi.abs()).max(int(1));
        if span * BigRational::from_integer(BigInt::one() << (attempt / 2)) <= scale {
            return Ok(Decision::EqualWithin);
        }
    }
    Err(Error::PrecisionExhausted { bits: bits * 2 })
}

fn bit_length(v: &BigInt) -> i64 {
    v.bits() as i64
}

/// Largest dyadic `<= r` with about `bits` significant bits.
fn round_down(r: &ExactRational, bits: u32) -> ExactRational {
    if r.is_zero() {
        return r.clone();
    }
    let shift = bits as i64 - (bit_length(r.numer()) - bit_length(r.denom()));
    if shift >= 0 {
        let scale = BigInt::one() << shift as u64;
        let n = (r.numer() * &scale).div_floor(r.denom());
        BigRational::new(n, scale)
    } else {
        let scale = BigInt::one() << (-shift) as u64;
        let n = r.numer().div_floor(&(r.denom() * &scale));
        BigRational::from_integer(n * scale)
    }
}

fn round_up(r: &ExactRational, bits: u32) -> ExactRational {
    -round_down(&-r, bits)
}

/// Lower (or upper, if `upper`) bound of `x^{a/b}` for `x >= 0`, accurate to
/// about `bits` bits.
fn rational_root(x: &ExactRational, a: u32, b: u32, bits: u32, upper: bool) -> ExactRational {
    if x.is_zero() {
        return ExactRational::zero();
    }
    let y = num_traits::pow(x.clone(), a as usize);
    if b == 1 {
        return y;
    }
    // y^{1/b} = (N D^{b-1})^{1/b} / D
    let (n, d) = (y.numer(), y.denom());
    let m = n * num_traits::pow(d.clone(), (b - 1) as usize);
    let shift = (bits as i64 + 2 - bit_length(&m) / b as i64).max(0) as u64;
    let scaled = m << (shift * b as u64);
    let root = scaled.nth_root(b);
    let exact = num_traits::pow(root.clone(), b as usize) == scaled;
    let numer = if upper && !exact { root + 1 } else { root };
    BigRational::new(numer, d << shift)
}
