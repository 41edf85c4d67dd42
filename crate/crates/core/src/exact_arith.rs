//! Arbitrary-precision integers and rationals, plus the combinatorial numbers
//! the rest of the crate is built from.
//!
//! Rationals are `num_rational::BigRational`, which is kept reduced with a
//! positive denominator on every construction, so `==` is mathematical equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type ExactInteger = BigInt;
pub type ExactRational = BigRational;

/// Integer as a rational.
pub fn int(v: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `num/den`, reduced. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_integer(v: ExactInteger) -> ExactRational {
    BigRational::from_integer(v)
}

/// Binomial coefficient `C(n, i)`, zero when `i > n`.
///
/// Uses the running product `C(n, k) = C(n, k-1) * (n - k + 1) / k`; every
/// intermediate is itself a binomial coefficient, so the division is exact.
pub fn binomial(n: u64, i: u64) -> ExactInteger {
    if i > n {
        return BigInt::zero();
    }
    let k = i.min(n - i);
    let mut acc = BigInt::one();
    for j in 1..=k {
        acc *= n - k + j;
        acc /= j;
    }
    acc
}

/// Row `n` of Pascal's triangle.
pub fn pascal_row(n: u64) -> Vec<ExactInteger> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut acc = BigInt::one();
    row.push(acc.clone());
    for k in 1..=n {
        acc = acc * (n - k + 1) / k;
        row.push(acc.clone());
    }
    row
}

/// `C(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> ExactRational {
    BigRational::new(binomial(2 * n, n), BigInt::from(n + 1))
}

pub fn pow2(k: u64) -> ExactInteger {
    BigInt::one() << k
}

/// Renders as `p/q`, or `p` when the denominator is 1. Sign goes on the numerator.
pub fn format_rational(r: &ExactRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `-2.75`.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let s = text.trim();
    let bad = |msg: &str| Error::parse(format!("{s:?}"), msg.to_string());
    if s.is_empty() {
        return Err(bad("empty rational"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = parse_int(p).ok_or_else(|| bad("bad numerator"))?;
        let den: BigInt = parse_int(q).ok_or_else(|| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad decimal fraction"));
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) || whole.len() > whole_digits.len() + 1
        {
            return Err(bad("bad decimal"));
        }
        let digits = format!("{whole_digits}{frac}");
        let mut num: BigInt = digits.parse().map_err(|_| bad("bad decimal"))?;
        if negative {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(num, den));
    }
    parse_int(s)
        .map(BigRational::from_integer)
        .ok_or_else(|| bad("not a rational"))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Decimal rendering with exactly `places` digits after the point, rounded
/// half away from zero.
pub fn to_decimal_string(r: &ExactRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            frac.to_string(),
            width = places
        )
    }
}

/// `r^k` for a nonnegative exponent.
pub fn pow_rational(r: &ExactRational, k: u32) -> ExactRational {
    num_traits::pow(r.clone(), k as usize)
}
