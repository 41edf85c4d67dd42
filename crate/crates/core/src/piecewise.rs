//! Compactly supported piecewise-polynomial functions with exact rational
//! breakpoints and coefficients.
//!
//! A [`PiecewiseFn`] is a sorted list of disjoint half-open intervals
//! `[lo, hi)`, each carrying a nonzero [`Poly`]; the function is zero
//! elsewhere. Every constructor returns the canonical form (zero pieces
//! dropped, touching neighbours with identical polynomials merged), so
//! structural equality coincides with almost-everywhere equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{
    binomial, format_rational, from_integer, int, parse_rational, to_decimal_string, ExactRational,
};
use crate::highprec::Enclosure;

/// Univariate polynomial, coefficients in ascending degree. The highest stored
/// coefficient is never zero; the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<ExactRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: ExactRational) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1 x`
    pub fn linear(c0: ExactRational, c1: ExactRational) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &ExactRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(ExactRational::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// General composition `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| {
            &(&acc * inner) + &Poly::constant(c.clone())
        })
    }

    /// `x -> self(x + h)`.
    pub fn shifted(&self, h: &ExactRational) -> Poly {
        if h.is_zero() {
            return self.clone();
        }
        self.compose(&Poly::linear(h.clone(), ExactRational::one()))
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ExactRational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / int(k as i64 + 1));
        }
        Poly::new(coeffs)
    }

    pub fn integral(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    fn add_assign_ref(&mut self, other: &Poly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs
                .resize(other.coeffs.len(), ExactRational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ExactRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }
}

impl fmt::Display for Poly {
    /// `1 + x`, `2 - 3/2*x^2`, `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{}*{var}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

/// Half-open interval `[lo, hi)` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: ExactRational,
    hi: ExactRational,
}

impl Interval {
    pub fn new(lo: ExactRational, hi: ExactRational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyInterval {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(Interval { lo, hi })
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

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lo <= x && x < &self.hi
    }

    pub fn translate(&self, by: &ExactRational) -> Interval {
        Interval {
            lo: &self.lo + by,
            hi: &self.hi + by,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {})",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

/// One nonzero polynomial piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    interval: Interval,
    poly: Poly,
}

impl Piece {
    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn lo(&self) -> &ExactRational {
        &self.interval.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.interval.hi
    }

    fn value_at_lo(&self) -> ExactRational {
        self.poly.eval(&self.interval.lo)
    }

    /// Left limit at `hi`.
    fn value_at_hi(&self) -> ExactRational {
        self.poly.eval(&self.interval.hi)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiecewiseFn {
    pieces: Vec<Piece>,
}

impl PiecewiseFn {
    pub fn zero() -> Self {
        PiecewiseFn::default()
    }

    /// `χ_iv`
    pub fn indicator(iv: Interval) -> Self {
        PiecewiseFn {
            pieces: vec![Piece {
                interval: iv,
                poly: Poly::constant(ExactRational::one()),
            }],
        }
    }

    /// Pointwise sum of the given contributions; overlapping intervals add.
    pub fn sum_of<I>(contributions: I) -> Self
    where
        I: IntoIterator<Item = (Interval, Poly)>,
    {
        let contributions: Vec<(Interval, Poly)> = contributions
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        if contributions.is_empty() {
            return PiecewiseFn::zero();
        }
        let mut breaks: Vec<ExactRational> = contributions
            .iter()
            .flat_map(|(iv, _)| [iv.lo.clone(), iv.hi.clone()])
            .collect();
        breaks.sort();
        breaks.dedup();

        // Difference array over the breakpoint grid.
        let mut delta = vec![Poly::zero(); breaks.len()];
        for (iv, poly) in &contributions {
            let start = breaks.binary_search(&iv.lo).expect("breakpoint present");
            let end = breaks.binary_search(&iv.hi).expect("breakpoint present");
            delta[start].add_assign_ref(poly);
            delta[end].add_assign_ref(&-poly);
        }

        let mut running = Poly::zero();
        let mut pieces = Vec::new();
        for (k, d) in delta.iter().enumerate().take(breaks.len() - 1) {
            running.add_assign_ref(d);
            if !running.is_zero() {
                pieces.push(Piece {
                    interval: Interval {
                        lo: breaks[k].clone(),
                        hi: breaks[k + 1].clone(),
                    },
                    poly: running.clone(),
                });
            }
        }
        PiecewiseFn::canonical(pieces)
    }

    /// Builds from pieces that are already sorted and pairwise disjoint.
    fn canonical(pieces: Vec<Piece>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for piece in pieces {
            if piece.poly.is_zero() {
                continue;
            }
            if let Some(last) = out.last_mut() {
                if last.interval.hi == piece.interval.lo && last.poly == piece.poly {
                    last.interval.hi = piece.interval.hi;
                    continue;
                }
            }
            out.push(piece);
        }
        PiecewiseFn { pieces: out }
    }

    /// Validating constructor for externally supplied pieces: they must be
    /// sorted by `lo` and pairwise disjoint.
    pub fn from_sorted_pieces<I>(pieces: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Interval, Poly)>,
    {
        let pieces: Vec<Piece> = pieces
            .into_iter()
            .map(|(interval, poly)| Piece { interval, poly })
            .collect();
        for (k, w) in pieces.windows(2).enumerate() {
            if w[0].interval.hi > w[1].interval.lo {
                return Err(Error::parse(
                    format!("pieces[{}]", k + 1),
                    "pieces must be sorted by lo and disjoint",
                ));
            }
        }
        Ok(PiecewiseFn::canonical(pieces))
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Smallest closed interval outside which the function vanishes.
    pub fn support(&self) -> Option<(ExactRational, ExactRational)> {
        Some((
            self.pieces.first()?.interval.lo.clone(),
            self.pieces.last()?.interval.hi.clone(),
        ))
    }

    /// Sorted, deduplicated piece endpoints.
    pub fn breakpoints(&self) -> Vec<ExactRational> {
        let mut pts: Vec<ExactRational> = self
            .pieces
            .iter()
            .flat_map(|p| [p.interval.lo.clone(), p.interval.hi.clone()])
            .collect();
        pts.dedup();
        pts
    }

    /// Highest polynomial degree over all pieces; `None` for the zero function.
    pub fn max_degree(&self) -> Option<usize> {
        self.pieces.iter().filter_map(|p| p.poly.degree()).max()
    }

    pub fn evaluate(&self, x: &ExactRational) -> ExactRational {
        let idx = self.pieces.partition_point(|p| &p.interval.lo <= x);
        match idx.checked_sub(1).map(|i| &self.pieces[i]) {
            Some(p) if x < &p.interval.hi => p.poly.eval(x),
            _ => ExactRational::zero(),
        }
    }

    /// `x -> f(x + h)`.
    pub fn shift(&self, h: &ExactRational) -> Self {
        let by = -h;
        PiecewiseFn {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    interval: p.interval.translate(&by),
                    poly: p.poly.shifted(h),
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &PiecewiseFn) -> Self {
        PiecewiseFn::sum_of(
            self.pieces
                .iter()
                .chain(&other.pieces)
                .map(|p| (p.interval.clone(), p.poly.clone())),
        )
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return PiecewiseFn::zero();
        }
        PiecewiseFn {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    interval: p.interval.clone(),
                    poly: p.poly.scale(c),
                })
                .collect(),
        }
    }

    pub fn multiply(&self, other: &PiecewiseFn) -> Self {
        let (a, b) = (&self.pieces, &other.pieces);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = (&a[i].interval.lo).max(&b[j].interval.lo);
            let hi = (&a[i].interval.hi).min(&b[j].interval.hi);
            if lo < hi {
                out.push(Piece {
                    interval: Interval {
                        lo: lo.clone(),
                        hi: hi.clone(),
                    },
                    poly: &a[i].poly * &b[j].poly,
                });
            }
            if a[i].interval.hi <= b[j].interval.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        PiecewiseFn::canonical(out)
    }

    /// Pointwise `k`-th power, `k >= 1`.
    pub fn power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("power exponent must be >= 1".into()));
        }
        Ok(PiecewiseFn::canonical(
            self.pieces
                .iter()
                .map(|p| Piece {
                    interval: p.interval.clone(),
                    poly: p.poly.pow(k),
                })
                .collect(),
        ))
    }

    /// `∫_R f`
    pub fn integrate(&self) -> ExactRational {
        self.pieces
            .iter()
            .map(|p| p.poly.integral(&p.interval.lo, &p.interval.hi))
            .sum()
    }

    /// `(f * g)(t) = ∫ f(τ) g(t - τ) dτ`, computed piece pair by piece pair.
    pub fn convolve(&self, other: &PiecewiseFn) -> Self {
        let mut contributions = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                convolve_pieces(p, q, &mut contributions);
            }
        }
        PiecewiseFn::sum_of(contributions)
    }

    /// Exact `∫ |f|^p` for integer `p >= 1`.
    ///
    /// Even `p` needs no sign information. For odd `p`, linear pieces are
    /// split at their root; pieces of higher degree are accepted only when,
    /// re-expanded about the left endpoint, all coefficients share one sign.
    pub fn lp_norm_pow(&self, p: u32) -> Result<ExactRational> {
        if p == 0 {
            return Err(Error::InvalidArgument("norm exponent must be >= 1".into()));
        }
        if p.is_multiple_of(2) {
            return Ok(self
                .pieces
                .iter()
                .map(|pc| pc.poly.pow(p).integral(&pc.interval.lo, &pc.interval.hi))
                .sum());
        }
        let mut total = ExactRational::zero();
        for piece in &self.pieces {
            for (lo, hi, negative) in sign_constant_parts(piece)? {
                let mut part = piece.poly.pow(p).integral(&lo, &hi);
                if negative && p % 2 == 1 {
                    part = -part;
                }
                total += part;
            }
        }
        Ok(total)
    }

    /// `‖f‖_p` for a real exponent `p >= 1`, as an enclosure at least
    /// `precision_bits` bits wide, for nonnegative functions of degree <= 1.
    pub fn lp_norm_real(&self, p: &ExactRational, precision_bits: u32) -> Result<Enclosure> {
        Ok(self
            .lp_norm_real_pow(p, precision_bits)?
            .root(p, precision_bits))
    }

    /// Enclosure of `∫ f^p` under the same preconditions as [`Self::lp_norm_real`].
    pub fn lp_norm_real_pow(&self, p: &ExactRational, precision_bits: u32) -> Result<Enclosure> {
        if p < &int(1) {
            return Err(Error::InvalidArgument("norm exponent must be >= 1".into()));
        }
        for piece in &self.pieces {
            let degree = piece.poly.degree().unwrap_or(0);
            if degree > 1 {
                return Err(unsupported(piece, degree));
            }
            if piece.value_at_lo().is_negative() || piece.value_at_hi().is_negative() {
                return Err(Error::NegativePiece {
                    lo: format_rational(&piece.interval.lo),
                    hi: format_rational(&piece.interval.hi),
                });
            }
        }
        if p.is_integer() {
            let k = p
                .to_integer()
                .try_into()
                .map_err(|_| Error::InvalidArgument("integer norm exponent too large".into()))?;
            return Ok(Enclosure::exact(self.lp_norm_pow(k)?));
        }
        let p_plus_one = p + int(1);
        let target = precision_bits.max(8);
        let mut bits = target + 32;
        loop {
            let mut total = Enclosure::exact(ExactRational::zero());
            for piece in &self.pieces {
                let v0 = piece.value_at_lo();
                let v1 = piece.value_at_hi();
                let part = if v0 == v1 {
                    Enclosure::exact(v0)
                        .pow(p, bits)
                        .scale(&piece.interval.width(), bits)
                } else {
                    // ∫ (v0 + s (x - lo))^p dx = (v1^{p+1} - v0^{p+1}) / (s (p+1))
                    let slope = piece.poly.coeffs()[1].clone();
                    let num = Enclosure::exact(v1)
                        .pow(&p_plus_one, bits)
                        .sub(&Enclosure::exact(v0).pow(&p_plus_one, bits), bits);
                    num.scale(&(slope * &p_plus_one).recip(), bits)
                };
                total = total.add(&part, bits);
            }
            if total.relative_width_within(target.saturating_sub(8)) || bits > 16 * target {
                return Ok(total.clamp_nonnegative());
            }
            bits *= 2;
        }
    }

    /// Exact `‖f‖_∞` for pieces of degree <= 1: the largest endpoint magnitude.
    pub fn linf_norm(&self) -> Result<ExactRational> {
        let mut best = ExactRational::zero();
        for piece in &self.pieces {
            let degree = piece.poly.degree().unwrap_or(0);
            if degree > 1 {
                return Err(unsupported(piece, degree));
            }
            for v in [piece.value_at_lo(), piece.value_at_hi()] {
                let v = v.abs();
                if v > best {
                    best = v;
                }
            }
        }
        Ok(best)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PiecewiseJson::from(self)).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PiecewiseJson = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        raw.try_into()
    }

    /// CSV rows `x,f(x)` from the left end of the support to the right end
    /// inclusive, every `step`, values rendered with `places` decimals.
    pub fn to_csv_samples(&self, step: &ExactRational, places: usize) -> Result<String> {
        if !step.is_positive() {
            return Err(Error::InvalidArgument(
                "sample step must be positive".into(),
            ));
        }
        let mut out = String::from("x,f(x)\n");
        if let Some((lo, hi)) = self.support() {
            let mut x = lo;
            while x <= hi {
                out.push_str(&format!(
                    "{},{}\n",
                    to_decimal_string(&x, places),
                    to_decimal_string(&self.evaluate(&x), places)
                ));
                x += step;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PiecewiseFn {
    /// One `[lo, hi): poly` line per piece; `0` for the zero function.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for p in &self.pieces {
            writeln!(f, "{}: {}", p.interval, p.poly)?;
        }
        Ok(())
    }
}

fn unsupported(piece: &Piece, degree: usize) -> Error {
    Error::UnsupportedDegree {
        degree,
        lo: format_rational(&piece.interval.lo),
        hi: format_rational(&piece.interval.hi),
    }
}

/// Splits a piece into `(lo, hi, negative)` parts on which its sign is constant.
fn sign_constant_parts(piece: &Piece) -> Result<Vec<(ExactRational, ExactRational, bool)>> {
    let (lo, hi) = (&piece.interval.lo, &piece.interval.hi);
    let c = piece.poly.coeffs();
    match piece.poly.degree() {
        None => Ok(vec![]),
        Some(0) => Ok(vec![(lo.clone(), hi.clone(), c[0].is_negative())]),
        Some(1) => {
            let root = -&c[0] / &c[1];
            let mut cuts = vec![lo.clone()];
            if lo < &root && &root < hi {
                cuts.push(root);
            }
            cuts.push(hi.clone());
            Ok(cuts
                .windows(2)
                .map(|w| {
                    let mid = (&w[0] + &w[1]) / int(2);
                    (
                        w[0].clone(),
                        w[1].clone(),
                        piece.poly.eval(&mid).is_negative(),
                    )
                })
                .collect())
        }
        Some(degree) => {
            let centred = piece.poly.shifted(lo);
            if centred.coeffs().iter().all(|a| !a.is_negative()) {
                Ok(vec![(lo.clone(), hi.clone(), false)])
            } else if centred.coeffs().iter().all(|a| !a.is_positive()) {
                Ok(vec![(lo.clone(), hi.clone(), true)])
            } else {
                Err(unsupported(piece, degree))
            }
        }
    }
}

/// Contribution of `p ⊗ q` to the convolution, over at most three regions in `t`.
fn convolve_pieces(p: &Piece, q: &Piece, out: &mut Vec<(Interval, Poly)>) {
    let (a, b) = (&p.interval.lo, &p.interval.hi);
    let (c, d) = (&q.interval.lo, &q.interval.hi);

    // Integrand p(τ) q(t - τ) as a polynomial in τ whose coefficients are
    // polynomials in t, then its τ-antiderivative.
    let qc = q.poly.coeffs();
    let mut kernel = vec![Poly::zero(); qc.len()];
    for (k, qk) in qc.iter().enumerate() {
        for (j, slot) in kernel.iter_mut().enumerate().take(k + 1) {
            // q_k C(k, j) (-1)^j t^{k-j} τ^j
            let mut coef = qk * from_integer(binomial(k as u64, j as u64));
            if j % 2 == 1 {
                coef = -coef;
            }
            let mut mono = vec![ExactRational::zero(); k - j + 1];
            mono[k - j] = coef;
            slot.add_assign_ref(&Poly::new(mono));
        }
    }
    let mut integrand = vec![Poly::zero(); p.poly.coeffs().len() + kernel.len() - 1];
    for (i, pi) in p.poly.coeffs().iter().enumerate() {
        for (j, kj) in kernel.iter().enumerate() {
            integrand[i + j].add_assign_ref(&kj.scale(pi));
        }
    }
    let mut anti = vec![Poly::zero(); integrand.len() + 1];
    for (j, g) in integrand.into_iter().enumerate() {
        anti[j + 1] = g.scale(&(ExactRational::one() / int(j as i64 + 1)));
    }
    let anti_at = |limit: &Poly| -> Poly {
        let mut acc = Poly::zero();
        let mut power = Poly::constant(ExactRational::one());
        for coef in &anti {
            acc.add_assign_ref(&(coef * &power));
            power = &power * limit;
        }
        acc
    };

    let ad = a + d;
    let bc = b + c;
    let (mid_lo, mid_hi) = if ad <= bc { (ad, bc) } else { (bc, ad) };
    let cuts = [a + c, mid_lo, mid_hi, b + d];
    let t_minus = |s: &ExactRational| Poly::linear(-s, ExactRational::one());
    for w in cuts.windows(2) {
        if w[0] >= w[1] {
            continue;
        }
        let mid = (&w[0] + &w[1]) / int(2);
        // τ ranges over [max(a, t - d), min(b, t - c)].
        let lower = if &(&mid - d) > a {
            t_minus(d)
        } else {
            Poly::constant(a.clone())
        };
        let upper = if &(&mid - c) < b {
            t_minus(c)
        } else {
            Poly::constant(b.clone())
        };
        let poly = &anti_at(&upper) - &anti_at(&lower);
        out.push((
            Interval {
                lo: w[0].clone(),
                hi: w[1].clone(),
            },
            poly,
        ));
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PiecewiseJson {
    pieces: Vec<PieceJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceJson {
    lo: String,
    hi: String,
    coeffs: Vec<String>,
}

impl From<&PiecewiseFn> for PiecewiseJson {
    fn from(f: &PiecewiseFn) -> Self {
        PiecewiseJson {
            pieces: f
                .pieces
                .iter()
                .map(|p| PieceJson {
                    lo: format_rational(&p.interval.lo),
                    hi: format_rational(&p.interval.hi),
                    coeffs: p.poly.coeffs.iter().map(format_rational).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PiecewiseJson> for PiecewiseFn {
    type Error = Error;

    fn try_from(raw: PiecewiseJson) -> Result<Self> {
        let mut pieces = Vec::with_capacity(raw.pieces.len());
        for (k, piece) in raw.pieces.into_iter().enumerate() {
            let at = |field: &str| format!("pieces[{k}].{field}");
            let reloc = |field: String| {
                move |e: Error| match e {
                    Error::Parse { message, .. } => Error::parse(field, message),
                    other => other,
                }
            };
            let lo = parse_rational(&piece.lo).map_err(reloc(at("lo")))?;
            let hi = parse_rational(&piece.hi).map_err(reloc(at("hi")))?;
            if lo >= hi {
                return Err(Error::parse(at("hi"), "interval must satisfy lo < hi"));
            }
            let coeffs = piece
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| parse_rational(c).map_err(reloc(at(&format!("coeffs[{i}]")))))
                .collect::<Result<Vec<_>>>()?;
            pieces.push((Interval { lo, hi }, Poly::new(coeffs)));
        }
        PiecewiseFn::from_sorted_pieces(pieces)
    }
}
