//! The sequence `f_0 = χ[-1/2, 1/2)`, `f_{n+1}(x) = f_n(x + 1/2) + f_n(x - 1/2)`
//! and the closed forms derived from it.
//!
//! `f_n` takes the value `C(n, i)` on the unit interval
//! `I_{n,i} = [-(n+1)/2 + i, -(n+1)/2 + i + 1)`. Products, sums and
//! convolutions of two members are again explicit: products and sums are
//! simple functions on unit (same parity) or half-unit (opposite parity)
//! intervals, and `f_m * f_n` is the piecewise-linear function interpolating
//! `C(m+n, j)` at the integer-or-half-integer nodes `-μ + j`, `μ = (m+n)/2`.

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_arith::{
    binomial, from_integer, int, pow_rational, rat, ExactInteger, ExactRational,
};
use crate::piecewise::{Interval, PiecewiseFn, Poly};

fn binom_q(n: u64, i: u64) -> ExactRational {
    from_integer(binomial(n, i))
}

/// `-(n+1)/2`, the left end of `supp f_n`.
fn left_end(n: u64) -> ExactRational {
    rat(-(n as i64 + 1), 2)
}

/// `f_0 = χ[-1/2, 1/2)`.
pub fn f0() -> PiecewiseFn {
    PiecewiseFn::indicator(support(0))
}

/// `f_n` by iterating `f ↦ f(· + 1/2) + f(· - 1/2)` `n` times.
pub fn build_recursive(n: u64) -> PiecewiseFn {
    let half = rat(1, 2);
    let minus_half = rat(-1, 2);
    (0..n).fold(f0(), |f, _| f.shift(&half).add(&f.shift(&minus_half)))
}

/// `f_n` built directly from its closed form.
pub fn build_closed(n: u64) -> BinomSeqHandle {
    BinomSeqHandle::new(n)
}

/// Index `n` together with the closed form of `f_n`, built once on creation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomSeqHandle {
    n: u64,
    closed_form: PiecewiseFn,
}

impl BinomSeqHandle {
    pub fn new(n: u64) -> Self {
        let closed_form = PiecewiseFn::sum_of(
            (0..=n).map(|i| (unit_interval_unchecked(n, i), Poly::constant(binom_q(n, i)))),
        );
        BinomSeqHandle { n, closed_form }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn closed_form(&self) -> &PiecewiseFn {
        &self.closed_form
    }

    /// The standard-form decomposition `(I_{n,i}, C(n, i))`, `i = 0..=n`.
    ///
    /// Unlike [`Self::closed_form`], equal neighbouring values (the two middle
    /// coefficients of an odd row) are kept as separate unit intervals.
    pub fn unit_pieces(&self) -> Vec<(Interval, ExactInteger)> {
        (0..=self.n)
            .map(|i| (unit_interval_unchecked(self.n, i), binomial(self.n, i)))
            .collect()
    }
}

impl Serialize for BinomSeqHandle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HandleJson { n: self.n }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinomSeqHandle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HandleJson::deserialize(d).map(|h| BinomSeqHandle::new(h.n))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HandleJson {
    n: u64,
}

fn unit_interval_unchecked(n: u64, i: u64) -> Interval {
    let lo = left_end(n) + int(i as i64);
    Interval::new(lo.clone(), lo + int(1)).expect("unit width")
}

fn half_interval_unchecked(n: u64, i: u64) -> Interval {
    let lo = left_end(n) + rat(i as i64, 2);
    Interval::new(lo.clone(), lo + rat(1, 2)).expect("half width")
}

/// `I_{n,i} = [-(n+1)/2 + i, -(n+1)/2 + i + 1)`, `0 <= i <= n`.
pub fn unit_interval(n: u64, i: u64) -> Result<Interval> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    Ok(unit_interval_unchecked(n, i))
}

/// `J_{n,i} = [-(n+1)/2 + i/2, -(n+1)/2 + (i+1)/2)`, `0 <= i <= 2n+1`.
pub fn half_interval(n: u64, i: u64) -> Result<Interval> {
    if i > 2 * n + 1 {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: 2 * n + 1,
        });
    }
    Ok(half_interval_unchecked(n, i))
}

/// `supp f_n = [-(n+1)/2, (n+1)/2]`.
pub fn support(n: u64) -> Interval {
    Interval::new(left_end(n), -left_end(n)).expect("positive width")
}

/// `x_{n,i} = i - (n+1)/2` for `i = 0..=n+1`: the endpoints of the unit
/// intervals. For odd `n >= 1` the middle point separates two equal values.
pub fn jump_points(n: u64) -> Vec<ExactRational> {
    (0..=n + 1).map(|i| left_end(n) + int(i as i64)).collect()
}

/// `Σ_i C(n, i)^p = ‖f_n‖_p^p`.
pub fn lp_norm_pow_formula(n: u64, p: u32) -> ExactInteger {
    (0..=n).map(|i| binomial(n, i).pow(p)).sum()
}

/// `‖f_n‖_∞ = C(n, ⌊n/2⌋)`.
pub fn linf_formula(n: u64) -> ExactInteger {
    binomial(n, n / 2)
}

/// Mean of `f_n²` over its support, `C(2n, n) / (n + 1)`: the Catalan numbers.
pub fn mean_square(n: u64) -> ExactRational {
    binom_q(2 * n, n) / int(n as i64 + 1)
}

fn check_order(m: u64, n: u64) -> Result<()> {
    if n < m {
        return Err(Error::BadOrder { m, n });
    }
    Ok(())
}

/// `f_n f_m` as a simple function, `n >= m`.
///
/// Same parity: the middle `m+1` unit intervals of `supp f_n` are those of
/// `supp f_m`, giving `Σ_i C(m,i) C(n,(n-m)/2+i) χ_{I_{m,i}}`. Opposite
/// parity: each `I_{m,j}` is split into the half-unit intervals
/// `J_{m,2j}`, `J_{m,2j+1}` on which `f_n` is constant.
pub fn product_closed_form(m: u64, n: u64) -> Result<PiecewiseFn> {
    check_order(m, n)?;
    let d = n - m;
    let pieces: Vec<(Interval, Poly)> = if d.is_multiple_of(2) {
        (0..=m)
            .map(|i| {
                let v = binom_q(m, i) * binom_q(n, d / 2 + i);
                (unit_interval_unchecked(m, i), Poly::constant(v))
            })
            .collect()
    } else {
        (0..=m)
            .flat_map(|j| {
                let left = binom_q(m, j) * binom_q(n, (d + 2 * j - 1) / 2);
                let right = binom_q(m, j) * binom_q(n, (d + 2 * j).div_ceil(2));
                [
                    (half_interval_unchecked(m, 2 * j), Poly::constant(left)),
                    (half_interval_unchecked(m, 2 * j + 1), Poly::constant(right)),
                ]
            })
            .collect()
    };
    Ok(PiecewiseFn::sum_of(pieces))
}

/// `∫ f_n f_m`: `C(n+m, (n+m)/2)` for same parity, `½ C(n+m+1, (n+m+1)/2)` otherwise.
pub fn product_integral_formula(m: u64, n: u64) -> Result<ExactRational> {
    check_order(m, n)?;
    let s = n + m;
    Ok(if s.is_multiple_of(2) {
        binom_q(s, s / 2)
    } else {
        binom_q(s + 1, s.div_ceil(2)) / int(2)
    })
}

/// `f_0 * f_0`: `1 + x` on `[-1, 0)`, `1 - x` on `[0, 1)`.
pub fn hat() -> PiecewiseFn {
    PiecewiseFn::sum_of([
        (
            Interval::new(int(-1), int(0)).expect("valid"),
            Poly::linear(int(1), int(1)),
        ),
        (
            Interval::new(int(0), int(1)).expect("valid"),
            Poly::linear(int(1), int(-1)),
        ),
    ])
}

/// `f_m * f_n` in closed form, with `μ = (m+n)/2`, `β_j = C(m+n, j)` and
/// `α_j = β_{j+1} - β_j`:
///
/// ```text
/// (1 + μ + x)                on [-μ-1, -μ)
/// β_j + α_j (x + μ - j)      on [-μ+j, -μ+j+1),  j = 0..m+n-1
/// (1 + μ - x)                on [μ, μ+1)
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvClosedForm {
    pub m: u64,
    pub n: u64,
    pub mu: ExactRational,
    pub pieces: PiecewiseFn,
}

impl ConvClosedForm {
    pub fn beta(&self, j: u64) -> ExactInteger {
        binomial(self.m + self.n, j)
    }

    pub fn alpha(&self, j: u64) -> ExactInteger {
        binomial(self.m + self.n, j + 1) - binomial(self.m + self.n, j)
    }
}

pub fn conv_closed_form(m: u64, n: u64) -> ConvClosedForm {
    let total = m + n;
    let mu = rat(total as i64, 2);
    let one = int(1);
    let mut pieces = Vec::with_capacity(total as usize + 2);
    pieces.push((
        Interval::new(-&mu - &one, -&mu).expect("unit width"),
        Poly::linear(&one + &mu, one.clone()),
    ));
    for j in 0..total {
        let beta = binom_q(total, j);
        let alpha = binom_q(total, j + 1) - &beta;
        let shift = &mu - int(j as i64);
        let lo = int(j as i64) - &mu;
        pieces.push((
            Interval::new(lo.clone(), lo + &one).expect("unit width"),
            Poly::linear(beta + &alpha * shift, alpha),
        ));
    }
    pieces.push((
        Interval::new(mu.clone(), &mu + &one).expect("unit width"),
        Poly::linear(&one + &mu, -one.clone()),
    ));
    ConvClosedForm {
        m,
        n,
        mu,
        pieces: PiecewiseFn::sum_of(pieces),
    }
}

/// `‖f_m * f_n‖_r^r = 2/(r+1) + Σ_{j=0}^{m+n-1} (β_{j+1}^{r+1} - β_j^{r+1}) / ((r+1)(β_{j+1} - β_j))`,
/// where for odd `m+n` the flat middle term `j = (m+n-1)/2` contributes `β_j^r`.
pub fn conv_lr_norm_pow_formula(m: u64, n: u64, r: u32) -> ExactRational {
    let total = m + n;
    let r1 = int(r as i64 + 1);
    let mut sum = int(2) / &r1;
    for j in 0..total {
        let lo = binom_q(total, j);
        let hi = binom_q(total, j + 1);
        if total % 2 == 1 && j == (total - 1) / 2 {
            sum += pow_rational(&lo, r);
        } else {
            let num = pow_rational(&hi, r + 1) - pow_rational(&lo, r + 1);
            sum += num / (&r1 * (hi - lo));
        }
    }
    sum
}

/// `f_n + f_m` as a simple function, `n >= m`.
pub fn sum_closed_form(m: u64, n: u64) -> Result<PiecewiseFn> {
    check_order(m, n)?;
    let d = n - m;
    let c = |v: ExactRational| Poly::constant(v);
    let mut pieces: Vec<(Interval, Poly)> = Vec::new();
    if d.is_multiple_of(2) {
        let tail = d / 2;
        for i in 0..tail {
            pieces.push((unit_interval_unchecked(n, i), c(binom_q(n, i))));
            let k = (n + m + 2) / 2 + i;
            pieces.push((unit_interval_unchecked(n, k), c(binom_q(n, k))));
        }
        for i in 0..=m {
            pieces.push((
                unit_interval_unchecked(m, i),
                c(binom_q(m, i) + binom_q(n, tail + i)),
            ));
        }
    } else {
        // (n-m-1)/2 whole unit intervals on each side, then one half-unit interval.
        let whole = (d - 1) / 2;
        for i in 0..whole {
            pieces.push((unit_interval_unchecked(n, i), c(binom_q(n, i))));
            let k = (m + n + 3) / 2 + i;
            pieces.push((unit_interval_unchecked(n, k), c(binom_q(n, k))));
        }
        pieces.push((half_interval_unchecked(n, d - 1), c(binom_q(n, whole))));
        pieces.push((
            half_interval_unchecked(n, n + m + 2),
            c(binom_q(n, (n + m).div_ceil(2))),
        ));
        for j in 0..=m {
            pieces.push((
                half_interval_unchecked(m, 2 * j),
                c(binom_q(m, j) + binom_q(n, (d + 2 * j - 1) / 2)),
            ));
            pieces.push((
                half_interval_unchecked(m, 2 * j + 1),
                c(binom_q(m, j) + binom_q(n, (d + 2 * j).div_ceil(2))),
            ));
        }
    }
    Ok(PiecewiseFn::sum_of(pieces))
}

/// `‖f_n + f_m‖_p^p` read off [`sum_closed_form`], `n >= m`.
pub fn sum_lp_norm_pow_formula(m: u64, n: u64, p: u32) -> Result<ExactRational> {
    check_order(m, n)?;
    let d = n - m;
    let pw = |v: ExactRational| pow_rational(&v, p);
    let mut total = ExactRational::zero();
    if d.is_multiple_of(2) {
        for i in 0..d / 2 {
            total += int(2) * pw(binom_q(n, i));
        }
        for i in 0..=m {
            total += pw(binom_q(m, i) + binom_q(n, d / 2 + i));
        }
    } else {
        let whole = (d - 1) / 2;
        for i in 0..whole {
            total += int(2) * pw(binom_q(n, i));
        }
        total += pw(binom_q(n, whole));
        let mut halves = ExactRational::zero();
        for j in 0..=m {
            halves += pw(binom_q(m, j) + binom_q(n, (d + 2 * j - 1) / 2));
            halves += pw(binom_q(m, j) + binom_q(n, (d + 2 * j).div_ceil(2)));
        }
        total += halves / int(2);
    }
    Ok(total)
}

/// `Σ_{k=0}^{r} C(m, k) C(n, r - k)`.
pub fn vandermonde_lhs(m: u64, n: u64, r: u64) -> ExactInteger {
    (0..=r).map(|k| binomial(m, k) * binomial(n, r - k)).sum()
}

/// Indices attaining `max_i C(n, i)`.
pub fn central_argmax(n: u64) -> Vec<u64> {
    let row: Vec<ExactInteger> = (0..=n).map(|i| binomial(n, i)).collect();
    let best = row.iter().max().cloned().unwrap_or_else(ExactInteger::one);
    (0..=n).filter(|&i| row[i as usize] == best).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::pow2;

    fn values_on(f: &PiecewiseFn, n: u64) -> Vec<ExactRational> {
        (0..=n)
            .map(|i| f.evaluate(unit_interval(n, i).unwrap().lo()))
            .collect()
    }

    fn ints(v: &[i64]) -> Vec<ExactRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(
            build_recursive(0),
            PiecewiseFn::indicator(Interval::new(rat(-1, 2), rat(1, 2)).unwrap())
        );
        let f1 = build_recursive(1);
        assert_eq!(values_on(&f1, 1), ints(&[1, 1]));
        assert_eq!(f1.support(), Some((int(-1), int(1))));
        assert_eq!(values_on(&build_recursive(3), 3), ints(&[1, 3, 3, 1]));
        assert_eq!(build_recursive(3).support(), Some((int(-2), int(2))));
    }

    #[test]
    fn closed_examples() {
        let f2 = build_closed(2);
        assert_eq!(values_on(f2.closed_form(), 2), ints(&[1, 2, 1]));
        assert_eq!(
            f2.closed_form().breakpoints(),
            vec![rat(-3, 2), rat(-1, 2), rat(1, 2), rat(3, 2)]
        );
        assert_eq!(build_closed(0).closed_form(), &f0());
        assert_eq!(build_closed(6).closed_form().linf_norm().unwrap(), int(20));
        for n in 0..=12 {
            assert_eq!(build_closed(n).closed_form(), &build_recursive(n));
        }
    }

    #[test]
    fn unit_pieces_have_unit_width() {
        for n in 0..=9 {
            let h = build_closed(n);
            let pieces = h.unit_pieces();
            assert_eq!(pieces.len() as u64, n + 1);
            for (i, (iv, v)) in pieces.iter().enumerate() {
                assert_eq!(iv.width(), int(1));
                assert_eq!(v, &binomial(n, i as u64));
                assert_eq!(h.closed_form().evaluate(iv.lo()), from_integer(v.clone()));
            }
            let mut ends: Vec<ExactRational> =
                pieces.iter().map(|(iv, _)| iv.lo().clone()).collect();
            ends.push(pieces.last().unwrap().0.hi().clone());
            assert_eq!(ends, jump_points(n));
        }
    }

    #[test]
    fn intervals() {
        let i20 = unit_interval(2, 0).unwrap();
        assert_eq!(
            (i20.lo().clone(), i20.hi().clone()),
            (rat(-3, 2), rat(-1, 2))
        );
        for n in 0..6 {
            assert_eq!(half_interval(n, 0).unwrap().lo(), &rat(-(n as i64 + 1), 2));
            assert_eq!(
                half_interval(n, 2 * n + 1).unwrap().hi(),
                &rat(n as i64 + 1, 2)
            );
        }
        for m in 0..6u64 {
            for n in (m..12).step_by(2) {
                assert_eq!(
                    unit_interval(n, (n - m) / 2).unwrap(),
                    unit_interval(m, 0).unwrap()
                );
            }
        }
        assert!(matches!(
            unit_interval(2, 3),
            Err(Error::IndexOutOfRange { index: 3, max: 2 })
        ));
        assert!(matches!(
            half_interval(2, 6),
            Err(Error::IndexOutOfRange { index: 6, max: 5 })
        ));
    }

    #[test]
    fn support_and_jumps() {
        let s = support(3);
        assert_eq!((s.lo().clone(), s.hi().clone()), (int(-2), int(2)));
        let s0 = support(0);
        assert_eq!((s0.lo().clone(), s0.hi().clone()), (rat(-1, 2), rat(1, 2)));
        for n in 0..20 {
            assert_eq!(support(n).width(), int(n as i64 + 1));
            assert_eq!(jump_points(n).len() as u64, n + 2);
        }
        assert_eq!(
            jump_points(2),
            vec![rat(-3, 2), rat(-1, 2), rat(1, 2), rat(3, 2)]
        );
        assert_eq!(jump_points(0), vec![rat(-1, 2), rat(1, 2)]);
    }

    #[test]
    fn norm_formulas() {
        assert_eq!(lp_norm_pow_formula(3, 1), ExactInteger::from(8));
        assert_eq!(lp_norm_pow_formula(3, 2), ExactInteger::from(20));
        assert_eq!(lp_norm_pow_formula(2, 3), ExactInteger::from(10));
        assert_eq!(linf_formula(4), ExactInteger::from(6));
        assert_eq!(linf_formula(5), ExactInteger::from(10));
        assert_eq!(linf_formula(0), ExactInteger::from(1));
        assert_eq!(mean_square(3), int(5));
        assert_eq!(mean_square(0), int(1));
        assert_eq!(mean_square(4), int(14));
    }

    #[test]
    fn product_examples() {
        let sq = product_closed_form(2, 2).unwrap();
        assert_eq!(values_on(&sq, 2), ints(&[1, 4, 1]));
        let odd = product_closed_form(1, 2).unwrap();
        let on_half: Vec<ExactRational> = (0..4)
            .map(|j| odd.evaluate(half_interval(1, j).unwrap().lo()))
            .collect();
        assert_eq!(on_half, ints(&[1, 2, 2, 1]));
        assert_eq!(product_closed_form(0, 0).unwrap(), f0());
        assert!(matches!(
            product_closed_form(3, 2),
            Err(Error::BadOrder { m: 3, n: 2 })
        ));
        for m in 0..=6 {
            for n in m..=8 {
                let engine = build_closed(n)
                    .closed_form()
                    .multiply(build_closed(m).closed_form());
                assert_eq!(product_closed_form(m, n).unwrap(), engine, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn product_integrals() {
        assert_eq!(product_integral_formula(1, 3).unwrap(), int(6));
        assert_eq!(product_integral_formula(1, 2).unwrap(), int(3));
        for n in 0..10 {
            assert_eq!(product_integral_formula(n, n).unwrap(), binom_q(2 * n, n));
        }
        assert!(product_integral_formula(2, 1).is_err());
    }

    #[test]
    fn hat_examples() {
        let h = hat();
        assert_eq!(h.evaluate(&int(0)), int(1));
        assert_eq!(h.evaluate(&int(1)), int(0));
        assert_eq!(h.evaluate(&int(-1)), int(0));
        assert_eq!(f0().convolve(&f0()), h);
    }

    #[test]
    fn conv_closed_examples() {
        assert_eq!(conv_closed_form(0, 0).pieces, hat());
        let c11 = conv_closed_form(1, 1);
        assert_eq!(c11.pieces.evaluate(&int(0)), int(2));
        assert_eq!(c11.mu, int(1));
        assert_eq!(c11.beta(0), ExactInteger::from(1));
        assert_eq!(c11.alpha(0), ExactInteger::from(1));
        for m in 0..=5 {
            for n in 0..=5 {
                let c = conv_closed_form(m, n);
                assert_eq!(c.pieces.integrate(), from_integer(pow2(m + n)));
                let engine = build_closed(m)
                    .closed_form()
                    .convolve(build_closed(n).closed_form());
                assert_eq!(c.pieces, engine, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn conv_norm_formula_examples() {
        assert_eq!(conv_lr_norm_pow_formula(1, 1, 1), int(4));
        assert_eq!(conv_lr_norm_pow_formula(0, 0, 2), rat(2, 3));
        assert_eq!(conv_lr_norm_pow_formula(0, 1, 1), int(2));
        assert_eq!(hat().lp_norm_pow(2).unwrap(), rat(2, 3));
    }

    #[test]
    fn sum_examples() {
        let s02 = sum_closed_form(0, 2).unwrap();
        assert_eq!(values_on(&s02, 2), ints(&[1, 3, 1]));
        for m in 0..5 {
            let f = build_closed(m);
            assert_eq!(
                sum_closed_form(m, m).unwrap(),
                f.closed_form().scale(&int(2))
            );
        }
        let s12 = sum_closed_form(1, 2).unwrap();
        let on_half: Vec<ExactRational> = (0..6)
            .map(|j| s12.evaluate(half_interval(2, j).unwrap().lo()))
            .collect();
        assert_eq!(on_half, ints(&[1, 2, 3, 3, 2, 1]));
        assert!(sum_closed_form(2, 1).is_err());
    }

    #[test]
    fn sum_forms_match_engine() {
        for m in 0..=7 {
            for n in m..=12 {
                let engine = build_closed(n)
                    .closed_form()
                    .add(build_closed(m).closed_form());
                assert_eq!(sum_closed_form(m, n).unwrap(), engine, "m={m} n={n}");
                for p in 1..=4 {
                    assert_eq!(
                        sum_lp_norm_pow_formula(m, n, p).unwrap(),
                        engine.lp_norm_pow(p).unwrap(),
                        "m={m} n={n} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde_lhs(2, 2, 2), ExactInteger::from(6));
        assert_eq!(vandermonde_lhs(7, 4, 0), ExactInteger::from(1));
        assert_eq!(vandermonde_lhs(3, 0, 2), ExactInteger::from(3));
    }

    #[test]
    fn argmax_is_central() {
        assert_eq!(central_argmax(4), vec![2]);
        assert_eq!(central_argmax(5), vec![2, 3]);
        assert_eq!(central_argmax(0), vec![0]);
    }

    #[test]
    fn handle_json() {
        let h = build_closed(4);
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"n":4}"#);
        let back: BinomSeqHandle = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }
}
