//! Comparison kernel for sides of the form `Σ b_i^{1/e_i}` or `Π b_i^{1/e_i}`.
//!
//! Whenever every base is rational and a common power `k` makes both sides
//! rational, the comparison is decided on `lhs^k` vs `rhs^k` exactly.
//! Otherwise both sides are enclosed at the configured precision and
//! compared with [`highprec::decide`].

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Result;
use crate::exact_arith::{format_rational, int, pow_rational, ExactRational};
use crate::highprec::{self, Decision, Enclosure, Exponent};

type RealFn = Arc<dyn Fn(u32) -> Result<Enclosure> + Send + Sync>;

/// A nonnegative base, either exact or available as enclosures on demand.
#[derive(Clone)]
pub enum Base {
    Exact(ExactRational),
    Real(RealFn),
}

impl fmt::Debug for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Exact(v) => write!(f, "Exact({})", format_rational(v)),
            Base::Real(_) => f.write_str("Real(..)"),
        }
    }
}

/// `base^{1/root}`.
#[derive(Clone, Debug)]
pub struct RootTerm {
    pub base: Base,
    pub root: ExactRational,
}

impl RootTerm {
    pub fn exact(base: ExactRational, root: ExactRational) -> Self {
        RootTerm {
            base: Base::Exact(base),
            root,
        }
    }

    /// An exact value, no root taken.
    pub fn value(v: ExactRational) -> Self {
        RootTerm::exact(v, int(1))
    }

    pub fn real<F>(f: F, root: ExactRational) -> Self
    where
        F: Fn(u32) -> Result<Enclosure> + Send + Sync + 'static,
    {
        RootTerm {
            base: Base::Real(Arc::new(f)),
            root,
        }
    }

    fn enclosure(&self, bits: u32) -> Result<Enclosure> {
        let base = match &self.base {
            Base::Exact(v) => Enclosure::exact(v.clone()),
            Base::Real(f) => f(bits)?,
        };
        Ok(if self.root.is_one() {
            base
        } else {
            base.root(&self.root, bits)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Product,
}

#[derive(Clone, Debug)]
pub struct Side {
    pub combine: Combine,
    pub terms: Vec<RootTerm>,
}

impl Side {
    pub fn single(term: RootTerm) -> Self {
        Side {
            combine: Combine::Product,
            terms: vec![term],
        }
    }

    pub fn sum(terms: Vec<RootTerm>) -> Self {
        Side {
            combine: Combine::Sum,
            terms,
        }
    }

    pub fn product(terms: Vec<RootTerm>) -> Self {
        Side {
            combine: Combine::Product,
            terms,
        }
    }

    /// Integer roots of all terms, if every base is exact and every root integral.
    fn integer_roots(&self) -> Option<Vec<u64>> {
        self.terms
            .iter()
            .map(|t| match t.base {
                Base::Exact(_) if t.root.is_integer() => t.root.to_integer().to_u64(),
                _ => None,
            })
            .collect()
    }

    /// `self^k` exactly, when that is rational by construction.
    fn exact_power(&self, k: u64) -> Option<ExactRational> {
        let is_product = self.combine == Combine::Product || self.terms.len() == 1;
        if !is_product && k != 1 {
            return None;
        }
        let parts = self.terms.iter().map(|t| {
            let Base::Exact(v) = &t.base else {
                unreachable!("checked by integer_roots")
            };
            let root = t
                .root
                .to_integer()
                .to_u64()
                .expect("checked by integer_roots");
            pow_rational(v, (k / root) as u32)
        });
        Some(if is_product {
            parts.fold(ExactRational::one(), |a, b| a * b)
        } else {
            parts.fold(ExactRational::zero(), |a, b| a + b)
        })
    }

    pub fn enclosure(&self, bits: u32) -> Result<Enclosure> {
        let mut acc = match self.combine {
            Combine::Sum => Enclosure::exact(ExactRational::zero()),
            Combine::Product => Enclosure::exact(ExactRational::one()),
        };
        for term in &self.terms {
            let e = term.enclosure(bits)?;
            acc = match self.combine {
                Combine::Sum => acc.add(&e, bits),
                Combine::Product => acc.mul(&e, bits),
            };
        }
        Ok(acc)
    }
}

/// Largest power an exact comparison may raise both sides to.
const MAX_EXACT_POWER: u64 = 64;

#[derive(Clone, Debug)]
pub enum Outcome {
    /// Decided on `lhs^power` vs `rhs^power` with rational arithmetic.
    Exact {
        decision: Decision,
        power: u64,
        lhs: ExactRational,
        rhs: ExactRational,
    },
    HighPrec {
        decision: Result<Decision>,
        lhs: Option<Enclosure>,
        rhs: Option<Enclosure>,
    },
}

impl Outcome {
    pub fn decision(&self) -> Result<Decision> {
        match self {
            Outcome::Exact { decision, .. } => Ok(*decision),
            Outcome::HighPrec { decision, .. } => decision.clone(),
        }
    }
}

fn exact_power_for(lhs: &Side, rhs: &Side) -> Option<u64> {
    let roots = lhs.integer_roots()?.into_iter().chain(rhs.integer_roots()?);
    let k = roots.fold(1u64, |acc, r| acc.lcm(&r));
    (k <= MAX_EXACT_POWER).then_some(k)
}

/// Compares two sides, exactly when possible unless `force_highprec`.
pub fn compare_sides(lhs: &Side, rhs: &Side, bits: u32, force_highprec: bool) -> Outcome {
    if !force_highprec {
        if let Some(k) = exact_power_for(lhs, rhs) {
            if let (Some(l), Some(r)) = (lhs.exact_power(k), rhs.exact_power(k)) {
                let decision = match l.cmp(&r) {
                    std::cmp::Ordering::Less => Decision::StrictlyLess,
                    std::cmp::Ordering::Equal => Decision::EqualWithin,
                    std::cmp::Ordering::Greater => Decision::StrictlyGreater,
                };
                return Outcome::Exact {
                    decision,
                    power: k,
                    lhs: l,
                    rhs: r,
                };
            }
        }
    }
    let decision = highprec::decide(|b| lhs.enclosure(b), |b| rhs.enclosure(b), bits);
    Outcome::HighPrec {
        decision,
        lhs: lhs.enclosure(bits).ok(),
        rhs: rhs.enclosure(bits).ok(),
    }
}

/// Decides `lhs_pow^{1/p_lhs}` against `Σ_i base_i^{1/p_i}`.
///
/// Exponents are finite and `>= 1`; an infinite exponent is treated as a
/// root of 1 (the base is already the value).
pub fn compare_root_sums(
    lhs_pow: &ExactRational,
    p_lhs: &Exponent,
    rhs_terms: &[(ExactRational, Exponent)],
    precision_bits: u32,
) -> Result<Decision> {
    let root = |p: &Exponent| match p {
        Exponent::Finite(p) => p.clone(),
        Exponent::Infinite => int(1),
    };
    let lhs = Side::single(RootTerm::exact(lhs_pow.clone(), root(p_lhs)));
    let rhs = Side::sum(
        rhs_terms
            .iter()
            .map(|(b, p)| RootTerm::exact(b.clone(), root(p)))
            .collect(),
    );
    compare_sides(&lhs, &rhs, precision_bits, false).decision()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;

    fn e(p: i64) -> Exponent {
        Exponent::integer(p as u32)
    }

    #[test]
    fn root_sum_examples() {
        assert_eq!(
            compare_root_sums(&int(4), &e(1), &[(int(6), e(1))], 256).unwrap(),
            Decision::StrictlyLess
        );
        // √4 vs √1 + √1
        assert_eq!(
            compare_root_sums(&int(4), &e(2), &[(int(1), e(2)), (int(1), e(2))], 256).unwrap(),
            Decision::EqualWithin
        );
        // √5 vs 1 + 1
        assert_eq!(
            compare_root_sums(&int(5), &e(2), &[(int(1), e(1)), (int(1), e(1))], 256).unwrap(),
            Decision::StrictlyGreater
        );
        // 1 vs 1^{2/3}
        let p = Exponent::Finite(rat(3, 2));
        assert_eq!(
            compare_root_sums(&int(1), &e(1), &[(int(1), p)], 256).unwrap(),
            Decision::EqualWithin
        );
    }

    #[test]
    fn schwarz_equality_is_exact() {
        // C(2,1)² = 4 vs C(2,1) C(2,1) under square roots: decided on squares
        let lhs = Side::single(RootTerm::value(int(2)));
        let rhs = Side::product(vec![
            RootTerm::exact(int(2), int(2)),
            RootTerm::exact(int(2), int(2)),
        ]);
        match compare_sides(&lhs, &rhs, 256, false) {
            Outcome::Exact {
                decision,
                power,
                lhs,
                rhs,
            } => {
                assert_eq!(decision, Decision::EqualWithin);
                assert_eq!(power, 2);
                assert_eq!((lhs, rhs), (int(4), int(4)));
            }
            other => panic!("expected exact outcome, got {other:?}"),
        }
        // the same comparison forced onto the enclosure path agrees
        let forced = compare_sides(&lhs, &rhs, 256, true);
        assert!(matches!(forced, Outcome::HighPrec { .. }));
        assert_eq!(forced.decision().unwrap(), Decision::EqualWithin);
    }

    #[test]
    fn mixed_roots_use_enclosures() {
        // 6 vs 20^{1/3} · 2^{2/3} = 80^{1/3} ≈ 4.31
        let lhs = Side::single(RootTerm::value(int(6)));
        let rhs = Side::product(vec![
            RootTerm::exact(int(20), int(3)),
            RootTerm::exact(int(2), rat(3, 2)),
        ]);
        let out = compare_sides(&lhs, &rhs, 256, false);
        assert!(matches!(out, Outcome::HighPrec { .. }));
        assert_eq!(out.decision().unwrap(), Decision::StrictlyGreater);
    }
}
