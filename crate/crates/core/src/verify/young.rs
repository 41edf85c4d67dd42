use super::{params, seq_norm_term, CheckRecord, Context, ParamValue, RootTerm, Side, Suite};
use crate::binom_seq::{conv_closed_form, conv_lr_norm_pow_formula, linf_formula};
use crate::error::{Error, Result};
use crate::exact_arith::{binomial, from_integer, int, pow2};
use crate::highprec::Exponent;
use crate::verify::compare::compare_sides;

/// All `(p, q, r)` with `p` from `p_list`, `r` from `r_list` and
/// `1/q = 1/r - 1/p + 1` inside `[0, 1]`.
pub fn young_triples(
    p_list: &[Exponent],
    r_list: &[Exponent],
) -> Vec<(Exponent, Exponent, Exponent)> {
    let mut out = Vec::new();
    for r in r_list {
        for p in p_list {
            let inv_q = r.reciprocal() - p.reciprocal() + int(1);
            if let Some(q) = Exponent::from_reciprocal(&inv_q) {
                out.push((p.clone(), q, r.clone()));
            }
        }
    }
    out
}

/// `‖f_m * f_n‖_r` as a root term, from the closed form of the convolution.
fn conv_norm_term(m: u64, n: u64, r: &Exponent) -> RootTerm {
    match r {
        Exponent::Infinite => RootTerm::value(from_integer(linf_formula(m + n))),
        Exponent::Finite(rr) => match r.as_integer() {
            Some(k) => RootTerm::exact(conv_lr_norm_pow_formula(m, n, k), rr.clone()),
            None => {
                let conv = conv_closed_form(m, n).pieces;
                let exponent = rr.clone();
                RootTerm::real(
                    move |bits| conv.lp_norm_real_pow(&exponent, bits),
                    rr.clone(),
                )
            }
        },
    }
}

/// `‖f_m * f_n‖_r <= ‖f_n‖_p ‖f_m‖_q`, an equality when `p = q = r = 1`.
pub fn young_cell(
    ctx: &Context,
    m: u64,
    n: u64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    force_highprec: bool,
) -> Result<CheckRecord> {
    if r.reciprocal() != p.reciprocal() + q.reciprocal() - int(1) {
        return Err(Error::InvalidTriple {
            p: p.to_string(),
            q: q.to_string(),
            r: r.to_string(),
        });
    }
    let lhs = Side::single(conv_norm_term(m, n, r));
    let rhs = Side::product(vec![seq_norm_term(n, p), seq_norm_term(m, q)]);
    let one = Exponent::integer(1);
    let all_one = *p == one && *q == one && *r == one;
    let outcome = compare_sides(&lhs, &rhs, ctx.cfg.precision_bits, force_highprec);
    Ok(CheckRecord::inequality(
        Suite::Young,
        if all_one { "young-r1" } else { "young" },
        params([
            ("m", ParamValue::Int(m)),
            ("n", ParamValue::Int(n)),
            ("p", ParamValue::Exp(p.clone())),
            ("q", ParamValue::Exp(q.clone())),
            ("r", ParamValue::Exp(r.clone())),
        ]),
        &outcome,
        all_one,
    ))
}

fn exact_at_most(
    check: &str,
    m: u64,
    n: u64,
    lhs: crate::exact_arith::ExactInteger,
    rhs: crate::exact_arith::ExactInteger,
) -> CheckRecord {
    let outcome = compare_sides(
        &Side::single(RootTerm::value(from_integer(lhs))),
        &Side::single(RootTerm::value(from_integer(rhs))),
        64,
        false,
    );
    CheckRecord::inequality(
        Suite::Young,
        check,
        params([("m", ParamValue::Int(m)), ("n", ParamValue::Int(n))]),
        &outcome,
        false,
    )
}

fn cell(
    ctx: &Context,
    m: u64,
    n: u64,
    triples: &[(Exponent, Exponent, Exponent)],
) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let conv = ctx.f(m).convolve(&ctx.f(n));
    for r in ctx.cfg.r_list.iter().filter_map(Exponent::as_integer) {
        let ps = params([
            ("m", ParamValue::Int(m)),
            ("n", ParamValue::Int(n)),
            ("r", ParamValue::Exp(Exponent::integer(r))),
        ]);
        out.push(match conv.lp_norm_pow(r) {
            Ok(engine) => CheckRecord::identity(
                Suite::Young,
                "conv-norm-formula",
                ps,
                &conv_lr_norm_pow_formula(m, n, r),
                &engine,
            ),
            Err(e) => CheckRecord::error(Suite::Young, "conv-norm-formula", ps, &e),
        });
    }
    for (p, q, r) in triples {
        out.push(young_cell(ctx, m, n, p, q, r, false).expect("generated triples are valid"));
    }
    // r = p = ∞, q = 1
    out.push(exact_at_most(
        "linf",
        m,
        n,
        linf_formula(m + n),
        pow2(m) * linf_formula(n),
    ));
    if (m + n).is_multiple_of(2) {
        let s = m + n;
        out.push(exact_at_most(
            "linf-central",
            m,
            n,
            binomial(s, s / 2),
            linf_formula(m) * pow2(n),
        ));
    }
    if m == n {
        out.push(exact_at_most(
            "central",
            m,
            n,
            binomial(2 * n, n),
            linf_formula(n) * pow2(n),
        ));
    }
    out
}

pub(super) fn records(ctx: &Context) -> Vec<CheckRecord> {
    let triples = young_triples(&ctx.cfg.p_list, &ctx.cfg.r_list);
    ctx.map_cells(ctx.cfg.pairs(), |&(m, n)| cell(ctx, m, n, &triples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;
    use crate::verify::{GridConfig, Mode, Status};

    fn ctx() -> Context {
        Context::new(GridConfig {
            max_m: 3,
            max_n: 3,
            ..GridConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn triples_satisfy_relation() {
        let ps: Vec<Exponent> = [1, 2, 3].map(Exponent::integer).to_vec();
        let triples = young_triples(&ps, &ps);
        assert_eq!(triples.len(), 6);
        assert!(triples.contains(&(
            Exponent::integer(2),
            Exponent::Finite(rat(6, 5)),
            Exponent::integer(3)
        )));
        let with_inf = young_triples(&[Exponent::integer(2)], &[Exponent::Infinite]);
        assert_eq!(
            with_inf,
            vec![(
                Exponent::integer(2),
                Exponent::integer(2),
                Exponent::Infinite
            )]
        );
    }

    #[test]
    fn mass_equality() {
        let one = Exponent::integer(1);
        let r = young_cell(&ctx(), 1, 1, &one, &one, &one, false).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("4", "4"));
        assert_eq!((r.status, r.mode), (Status::EqualityAchieved, Mode::Exact));
        let r = young_cell(&ctx(), 0, 3, &one, &one, &one, false).unwrap();
        assert_eq!(r.status, Status::EqualityAchieved);
    }

    #[test]
    fn invalid_triple_rejected() {
        let two = Exponent::integer(2);
        assert!(matches!(
            young_cell(&ctx(), 1, 1, &two, &two, &two, false),
            Err(Error::InvalidTriple { .. })
        ));
    }

    #[test]
    fn hat_with_real_exponents() {
        // ‖hat‖_2 = (2/3)^{1/2} <= ‖f_0‖_{4/3}² = 1
        let four_thirds = Exponent::Finite(rat(4, 3));
        let two = Exponent::integer(2);
        let r = young_cell(&ctx(), 0, 0, &four_thirds, &four_thirds, &two, false).unwrap();
        assert_eq!((r.status, r.mode), (Status::Pass, Mode::Highprec));
        // non-integer r goes through the real norm of the closed form
        let three_halves = Exponent::Finite(rat(3, 2));
        let one = Exponent::integer(1);
        let r = young_cell(&ctx(), 2, 3, &three_halves, &one, &three_halves, false).unwrap();
        assert_eq!((r.status, r.mode), (Status::Pass, Mode::Highprec));
    }

    #[test]
    fn central_binomial_bound() {
        let recs = cell(&ctx(), 2, 2, &[]);
        let central = recs.iter().find(|r| r.check == "central").unwrap();
        assert_eq!((central.lhs.as_str(), central.rhs.as_str()), ("6", "8"));
        assert_eq!(central.status, Status::Pass);
    }
}
