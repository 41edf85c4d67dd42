use super::{params, seq_norm_term, CheckRecord, Context, ParamValue, RootTerm, Side, Suite};
use crate::binom_seq::{sum_closed_form, sum_lp_norm_pow_formula};
use crate::highprec::Exponent;
use crate::verify::compare::compare_sides;

/// `‖f_n + f_m‖_p <= ‖f_n‖_p + ‖f_m‖_p`, with `m <= n` (the sum is symmetric).
/// For integer `p` the left side is first computed from the closed-form sum
/// and from the engine, which must agree. At `p = 1` it is an equality.
fn cell(ctx: &Context, m: u64, n: u64) -> Vec<CheckRecord> {
    let (lo, hi) = (m.min(n), m.max(n));
    let engine_sum = ctx.f(hi).add(&ctx.f(lo));
    let closed_sum = sum_closed_form(lo, hi).expect("ordered");
    let mut out = vec![CheckRecord::structural(
        Suite::Minkowski,
        "sum-closed-form",
        params([("m", ParamValue::Int(m)), ("n", ParamValue::Int(n))]),
        engine_sum == closed_sum,
        format!("{} pieces", engine_sum.pieces().len()),
        format!("{} pieces", closed_sum.pieces().len()),
    )];
    for p in &ctx.cfg.p_list {
        let ps = || {
            params([
                ("m", ParamValue::Int(m)),
                ("n", ParamValue::Int(n)),
                ("p", ParamValue::Exp(p.clone())),
            ])
        };
        let lhs_term = match p {
            Exponent::Infinite => match engine_sum.linf_norm() {
                Ok(v) => RootTerm::value(v),
                Err(e) => {
                    out.push(CheckRecord::error(Suite::Minkowski, "minkowski", ps(), &e));
                    continue;
                }
            },
            Exponent::Finite(pp) => match p.as_integer() {
                Some(k) => {
                    let formula = sum_lp_norm_pow_formula(lo, hi, k).expect("ordered");
                    match engine_sum.lp_norm_pow(k) {
                        Ok(engine) => out.push(CheckRecord::identity(
                            Suite::Minkowski,
                            "sum-norm-formula",
                            ps(),
                            &formula,
                            &engine,
                        )),
                        Err(e) => out.push(CheckRecord::error(
                            Suite::Minkowski,
                            "sum-norm-formula",
                            ps(),
                            &e,
                        )),
                    }
                    RootTerm::exact(formula, pp.clone())
                }
                None => {
                    let f = closed_sum.clone();
                    let exponent = pp.clone();
                    RootTerm::real(move |bits| f.lp_norm_real_pow(&exponent, bits), pp.clone())
                }
            },
        };
        let lhs = Side::single(lhs_term);
        let rhs = Side::sum(vec![seq_norm_term(hi, p), seq_norm_term(lo, p)]);
        let outcome = compare_sides(&lhs, &rhs, ctx.cfg.precision_bits, false);
        let p1 = *p == Exponent::integer(1);
        out.push(CheckRecord::inequality(
            Suite::Minkowski,
            if p1 { "minkowski-p1" } else { "minkowski" },
            ps(),
            &outcome,
            p1,
        ));
    }
    out
}

pub(super) fn records(ctx: &Context) -> Vec<CheckRecord> {
    let pairs = ctx
        .cfg
        .pairs()
        .into_iter()
        .filter(|&(m, n)| m <= n)
        .collect();
    ctx.map_cells(pairs, |&(m, n)| cell(ctx, m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;
    use crate::verify::{GridConfig, Mode, Status};

    fn ctx(p_list: Vec<Exponent>) -> Context {
        Context::new(GridConfig {
            max_m: 3,
            max_n: 3,
            p_list,
            ..GridConfig::default()
        })
        .unwrap()
    }

    fn find<'a>(recs: &'a [CheckRecord], check: &str) -> &'a CheckRecord {
        recs.iter().find(|r| r.check == check).unwrap()
    }

    #[test]
    fn p1_is_mass_additivity() {
        let ctx = ctx(vec![Exponent::integer(1)]);
        let recs = cell(&ctx, 0, 2);
        let r = find(&recs, "minkowski-p1");
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("5", "5"));
        assert_eq!((r.status, r.mode), (Status::EqualityAchieved, Mode::Exact));
        let recs = cell(&ctx, 1, 2);
        let r = find(&recs, "minkowski-p1");
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("6", "6"));
        assert_eq!(find(&recs, "sum-norm-formula").status, Status::Pass);
        assert_eq!(find(&recs, "sum-closed-form").status, Status::Pass);
    }

    #[test]
    fn equal_indices_reach_equality() {
        let ctx = ctx(vec![Exponent::integer(2), Exponent::integer(3)]);
        for r in cell(&ctx, 2, 2).iter().filter(|r| r.check == "minkowski") {
            assert_eq!(r.status, Status::EqualityAchieved, "{r:?}");
        }
        for r in cell(&ctx, 1, 3).iter().filter(|r| r.check == "minkowski") {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn infinite_and_real_exponents() {
        let ctx = ctx(vec![Exponent::Infinite, Exponent::Finite(rat(5, 2))]);
        let recs = cell(&ctx, 1, 3);
        let modes: Vec<Mode> = recs
            .iter()
            .filter(|r| r.check == "minkowski")
            .map(|r| r.mode)
            .collect();
        assert_eq!(modes, vec![Mode::Exact, Mode::Highprec]);
        assert!(recs.iter().all(|r| r.status != Status::Fail));
    }
}
