use super::{params, seq_norm_term, CheckRecord, Context, ParamValue, RootTerm, Side, Suite};
use crate::binom_seq::product_integral_formula;
use crate::highprec::Exponent;
use crate::verify::compare::compare_sides;

/// `∫ f_m f_n <= ‖f_m‖_p ‖f_n‖_q` with `q` conjugate to `p`.
///
/// For `p = 2` and `m = n` this is Cauchy–Schwarz with `f_m = f_n`, checked
/// as an equality.
pub fn holder_cell(
    ctx: &Context,
    m: u64,
    n: u64,
    p: &Exponent,
    force_highprec: bool,
) -> CheckRecord {
    let q = p.conjugate();
    let lhs_value = product_integral_formula(m.min(n), m.max(n)).expect("ordered");
    let lhs = Side::single(RootTerm::value(lhs_value));
    let rhs = Side::product(vec![seq_norm_term(m, p), seq_norm_term(n, &q)]);
    let schwarz = *p == Exponent::integer(2);
    let outcome = compare_sides(&lhs, &rhs, ctx.cfg.precision_bits, force_highprec);
    CheckRecord::inequality(
        Suite::Holder,
        if schwarz { "schwarz" } else { "holder" },
        params([
            ("m", ParamValue::Int(m)),
            ("n", ParamValue::Int(n)),
            ("p", ParamValue::Exp(p.clone())),
            ("q", ParamValue::Exp(q)),
        ]),
        &outcome,
        schwarz && m == n,
    )
}

pub(super) fn records(ctx: &Context) -> Vec<CheckRecord> {
    let mut exponents: Vec<Exponent> = ctx
        .cfg
        .p_list
        .iter()
        .chain(&ctx.cfg.holder_real_p)
        .cloned()
        .collect();
    exponents.sort();
    exponents.dedup();
    ctx.map_cells(ctx.cfg.pairs(), |&(m, n)| {
        exponents
            .iter()
            .map(|p| holder_cell(ctx, m, n, p, false))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;
    use crate::verify::{GridConfig, Mode, Status};

    fn ctx() -> Context {
        Context::new(GridConfig {
            max_m: 4,
            max_n: 4,
            ..GridConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn schwarz_examples() {
        let ctx = ctx();
        let two = Exponent::integer(2);
        let r = holder_cell(&ctx, 1, 1, &two, false);
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("4", "4"));
        assert_eq!(
            (r.status, r.mode, r.power),
            (Status::EqualityAchieved, Mode::Exact, Some(2))
        );
        let r = holder_cell(&ctx, 1, 3, &two, false);
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("36", "40"));
        assert_eq!(r.status, Status::Pass);
        let r = holder_cell(&ctx, 0, 0, &two, false);
        assert_eq!(r.status, Status::EqualityAchieved);
    }

    #[test]
    fn real_exponents_use_enclosures() {
        let ctx = ctx();
        let r = holder_cell(&ctx, 2, 3, &Exponent::Finite(rat(3, 2)), false);
        assert_eq!((r.status, r.mode), (Status::Pass, Mode::Highprec));
        let r = holder_cell(&ctx, 2, 3, &Exponent::integer(1), false);
        assert_eq!((r.status, r.mode), (Status::Pass, Mode::Exact));
        // forcing p = 2 onto enclosures reaches the same verdict
        for (m, n) in [(1, 1), (1, 3), (2, 4)] {
            let exact = holder_cell(&ctx, m, n, &Exponent::integer(2), false);
            let real = holder_cell(&ctx, m, n, &Exponent::integer(2), true);
            assert_eq!(real.mode, Mode::Highprec);
            assert_eq!(exact.status, real.status);
        }
    }
}
