//! Engine-vs-formula consistency: every closed form in `binom_seq` against
//! the general piecewise algebra.

use super::{params, CheckRecord, Context, ParamValue, Params, Suite};
use crate::binom_seq::{
    build_recursive, central_argmax, conv_closed_form, conv_lr_norm_pow_formula, f0, hat,
    jump_points, linf_formula, lp_norm_pow_formula, mean_square, product_closed_form,
    product_integral_formula, sum_closed_form, support,
};
use crate::exact_arith::{catalan, from_integer, int, pow2, rat, ExactRational};
use crate::piecewise::{PiecewiseFn, Poly};

const EVENNESS_SAMPLES: usize = 50;

fn pn(n: u64) -> Params {
    params([("n", ParamValue::Int(n))])
}

fn pmn(m: u64, n: u64) -> Params {
    params([("m", ParamValue::Int(m)), ("n", ParamValue::Int(n))])
}

fn pieces_summary(f: &PiecewiseFn) -> String {
    format!("{} pieces", f.pieces().len())
}

fn same_fn(check: &str, ps: Params, a: &PiecewiseFn, b: &PiecewiseFn) -> CheckRecord {
    CheckRecord::structural(
        Suite::Engine,
        check,
        ps,
        a == b,
        pieces_summary(a),
        pieces_summary(b),
    )
}

fn ident(check: &str, ps: Params, lhs: &ExactRational, rhs: &ExactRational) -> CheckRecord {
    CheckRecord::identity(Suite::Engine, check, ps, lhs, rhs)
}

fn ident_or_err(
    check: &str,
    ps: Params,
    formula: &ExactRational,
    engine: crate::error::Result<ExactRational>,
) -> CheckRecord {
    match engine {
        Ok(v) => ident(check, ps, formula, &v),
        Err(e) => CheckRecord::error(Suite::Engine, check, ps, &e),
    }
}

/// Deterministic rational samples in `(-(n+2), n+2)` with small denominators.
fn sample_points(n: u64, count: usize) -> Vec<ExactRational> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ n;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    (0..count)
        .map(|_| {
            let den = (next() % 97 + 1) as i64;
            let span = 2 * (n as i64 + 2) * den;
            let num = (next() % span as u64) as i64 - span / 2;
            rat(num, den)
        })
        .collect()
}

fn sequence_cell(ctx: &Context, n: u64) -> Vec<CheckRecord> {
    let f = ctx.f(n);
    let mut out = vec![same_fn("recursive", pn(n), &build_recursive(n), &f)];

    let jumps = jump_points(n);
    let even = sample_points(n, EVENNESS_SAMPLES)
        .into_iter()
        .filter(|x| !jumps.contains(x) && !jumps.contains(&-x.clone()))
        .all(|x| f.evaluate(&x) == f.evaluate(&-x.clone()));
    let nonneg = f
        .pieces()
        .iter()
        .all(|p| p.poly().degree() == Some(0) && p.poly().coeffs()[0] > int(0));
    out.push(CheckRecord::structural(
        Suite::Engine,
        "even-nonnegative",
        pn(n),
        even && nonneg,
        format!("even={even} nonnegative={nonneg}"),
        "even=true nonnegative=true".to_string(),
    ));

    let handle = crate::binom_seq::BinomSeqHandle::new(n);
    let units = handle.unit_pieces();
    let from_units = PiecewiseFn::sum_of(
        units
            .iter()
            .map(|(iv, c)| (iv.clone(), Poly::constant(from_integer(c.clone())))),
    );
    let mut unit_ends: Vec<ExactRational> = units.iter().map(|(iv, _)| iv.lo().clone()).collect();
    unit_ends.extend(units.last().map(|(iv, _)| iv.hi().clone()));
    let supp = support(n);
    let structure_ok = from_units == *f
        && unit_ends == jumps
        && f.breakpoints().iter().all(|b| jumps.contains(b))
        && f.support() == Some((supp.lo().clone(), supp.hi().clone()));
    out.push(CheckRecord::structural(
        Suite::Engine,
        "support-jumps",
        pn(n),
        structure_ok,
        format!("{} unit pieces on {supp}", units.len()),
        format!("{} jump points", jumps.len()),
    ));
    out
}

fn norm_cell(ctx: &Context, n: u64, exponents: &[u32]) -> Vec<CheckRecord> {
    let f = ctx.f(n);
    let mut out: Vec<CheckRecord> = exponents
        .iter()
        .map(|&p| {
            let ps = params([("n", ParamValue::Int(n)), ("p", ParamValue::Int(p as u64))]);
            ident_or_err(
                "norm",
                ps,
                &from_integer(lp_norm_pow_formula(n, p)),
                f.lp_norm_pow(p),
            )
        })
        .collect();
    out.push(ident_or_err(
        "linf",
        pn(n),
        &from_integer(linf_formula(n)),
        f.linf_norm(),
    ));
    out.push(ident(
        "catalan",
        pn(n),
        &mean_square(n),
        &(f.multiply(&f).integrate() / int(n as i64 + 1)),
    ));
    out.push(ident("catalan-number", pn(n), &mean_square(n), &catalan(n)));
    out
}

fn pair_cell(ctx: &Context, m: u64, n: u64) -> Vec<CheckRecord> {
    let (fm, fn_) = (ctx.f(m), ctx.f(n));
    let mut out = Vec::new();
    if m <= n {
        let product = fn_.multiply(&fm);
        match product_closed_form(m, n) {
            Ok(closed) => out.push(same_fn("product-closed-form", pmn(m, n), &product, &closed)),
            Err(e) => out.push(CheckRecord::error(
                Suite::Engine,
                "product-closed-form",
                pmn(m, n),
                &e,
            )),
        }
        out.push(ident_or_err(
            "product-integral",
            pmn(m, n),
            &product.integrate(),
            product_integral_formula(m, n),
        ));
        match sum_closed_form(m, n) {
            Ok(closed) => out.push(same_fn(
                "sum-closed-form",
                pmn(m, n),
                &fn_.add(&fm),
                &closed,
            )),
            Err(e) => out.push(CheckRecord::error(
                Suite::Engine,
                "sum-closed-form",
                pmn(m, n),
                &e,
            )),
        }
    }
    let conv = fm.convolve(&fn_);
    let closed = conv_closed_form(m, n);
    out.push(same_fn(
        "conv-closed-form",
        pmn(m, n),
        &conv,
        &closed.pieces,
    ));
    out.push(ident(
        "conv-mass",
        pmn(m, n),
        &conv.integrate(),
        &from_integer(pow2(m + n)),
    ));
    out.push(ident_or_err(
        "conv-linf",
        pmn(m, n),
        &from_integer(linf_formula(m + n)),
        conv.linf_norm(),
    ));
    for r in 1..=3u32 {
        let ps = params([
            ("m", ParamValue::Int(m)),
            ("n", ParamValue::Int(n)),
            ("r", ParamValue::Int(r as u64)),
        ]);
        out.push(ident_or_err(
            "conv-norm",
            ps,
            &conv_lr_norm_pow_formula(m, n, r),
            conv.lp_norm_pow(r),
        ));
    }
    out
}

fn argmax_record(n: u64) -> CheckRecord {
    let got = central_argmax(n);
    let want: Vec<u64> = if n.is_multiple_of(2) {
        vec![n / 2]
    } else {
        vec![n / 2, n / 2 + 1]
    };
    let show = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    CheckRecord::structural(
        Suite::Engine,
        "argmax",
        pn(n),
        got == want,
        show(&got),
        show(&want),
    )
}

pub(super) fn records(ctx: &Context) -> Vec<CheckRecord> {
    let top = ctx.cfg.max_m.max(ctx.cfg.max_n);
    let mut exponents: Vec<u32> = (1..=4)
        .chain(ctx.cfg.p_list.iter().filter_map(|p| p.as_integer()))
        .collect();
    exponents.sort_unstable();
    exponents.dedup();

    let mut out = ctx.map_cells((0..=2 * top).collect(), |&n| sequence_cell(ctx, n));
    out.extend(ctx.map_cells((0..=top).collect(), |&n| norm_cell(ctx, n, &exponents)));
    out.extend(ctx.map_cells(ctx.cfg.pairs(), |&(m, n)| pair_cell(ctx, m, n)));
    out.extend((0..=4 * top).map(argmax_record));
    out.push(same_fn("hat", params([]), &f0().convolve(&f0()), &hat()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{GridConfig, Status};

    #[test]
    fn small_grid_is_consistent() {
        let ctx = Context::new(GridConfig {
            max_m: 3,
            max_n: 3,
            ..GridConfig::default()
        })
        .unwrap();
        let recs = records(&ctx);
        let failed: Vec<_> = recs.iter().filter(|r| r.status == Status::Fail).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(recs.iter().any(|r| r.check == "conv-norm"));
    }

    #[test]
    fn samples_are_deterministic() {
        assert_eq!(sample_points(5, 10), sample_points(5, 10));
        assert!(sample_points(5, 50)
            .iter()
            .all(|x| *x < int(7) && *x > int(-7)));
    }
}
