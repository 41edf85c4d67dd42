use super::{params, CheckRecord, Context, ParamValue, Suite};
use crate::binom_seq::vandermonde_lhs;
use crate::exact_arith::{binomial, from_integer};

/// `Σ_k C(m,k) C(n,r-k) = C(m+n, r)` for every `0 <= r <= m+n`.
pub fn vandermonde_cell(m: u64, n: u64, inject_fault: bool) -> Vec<CheckRecord> {
    (0..=m + n)
        .map(|r| {
            let mut lhs = vandermonde_lhs(m, n, r);
            if inject_fault && (m, n, r) == (1, 1, 1) {
                lhs += 1;
            }
            CheckRecord::identity(
                Suite::Vandermonde,
                "vandermonde",
                params([
                    ("m", ParamValue::Int(m)),
                    ("n", ParamValue::Int(n)),
                    ("r", ParamValue::Int(r)),
                ]),
                &from_integer(lhs),
                &from_integer(binomial(m + n, r)),
            )
        })
        .collect()
}

pub(super) fn records(ctx: &Context) -> Vec<CheckRecord> {
    let fault = ctx.cfg.inject_fault;
    ctx.map_cells(ctx.cfg.pairs(), |&(m, n)| vandermonde_cell(m, n, fault))
}
