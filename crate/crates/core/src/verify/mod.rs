//! Desk-scale verification of the identities and inequalities satisfied by
//! the sequence `f_n`, over a grid of indices and exponents.
//!
//! Each suite produces [`CheckRecord`]s. Comparisons whose two sides are
//! rational (possibly after raising both to a common integer power) are
//! decided with rational arithmetic (`mode = exact`); the rest go through
//! rigorous enclosures (`mode = highprec`). Suites never stop at a failure.

mod compare;
mod engine;
mod holder;
mod minkowski;
mod vandermonde;
mod young;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::binom_seq::BinomSeqHandle;
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, rat, ExactRational};
use crate::highprec::{Decision, Exponent, DEFAULT_PRECISION_BITS};

pub use compare::{compare_root_sums, compare_sides, Base, Combine, Outcome, RootTerm, Side};
pub use holder::holder_cell;
pub use vandermonde::vandermonde_cell;
pub use young::{young_cell, young_triples};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Vandermonde,
    Holder,
    Young,
    Minkowski,
    Engine,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Vandermonde,
        Suite::Holder,
        Suite::Young,
        Suite::Minkowski,
        Suite::Engine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Vandermonde => "vandermonde",
            Suite::Holder => "holder",
            Suite::Young => "young",
            Suite::Minkowski => "minkowski",
            Suite::Engine => "engine",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    #[serde(rename = "≤")]
    AtMost,
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = "<")]
    Less,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "≤",
            Relation::Equal => "=",
            Relation::Less => "<",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    EqualityAchieved,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::EqualityAchieved => "equality-achieved",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Highprec,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Highprec => "highprec",
        }
    }
}

/// Grid parameter value: an index or an exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParamValue {
    Int(u64),
    Exp(Exponent),
}

impl ParamValue {
    fn sort_key(&self) -> Exponent {
        match self {
            ParamValue::Int(v) => Exponent::Finite(rat(*v as i64, 1)),
            ParamValue::Exp(e) => e.clone(),
        }
    }
}

impl PartialOrd for ParamValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ParamValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Exp(e) => write!(f, "{e}"),
        }
    }
}

impl Serialize for ParamValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ParamValue::Int(v) => s.serialize_u64(*v),
            ParamValue::Exp(e) => e.serialize(s),
        }
    }
}

pub type Params = BTreeMap<&'static str, ParamValue>;

/// Builds a parameter map from `(name, value)` pairs.
pub fn params<const N: usize>(pairs: [(&'static str, ParamValue); N]) -> Params {
    pairs.into_iter().collect()
}

/// One check at one grid point. A failing record carries the suite, check
/// name and parameters needed to reproduce it, and both rendered sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub check: String,
    pub params: Params,
    pub lhs: String,
    pub rhs: String,
    pub relation: Relation,
    pub status: Status,
    pub mode: Mode,
    /// Exact comparisons of root expressions are made on `lhs^power` vs
    /// `rhs^power`; `lhs`/`rhs` then hold those powers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<u64>,
}

impl CheckRecord {
    /// An exact identity `lhs = rhs`.
    pub fn identity(
        suite: Suite,
        check: &str,
        params: Params,
        lhs: &ExactRational,
        rhs: &ExactRational,
    ) -> Self {
        CheckRecord {
            suite,
            check: check.to_string(),
            params,
            lhs: format_rational(lhs),
            rhs: format_rational(rhs),
            relation: Relation::Equal,
            status: if lhs == rhs {
                Status::Pass
            } else {
                Status::Fail
            },
            mode: Mode::Exact,
            power: None,
        }
    }

    /// A yes/no structural check with free-form rendered sides.
    pub fn structural(
        suite: Suite,
        check: &str,
        params: Params,
        holds: bool,
        lhs: String,
        rhs: String,
    ) -> Self {
        CheckRecord {
            suite,
            check: check.to_string(),
            params,
            lhs,
            rhs,
            relation: Relation::Equal,
            status: if holds { Status::Pass } else { Status::Fail },
            mode: Mode::Exact,
            power: None,
        }
    }

    /// `lhs ≤ rhs`, or `lhs = rhs` when `expect_equality`, from a comparison outcome.
    pub fn inequality(
        suite: Suite,
        check: &str,
        params: Params,
        outcome: &Outcome,
        expect_equality: bool,
    ) -> Self {
        let (mode, lhs, rhs, power) = match outcome {
            Outcome::Exact {
                power, lhs, rhs, ..
            } => (
                Mode::Exact,
                format_rational(lhs),
                format_rational(rhs),
                (*power != 1).then_some(*power),
            ),
            Outcome::HighPrec { lhs, rhs, .. } => {
                let show = |e: &Option<crate::highprec::Enclosure>| {
                    e.as_ref()
                        .map_or_else(|| "undefined".to_string(), |e| e.to_string())
                };
                (Mode::Highprec, show(lhs), show(rhs), None)
            }
        };
        let status = match outcome.decision() {
            Ok(Decision::EqualWithin) => Status::EqualityAchieved,
            Ok(Decision::StrictlyLess) if !expect_equality => Status::Pass,
            _ => Status::Fail,
        };
        CheckRecord {
            suite,
            check: check.to_string(),
            params,
            lhs,
            rhs,
            relation: if expect_equality {
                Relation::Equal
            } else {
                Relation::AtMost
            },
            status,
            mode,
            power,
        }
    }

    /// A cell that could not be evaluated.
    pub fn error(suite: Suite, check: &str, params: Params, err: &Error) -> Self {
        CheckRecord {
            suite,
            check: check.to_string(),
            params,
            lhs: format!("error: {err}"),
            rhs: String::new(),
            relation: Relation::AtMost,
            status: Status::Fail,
            mode: Mode::Highprec,
            power: None,
        }
    }

    fn order_key(&self) -> (Suite, &str, Vec<(&'static str, &ParamValue)>) {
        (
            self.suite,
            &self.check,
            self.params.iter().map(|(k, v)| (*k, v)).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridConfig {
    pub max_m: u64,
    pub max_n: u64,
    /// Exponents for the Hölder, Young and Minkowski suites.
    pub p_list: Vec<Exponent>,
    /// Young output exponents.
    pub r_list: Vec<Exponent>,
    /// Extra real exponents sampled by the Hölder suite only.
    pub holder_real_p: Vec<Exponent>,
    pub precision_bits: u32,
    pub parallel: bool,
    /// Test hook: adds 1 to the Vandermonde sum at `(m, n, r) = (1, 1, 1)`.
    pub inject_fault: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        let ints = |v: &[u32]| v.iter().map(|&p| Exponent::integer(p)).collect();
        GridConfig {
            max_m: 16,
            max_n: 16,
            p_list: ints(&[1, 2, 3]),
            r_list: ints(&[1, 2, 3]),
            holder_real_p: vec![
                Exponent::Finite(rat(3, 2)),
                Exponent::integer(3),
                Exponent::Finite(rat(7, 2)),
            ],
            precision_bits: DEFAULT_PRECISION_BITS,
            parallel: false,
            inject_fault: false,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::InvalidArgument(format!(
                "precision_bits must be >= 64, got {}",
                self.precision_bits
            )));
        }
        Ok(())
    }

    fn max_index(&self) -> u64 {
        self.max_m.max(self.max_n)
    }

    /// `(m, n)` for `m <= max_m`, `n <= max_n`.
    fn pairs(&self) -> Vec<(u64, u64)> {
        (0..=self.max_m)
            .flat_map(|m| (0..=self.max_n).map(move |n| (m, n)))
            .collect()
    }
}

/// Shared state for one run: the configuration and the `f_n` handles.
pub struct Context {
    pub cfg: GridConfig,
    seqs: Vec<BinomSeqHandle>,
}

impl Context {
    pub fn new(cfg: GridConfig) -> Result<Self> {
        cfg.validate()?;
        let top = 2 * cfg.max_index() + 1;
        let seqs = (0..=top).map(BinomSeqHandle::new).collect();
        Ok(Context { cfg, seqs })
    }

    /// Closed form of `f_n`.
    pub fn f(&self, n: u64) -> std::borrow::Cow<'_, crate::piecewise::PiecewiseFn> {
        match self.seqs.get(n as usize) {
            Some(h) => std::borrow::Cow::Borrowed(h.closed_form()),
            None => std::borrow::Cow::Owned(BinomSeqHandle::new(n).closed_form().clone()),
        }
    }

    fn map_cells<C, F>(&self, cells: Vec<C>, f: F) -> Vec<CheckRecord>
    where
        C: Send + Sync,
        F: Fn(&C) -> Vec<CheckRecord> + Send + Sync,
    {
        if self.cfg.parallel {
            cells.par_iter().flat_map_iter(&f).collect()
        } else {
            cells.iter().flat_map(f).collect()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub equality: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub config: GridConfig,
    pub records: Vec<CheckRecord>,
    pub counts: Counts,
}

impl VerificationReport {
    /// Sorts records into canonical order (suite, check, parameters) and tallies them.
    pub fn new(config: GridConfig, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        let mut counts = Counts::default();
        for r in &records {
            match r.status {
                Status::Pass => counts.pass += 1,
                Status::Fail => counts.fail += 1,
                Status::EqualityAchieved => counts.equality += 1,
            }
        }
        VerificationReport {
            config,
            records,
            counts,
        }
    }

    pub fn passed(&self) -> bool {
        self.counts.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }

    /// One row per record; parameters flattened as `m=1;n=2;p=3/2`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,check,params,lhs,rhs,relation,status,mode,power\n");
        for r in &self.records {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let row = [
                r.suite.name().to_string(),
                r.check.clone(),
                params.join(";"),
                r.lhs.clone(),
                r.rhs.clone(),
                r.relation.symbol().to_string(),
                r.status.name().to_string(),
                r.mode.name().to_string(),
                r.power.map(|p| p.to_string()).unwrap_or_default(),
            ];
            let row: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn suite_records(ctx: &Context, suite: Suite) -> Vec<CheckRecord> {
    match suite {
        Suite::Vandermonde => vandermonde::records(ctx),
        Suite::Holder => holder::records(ctx),
        Suite::Young => young::records(ctx),
        Suite::Minkowski => minkowski::records(ctx),
        Suite::Engine => engine::records(ctx),
    }
}

/// Runs the given suites over the grid.
pub fn run_suites(cfg: &GridConfig, suites: &[Suite]) -> Result<VerificationReport> {
    let ctx = Context::new(cfg.clone())?;
    let records = suites
        .iter()
        .flat_map(|&s| suite_records(&ctx, s))
        .collect();
    Ok(VerificationReport::new(cfg.clone(), records))
}

pub fn check_vandermonde(cfg: &GridConfig) -> Result<VerificationReport> {
    run_suites(cfg, &[Suite::Vandermonde])
}

pub fn check_holder(cfg: &GridConfig) -> Result<VerificationReport> {
    run_suites(cfg, &[Suite::Holder])
}

pub fn check_young(cfg: &GridConfig) -> Result<VerificationReport> {
    run_suites(cfg, &[Suite::Young])
}

pub fn check_minkowski(cfg: &GridConfig) -> Result<VerificationReport> {
    run_suites(cfg, &[Suite::Minkowski])
}

pub fn check_engine_consistency(cfg: &GridConfig) -> Result<VerificationReport> {
    run_suites(cfg, &[Suite::Engine])
}

/// Every suite; the report fails iff some record fails.
pub fn run_all(cfg: &GridConfig) -> Result<VerificationReport> {
    run_suites(cfg, &Suite::ALL)
}

/// `‖f_n‖_p` as a root term: `Σ_i C(n,i)^p` under a `p`-th root, or the
/// central binomial for `p = ∞`.
pub(crate) fn seq_norm_term(n: u64, p: &Exponent) -> RootTerm {
    use crate::binom_seq::{linf_formula, lp_norm_pow_formula};
    use crate::exact_arith::{binomial, from_integer};
    use crate::highprec::Enclosure;
    match p {
        Exponent::Infinite => RootTerm::value(from_integer(linf_formula(n))),
        Exponent::Finite(q) => match p.as_integer() {
            Some(k) => RootTerm::exact(from_integer(lp_norm_pow_formula(n, k)), q.clone()),
            None => {
                let q2 = q.clone();
                RootTerm::real(
                    move |bits| {
                        let mut acc = Enclosure::exact(ExactRational::from_integer(0.into()));
                        for i in 0..=n {
                            let term =
                                Enclosure::exact(from_integer(binomial(n, i))).pow(&q2, bits);
                            acc = acc.add(&term, bits);
                        }
                        Ok(acc)
                    },
                    q.clone(),
                )
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("all".parse::<Suite>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = GridConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.precision_bits = 32;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn params_order_numerically() {
        let a = ParamValue::Exp(Exponent::Finite(rat(3, 2)));
        let b = ParamValue::Int(2);
        let c = ParamValue::Exp(Exponent::Infinite);
        assert!(a < b && b < c);
        assert!(ParamValue::Int(2) < ParamValue::Int(10));
    }

    #[test]
    fn csv_quotes_fields() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("x"), "x");
    }
}
