//! The `binoseq` command line: compute `f_n` and derived objects, print
//! Pascal rows, and run the verification suites.
//!
//! Exit codes: 0 on success (and when every verification record passes),
//! 1 when a verification record fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use binoseq::binom_seq::{self, BinomSeqHandle};
use binoseq::exact_arith::{
    format_rational, from_integer, parse_rational, pascal_row, to_decimal_string,
};
use binoseq::highprec::DEFAULT_PRECISION_BITS;
use binoseq::verify::{self, Suite};
use binoseq::{ExactRational, Exponent, GridConfig, PiecewiseFn};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Decimal places used for irrational values and CSV samples when `--decimal` is absent.
const DEFAULT_PLACES: usize = 30;
const DEFAULT_CSV_PLACES: usize = 6;

#[derive(Parser, Debug)]
#[command(
    name = "binoseq",
    version,
    about = "Exact calculus of the binomial simple-function sequence f_n"
)]
struct Cli {
    /// Render rational results with K decimal places instead of p/q.
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit f_N as pieces, JSON, or sampled CSV.
    Fn {
        #[arg(long)]
        n: u64,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Sample on a grid of this step over the support.
        #[arg(long, value_name = "STEP", value_parser = positive_rational)]
        csv: Option<ExactRational>,
    },
    /// Print f_N(x).
    Eval {
        #[arg(long)]
        n: u64,
        #[arg(long, value_name = "P/Q", value_parser = rational, allow_hyphen_values = true)]
        x: ExactRational,
    },
    /// Print the L^p norm of f_N, or with --pow the exact integral of |f_N|^p.
    Norm {
        #[arg(long)]
        n: u64,
        #[arg(long, value_name = "P", value_parser = exponent)]
        p: Exponent,
        #[arg(long)]
        pow: bool,
    },
    /// Print the exact integral of f_N f_M.
    Prodint {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Print f_M * f_N (breakpoints and pieces by default).
    Conv {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, conflicts_with = "samples")]
        json: bool,
        /// Append a CSV table with K samples per unit length.
        #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
        samples: Option<u64>,
        /// Also print the exact integral of |f_M * f_N|^R.
        #[arg(long, value_name = "R", value_parser = clap::value_parser!(u32).range(1..))]
        r: Option<u32>,
    },
    /// Print rows 0..K-1 of Pascal's triangle.
    Pascal {
        #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
        rows: u64,
    },
    /// Run verification suites over a grid of indices and exponents.
    Verify {
        #[arg(long, value_parser = suite_arg)]
        suite: SuiteArg,
        #[arg(long, value_name = "M")]
        max_m: Option<u64>,
        #[arg(long, value_name = "N")]
        max_n: Option<u64>,
        /// Comma-separated exponents, e.g. 1,2,3/2,inf.
        #[arg(long, value_name = "LIST", value_parser = exponent_list)]
        p: Option<ExponentList>,
        #[arg(long, value_name = "LIST", value_parser = exponent_list)]
        r: Option<ExponentList>,
        #[arg(long, value_name = "BITS", value_parser = clap::value_parser!(u32).range(64..))]
        precision: Option<u32>,
        #[arg(long)]
        parallel: bool,
        /// Write the full report; the format follows the extension (.json or .csv).
        #[arg(long, value_name = "FILE", value_parser = report_path)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Debug)]
enum SuiteArg {
    All,
    One(Suite),
}

#[derive(Clone, Debug)]
struct ExponentList(Vec<Exponent>);

fn rational(s: &str) -> Result<ExactRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn positive_rational(s: &str) -> Result<ExactRational, String> {
    let v = rational(s)?;
    if v <= from_integer(0.into()) {
        return Err(format!("expected a positive rational, got {s}"));
    }
    Ok(v)
}

fn exponent(s: &str) -> Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

fn exponent_list(s: &str) -> Result<ExponentList, String> {
    let list = s
        .split(',')
        .map(|p| exponent(p.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if list.is_empty() {
        return Err("empty exponent list".into());
    }
    Ok(ExponentList(list))
}

fn suite_arg(s: &str) -> Result<SuiteArg, String> {
    if s == "all" {
        return Ok(SuiteArg::All);
    }
    s.parse::<Suite>()
        .map(SuiteArg::One)
        .map_err(|e| e.to_string())
}

fn report_path(s: &str) -> Result<PathBuf, String> {
    let path = PathBuf::from(s);
    match path.extension().and_then(|e| e.to_str()) {
        Some("json" | "csv") => Ok(path),
        _ => Err(format!("report file must end in .json or .csv, got {s}")),
    }
}

struct Printer {
    decimal: Option<usize>,
}

impl Printer {
    fn value(&self, v: &ExactRational) -> String {
        match self.decimal {
            Some(k) => to_decimal_string(v, k),
            None => format_rational(v),
        }
    }

    fn places(&self) -> usize {
        self.decimal.unwrap_or(DEFAULT_PLACES)
    }
}

/// Rows `0..rows` of Pascal's triangle, each centred on the last row.
pub fn render_pascal(rows: u64) -> String {
    let lines: Vec<String> = (0..rows)
        .map(|n| {
            pascal_row(n)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let width = lines.last().map_or(0, |l| l.chars().count());
    let mut out = String::new();
    for line in &lines {
        let pad = (width - line.chars().count()) / 2;
        out.push_str(&" ".repeat(pad));
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn breakpoints_line(f: &PiecewiseFn) -> String {
    let points: Vec<String> = f.breakpoints().iter().map(format_rational).collect();
    format!("breakpoints: {}\n", points.join(", "))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, binoseq::Error> {
    let printer = Printer {
        decimal: cli.decimal,
    };
    let mut text = String::new();
    let mut code = EXIT_OK;
    match cli.command {
        Command::Fn { n, json, csv } => {
            let f = BinomSeqHandle::new(n);
            let f = f.closed_form();
            text = if json {
                f.to_json() + "\n"
            } else if let Some(step) = csv {
                f.to_csv_samples(&step, cli.decimal.unwrap_or(DEFAULT_CSV_PLACES))?
            } else {
                f.to_string()
            };
        }
        Command::Eval { n, x } => {
            let v = BinomSeqHandle::new(n).closed_form().evaluate(&x);
            text = printer.value(&v) + "\n";
        }
        Command::Norm { n, p, pow } => {
            let f = BinomSeqHandle::new(n);
            let f = f.closed_form();
            let v = match (&p, p.as_integer()) {
                (Exponent::Infinite, _) => printer.value(&f.linf_norm()?),
                (_, Some(k)) if pow => printer.value(&f.lp_norm_pow(k)?),
                (Exponent::Finite(q), _) => {
                    let e = if pow {
                        f.lp_norm_real_pow(q, DEFAULT_PRECISION_BITS)?
                    } else {
                        f.lp_norm_real(q, DEFAULT_PRECISION_BITS)?
                    };
                    if e.is_exact() {
                        printer.value(e.lo())
                    } else {
                        e.to_decimal(printer.places())
                    }
                }
            };
            text = v + "\n";
        }
        Command::Prodint { m, n } => {
            let v = binom_seq::product_integral_formula(m.min(n), m.max(n))?;
            text = printer.value(&v) + "\n";
        }
        Command::Conv {
            m,
            n,
            json,
            samples,
            r,
        } => {
            let conv = BinomSeqHandle::new(m)
                .closed_form()
                .convolve(BinomSeqHandle::new(n).closed_form());
            if json {
                text = conv.to_json() + "\n";
            } else {
                text.push_str(&breakpoints_line(&conv));
                text.push_str(&conv.to_string());
                if let Some(k) = samples {
                    let step = binoseq::exact_arith::rat(1, k as i64);
                    text.push_str(
                        &conv.to_csv_samples(&step, cli.decimal.unwrap_or(DEFAULT_CSV_PLACES))?,
                    );
                }
            }
            if let Some(r) = r {
                text.push_str(&format!(
                    "norm_pow r={r}: {}\n",
                    printer.value(&conv.lp_norm_pow(r)?)
                ));
            }
        }
        Command::Pascal { rows } => {
            text = render_pascal(rows);
        }
        Command::Verify {
            suite,
            max_m,
            max_n,
            p,
            r,
            precision,
            parallel,
            out: report,
            inject_fault,
        } => {
            let defaults = GridConfig::default();
            let cfg = GridConfig {
                max_m: max_m.or(max_n).unwrap_or(defaults.max_m),
                max_n: max_n.or(max_m).unwrap_or(defaults.max_n),
                p_list: p.map_or(defaults.p_list.clone(), |l| l.0),
                r_list: r.map_or(defaults.r_list.clone(), |l| l.0),
                precision_bits: precision.unwrap_or(defaults.precision_bits),
                parallel,
                inject_fault,
                ..defaults
            };
            let suites: Vec<Suite> = match suite {
                SuiteArg::All => Suite::ALL.to_vec(),
                SuiteArg::One(s) => vec![s],
            };
            let rep = verify::run_suites(&cfg, &suites)?;
            if let Some(path) = report {
                let body = if path.extension().is_some_and(|e| e == "csv") {
                    rep.to_csv()
                } else {
                    rep.to_json() + "\n"
                };
                std::fs::write(&path, body).map_err(|e| {
                    binoseq::Error::InvalidArgument(format!("{}: {e}", path.display()))
                })?;
            }
            for f in rep.failures() {
                let params: Vec<String> =
                    f.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                text.push_str(&format!(
                    "FAIL {} {} {}: {} {} {}\n",
                    f.suite,
                    f.check,
                    params.join(" "),
                    f.lhs,
                    f.relation.symbol(),
                    f.rhs
                ));
            }
            text.push_str(&format!(
                "{} checks: {} pass, {} equality-achieved, {} fail\n",
                rep.records.len(),
                rep.counts.pass,
                rep.counts.equality,
                rep.counts.fail
            ));
            if !rep.passed() {
                code = EXIT_VERIFY_FAILED;
            }
        }
    }
    out.write_all(text.as_bytes())
        .map_err(|e| binoseq::Error::InvalidArgument(e.to_string()))?;
    Ok(code)
}

/// Runs one invocation (`args[0]` is the program name), writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs one invocation against the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("binoseq").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn pascal_rows() {
        assert_eq!(render_pascal(1), "1\n");
        assert_eq!(render_pascal(3), "  1\n 1 1\n1 2 1\n");
        assert_eq!(render_pascal(7).lines().last(), Some("1 6 15 20 15 6 1"));
        assert!(render_pascal(12).lines().all(|l| !l.ends_with(' ')));
    }

    #[test]
    fn scalar_commands() {
        assert_eq!(
            call(&["prodint", "--m", "1", "--n", "2"]),
            (0, "3\n".into(), String::new())
        );
        assert_eq!(call(&["prodint", "--m", "2", "--n", "1"]).1, "3\n");
        assert_eq!(call(&["eval", "--n", "2", "--x", "0"]).1, "2\n");
        assert_eq!(call(&["eval", "--n", "3", "--x", "-7/4"]).1, "1\n");
        assert_eq!(call(&["norm", "--n", "4", "--p", "2", "--pow"]).1, "70\n");
        assert_eq!(call(&["norm", "--n", "4", "--p", "1"]).1, "16\n");
        assert_eq!(call(&["norm", "--n", "4", "--p", "inf"]).1, "6\n");
        assert_eq!(
            call(&["--decimal", "3", "eval", "--n", "0", "--x", "1/3"]).1,
            "1.000\n"
        );
    }

    #[test]
    fn irrational_norm_is_decimal() {
        let (code, out, _) = call(&["norm", "--n", "1", "--p", "2", "--decimal", "10"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1.4142135624\n");
    }

    #[test]
    fn usage_errors_exit_2() {
        for args in [
            &["fn"][..],
            &["fn", "--n", "x"],
            &["eval", "--n", "1", "--x", "1/0"],
            &["pascal", "--rows", "0"],
            &["verify", "--suite", "bogus"],
            &["verify", "--suite", "all", "--out", "r.txt"],
            &["norm", "--n", "1", "--p", "1/2"],
            &["frobnicate"],
        ] {
            let (code, out, err) = call(args);
            assert_eq!(code, EXIT_USAGE, "{args:?}");
            assert!(out.is_empty());
            assert!(err.contains("error"), "{args:?}: {err}");
        }
    }

    #[test]
    fn injected_fault_exits_1() {
        let (code, out, _) = call(&[
            "verify",
            "--suite",
            "vandermonde",
            "--max-n",
            "2",
            "--inject-fault",
        ]);
        assert_eq!(code, EXIT_VERIFY_FAILED);
        assert!(
            out.starts_with("FAIL vandermonde vandermonde m=1 n=1 r=1: 3 = 2\n"),
            "{out}"
        );
    }
}
