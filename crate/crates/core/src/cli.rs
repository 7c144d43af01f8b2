//! The `binodiv` command line front end.
//!
//! Every subcommand writes either CSV (with a header line) or JSON to the
//! output; exact rationals print as `p/q`, floats with 15 significant digits.
//! Exit codes: 0 success, 1 guard violation, 2 bad flags, 3 generating
//! function discrepancies.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::format::{float, rational};
use crate::gf::{moments_direct, verify_gf_identities_with, MAX_TRIVARIATE_LAMBDA};
use crate::rows::{howard_check, mu_n, row, row_bruteforce};
use crate::stats::{
    clt_scan, lemma_ratio_checks, prefix_scan, second_moment_scan, singmaster_average,
    CenteringRule, CltReport, LemmaRow, Normalization, ScanMode, SecondMomentConfig,
    SecondMomentReport, UPoint,
};
use crate::valuation::{lucas_residue, nu_binomial};

pub const EXIT_GUARD: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISCREPANCY: i32 = 3;

/// Environment override for the worker cap.
pub const THREADS_ENV: &str = "BINODIV_THREADS";
/// Environment override for the directory holding relative `--output` paths.
pub const OUTPUT_DIR_ENV: &str = "BINODIV_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "binodiv", version, about = "Divisibility of binomial coefficients by prime powers")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RowMethod {
    Dp,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Full,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Centering {
    N,
    NPlusOne,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Row counts ϑ̃_p(k, n), or Howard's ratio / the mean valuation of row n.
    Row {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, value_enum, default_value_t = RowMethod::Dp)]
        method: RowMethod,
        /// Compare Howard's formula for this j with the row (p = 2).
        #[arg(long, conflicts_with = "mu")]
        howard: Option<u32>,
        /// Mean 2-adic valuation by both formulas.
        #[arg(long)]
        mu: bool,
    },
    /// ν_p(C(n, t)) and C(n, t) mod p.
    Valuation {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        #[arg(long)]
        p: u64,
    },
    /// Exact interval moments for one λ.
    Moments {
        #[arg(long)]
        lambda: u32,
        /// Dump a, b, c instead of the bivariate families.
        #[arg(long)]
        trivariate: bool,
    },
    /// Compare closed forms and recurrences with direct sums.
    GfVerify {
        #[arg(long, default_value_t = 8)]
        lambda_max: u32,
        /// Defaults to min(lambda-max, 8).
        #[arg(long)]
        trivariate_max: Option<u32>,
    },
    /// Rows whose normalized partial sums are ε-far from Φ.
    CltScan {
        #[arg(long)]
        lambda: u32,
        /// Scan every λ from --lambda to this value.
        #[arg(long)]
        lambda_max: Option<u32>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        /// Required in sample mode.
        #[arg(long)]
        seed: Option<u64>,
        /// Aggregate over [1, 2^Λ) for Λ up to --lambda instead.
        #[arg(long, conflicts_with_all = ["lambda_max", "mode"])]
        prefix: bool,
    },
    /// Exact second moments of Θ̃(λ+u, n) − v·n − w over I_λ.
    SecondMoment {
        #[command(flatten)]
        range: LambdaRange,
        #[command(flatten)]
        grid: UGrid,
        /// Constant v; otherwise v = Φ(u/√λ) + v-shift.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v_shift: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        w: f64,
        #[arg(long, value_enum, default_value_t = Centering::N)]
        centering: Centering,
    },
    /// Interval moments against their Gaussian approximations.
    LemmaRatios {
        #[command(flatten)]
        range: LambdaRange,
        #[command(flatten)]
        grid: UGrid,
    },
    /// (1/N) Σ_{n<N} Θ_p(j, n)/(n+1).
    Singmaster {
        /// N; repeatable.
        #[arg(long = "n", required_unless_present = "lambda")]
        n_total: Vec<u64>,
        /// N = 2^λ; repeatable.
        #[arg(long)]
        lambda: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        j: u32,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Print the exact average as p/q.
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Debug, Args)]
struct LambdaRange {
    #[arg(long)]
    lambda: u32,
    #[arg(long)]
    lambda_max: Option<u32>,
}

impl LambdaRange {
    fn values(&self) -> Vec<u32> {
        (self.lambda..=self.lambda_max.unwrap_or(self.lambda)).collect()
    }
}

#[derive(Debug, Args)]
struct UGrid {
    /// Offsets u: integers, or multiples of ⌊√λ⌋ written s, -s, 2s, ...
    #[arg(long = "u", value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    points: Vec<String>,
}

impl UGrid {
    fn parse(&self) -> Result<Vec<UPoint>, Error> {
        self.points.iter().map(|s| s.parse()).collect()
    }
}

enum Failure {
    Lib(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// What a command produced: its text, and whether it found discrepancies.
struct Output {
    text: String,
    discrepancies: bool,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Output {
            text,
            discrepancies: false,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code. Diagnostics go to standard error.
pub fn run<I, T, W>(argv: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                eprint!("{e}");
                EXIT_USAGE
            } else {
                // --help and --version
                let _ = write!(out, "{e}");
                0
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_GUARD
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::NotPrime(_)
                | Error::InvalidBase(_)
                | Error::InvalidArgument(_)
                | Error::BinomialIndex { .. } => EXIT_USAGE,
                _ => EXIT_GUARD,
            }
        }
    }
}

fn thread_cap(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn execute<W: Write>(cli: &Cli, out: &mut W) -> Result<i32, Failure> {
    let output = match thread_cap(cli.global.threads)? {
        Some(0) => return Err(Failure::Usage("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .install(|| dispatch(&cli.command, cli.global.format))?,
        None => dispatch(&cli.command, cli.global.format)?,
    };
    match &cli.global.output {
        Some(path) => {
            let path = match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            std::fs::write(path, &output.text)?;
        }
        None => out.write_all(output.text.as_bytes())?,
    }
    Ok(if output.discrepancies { EXIT_DISCREPANCY } else { 0 })
}

fn json_line<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report serializes");
    s.push('\n');
    s
}

fn table<T: Serialize>(format: Format, header: &str, rows: &[T], csv: impl Fn(&T) -> String) -> String {
    match format {
        Format::Json => json_line(rows),
        Format::Csv => {
            let mut s = format!("{header}\n");
            for r in rows {
                s.push_str(&csv(r));
                s.push('\n');
            }
            s
        }
    }
}

fn dispatch(command: &Command, format: Format) -> Result<Output, Failure> {
    let text = match command {
        Command::Row {
            n,
            p,
            method,
            howard,
            mu,
        } => {
            if let Some(j) = howard {
                if *p != 2 {
                    return Err(Failure::Usage("--howard needs --p 2".into()));
                }
                let (formula, ratio) = howard_check(*n, *j)?;
                let agree = formula == ratio;
                match format {
                    Format::Json => json_line(&json!({
                        "n": n, "j": j, "formula": rational(&formula),
                        "ratio": rational(&ratio), "agree": agree,
                    })),
                    Format::Csv => format!(
                        "n,j,formula,ratio,agree\n{n},{j},{},{},{agree}\n",
                        rational(&formula),
                        rational(&ratio)
                    ),
                }
            } else if *mu {
                if *p != 2 {
                    return Err(Failure::Usage("--mu needs --p 2".into()));
                }
                let m = mu_n(*n);
                match format {
                    Format::Json => json_line(&m),
                    Format::Csv => format!(
                        "n,from_counts,from_digit_sums,fluctuation\n{},{},{},{}\n",
                        m.n,
                        rational(&m.from_counts),
                        rational(&m.from_digit_sums),
                        float(m.fluctuation)
                    ),
                }
            } else {
                let r = match method {
                    RowMethod::Dp => row(*n, *p)?,
                    RowMethod::Brute => row_bruteforce(*n, *p)?,
                };
                match format {
                    Format::Json => r.to_json() + "\n",
                    Format::Csv => format!("n,k,count\n{}", r.to_csv_rows()),
                }
            }
        }
        Command::Valuation { n, t, p } => {
            let nu = nu_binomial(*n, *t, *p)?;
            let residue = lucas_residue(*n, *t, *p)?;
            match format {
                Format::Json => json_line(&json!({
                    "n": n, "t": t, "p": p, "nu": nu, "lucas_residue": residue,
                })),
                Format::Csv => format!("n,t,p,nu,lucas_residue\n{n},{t},{p},{nu},{residue}\n"),
            }
        }
        Command::Moments { lambda, trivariate } => moments_text(*lambda, *trivariate, format)?,
        Command::GfVerify {
            lambda_max,
            trivariate_max,
        } => {
            let tri = trivariate_max.unwrap_or((*lambda_max).min(8));
            let report = verify_gf_identities_with(*lambda_max, tri)?;
            eprintln!(
                "checked {} coefficients, {} discrepancies",
                report.checked,
                report.discrepancies.len()
            );
            let text = table(
                format,
                "family,lambda,k,l,expected,got",
                &report.discrepancies,
                |d| {
                    format!(
                        "{},{},{},{},{},{}",
                        d.family,
                        d.lambda,
                        d.k,
                        d.l.map(|l| l.to_string()).unwrap_or_default(),
                        rational(&d.expected),
                        rational(&d.got)
                    )
                },
            );
            return Ok(Output {
                text,
                discrepancies: !report.is_clean(),
            });
        }
        Command::CltScan {
            lambda,
            lambda_max,
            epsilon,
            mode,
            count,
            seed,
            prefix,
        } => {
            if *prefix {
                let rows = prefix_scan(*lambda, *epsilon)?;
                table(
                    format,
                    "lambda_total,epsilon,bad_count,fraction,fraction_sqrtlog",
                    &rows,
                    |r| {
                        format!(
                            "{},{},{},{},{}",
                            r.lambda_total,
                            float(r.epsilon),
                            r.bad_count,
                            rational(&r.fraction),
                            float(r.fraction_sqrtlog)
                        )
                    },
                )
            } else {
                let mode = match (mode, seed) {
                    (Mode::Full, _) => ScanMode::Full,
                    (Mode::Sample, Some(seed)) => ScanMode::Sample {
                        count: *count,
                        seed: *seed,
                    },
                    (Mode::Sample, None) => {
                        return Err(Failure::Usage("--mode sample requires --seed".into()))
                    }
                };
                let reports = (*lambda..=lambda_max.unwrap_or(*lambda))
                    .map(|l| clt_scan(l, *epsilon, mode))
                    .collect::<Result<Vec<_>, _>>()?;
                table(format, CltReport::CSV_HEADER, &reports, CltReport::to_csv_row)
            }
        }
        Command::SecondMoment {
            range,
            grid,
            v,
            v_shift,
            w,
            centering,
        } => {
            let points = grid.parse()?;
            let config = SecondMomentConfig {
                v: match v {
                    Some(c) => CenteringRule::Constant(*c),
                    None => CenteringRule::Phi { shift: *v_shift },
                },
                w: *w,
                centering: match centering {
                    Centering::N => Normalization::N,
                    Centering::NPlusOne => Normalization::NPlusOne,
                },
            };
            let mut reports = Vec::new();
            for lambda in range.values() {
                let us: Vec<i64> = points.iter().map(|p| p.resolve(lambda)).collect();
                reports.extend(second_moment_scan(lambda, &us, &config)?);
            }
            table(
                format,
                SecondMomentReport::CSV_HEADER,
                &reports,
                SecondMomentReport::to_csv_row,
            )
        }
        Command::LemmaRatios { range, grid } => {
            let t = lemma_ratio_checks(&range.values(), &grid.parse()?)?;
            for s in &t.slopes {
                eprintln!("slope {} u={} {}", s.family, s.u_point, float(s.slope));
            }
            match format {
                Format::Json => json_line(&t),
                Format::Csv => table(format, LemmaRow::CSV_HEADER, &t.rows, LemmaRow::to_csv_row),
            }
        }
        Command::Singmaster {
            n_total,
            lambda,
            j,
            p,
            exact,
        } => {
            let mut totals = n_total.clone();
            for &l in lambda {
                if l >= 64 {
                    return Err(Failure::Lib(Error::Guard {
                        what: "lambda",
                        value: u64::from(l),
                        limit: 63,
                    }));
                }
                totals.push(1 << l);
            }
            let mut rows = Vec::new();
            for n in totals {
                let avg = singmaster_average(n, *j, *p)?;
                let value = if *exact {
                    json!(rational(&avg))
                } else {
                    json!(to_f64(&avg))
                };
                rows.push(json!({"n": n, "j": j, "p": p, "average": value}));
            }
            table(format, "n,j,p,average", &rows, |r| {
                let avg = match &r["average"] {
                    serde_json::Value::String(s) => s.clone(),
                    v => float(v.as_f64().unwrap_or(f64::NAN)),
                };
                format!("{},{},{},{avg}", r["n"], r["j"], r["p"])
            })
        }
    };
    Ok(text.into())
}

fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn moments_text(lambda: u32, trivariate: bool, format: Format) -> Result<String, Failure> {
    if trivariate && lambda > MAX_TRIVARIATE_LAMBDA {
        return Err(Failure::Lib(Error::Guard {
            what: "lambda",
            value: u64::from(lambda),
            limit: u64::from(MAX_TRIVARIATE_LAMBDA),
        }));
    }
    let t = moments_direct(lambda)?;
    let mut rows = Vec::new();
    if let Some(abc) = t.trivariate.as_ref().filter(|_| trivariate) {
        let cell = |m: &[Vec<BigInt>], k: usize, l: usize| m[k][l].to_string();
        for k in 0..=t.k_max as usize {
            for l in 0..=t.k_max as usize {
                rows.push(vec![
                    lambda.to_string(),
                    k.to_string(),
                    l.to_string(),
                    cell(&abc.a, k, l),
                    cell(&abc.b, k, l),
                    cell(&abc.c, k, l),
                ]);
            }
        }
        return Ok(keyed(format, &["lambda", "k", "l", "a", "b", "c"], 3, &rows));
    }
    for k in 0..=t.k_max as usize {
        let mut row = vec![lambda.to_string(), k.to_string()];
        for family in [&t.m, &t.frak_m, &t.m_prime, &t.frak_m_prime, &t.m2, &t.frak_m2] {
            row.push(rational(&family[k]));
        }
        rows.push(row);
    }
    Ok(keyed(
        format,
        &["lambda", "k", "m", "frak_m", "m_prime", "frak_m_prime", "m2", "frak_m2"],
        2,
        &rows,
    ))
}

/// Rows of preformatted cells as CSV, or as JSON objects whose first
/// `index_cols` columns are numbers and the rest strings.
fn keyed(format: Format, header: &[&str], index_cols: usize, rows: &[Vec<String>]) -> String {
    match format {
        Format::Csv => {
            let mut s = header.join(",");
            s.push('\n');
            for r in rows {
                let _ = writeln!(s, "{}", r.join(","));
            }
            s
        }
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .zip(r)
                        .enumerate()
                        .map(|(i, (h, v))| {
                            let value = match v.parse::<u64>() {
                                Ok(x) if i < index_cols => json!(x),
                                _ => json!(v),
                            };
                            (h.to_string(), value)
                        })
                        .collect()
                })
                .collect();
            json_line(&objects)
        }
    }
}
