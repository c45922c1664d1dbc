//! Command-line front end: distribution evaluation, quantile
//! inversion, one-sided statistics, a goodness-of-fit test over
//! probability-integral-transformed samples, critical-value tables,
//! benchmark sweeps, and raw high-precision evaluation.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric domain error,
//! 3 non-convergence reported by inversion.

use crate::baseline::{baseline_isf, baseline_sf};
use crate::bench;
use crate::dist::kolmogorov_triple;
use crate::oracle::Oracle;
use crate::quantile::{kolmogi, ProbPair};
use crate::smirnov::{ecdf_statistics, maag_dicaire_sf, smirnov_sf_exact, smirnov_sf_limit};
use crate::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "ksdist",
    version,
    about = "Kolmogorov-Smirnov limit distribution toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Significant decimal digits for printed floating-point values
    #[arg(long, global = true, default_value_t = 17,
          value_parser = clap::value_parser!(u32).range(1..=100))]
    precision: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the limit distribution at points x
    #[command(allow_negative_numbers = true)]
    Eval {
        /// Implementation to evaluate with
        #[arg(long, value_enum, default_value = "improved")]
        engine: EngineArg,
        /// Points to evaluate
        #[arg(required = true)]
        x: Vec<f64>,
    },
    /// Invert survival or distribution probabilities to points
    Invert {
        /// Implementation to invert with
        #[arg(long, value_enum, default_value = "improved")]
        engine: EngineArg,
        /// Survival probability to invert (repeatable)
        #[arg(long = "sf", value_name = "P")]
        sf: Vec<f64>,
        /// Distribution probability to invert (repeatable)
        #[arg(long = "cdf", value_name = "P")]
        cdf: Vec<f64>,
    },
    /// One-sided finite-sample tail probabilities P(D_n+ >= x)
    Smirnov {
        /// Sample size
        #[arg(long)]
        n: u32,
        /// One-sided statistics to evaluate
        #[arg(required = true)]
        x: Vec<f64>,
    },
    /// Goodness-of-fit test on a file of PIT values
    Kstest {
        /// UTF-8 file, one decimal in [0, 1] per line, '#' comments allowed
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        /// Use this sample size for p-values instead of the line count
        #[arg(long = "n-override", value_name = "N",
              value_parser = clap::value_parser!(u64).range(1..))]
        n_override: Option<u64>,
    },
    /// Critical values c with P(D_n >= c) ~ alpha
    Table {
        /// Significance levels (repeatable or comma-separated)
        #[arg(long = "alpha", value_delimiter = ',',
              default_values_t = [0.1, 0.05, 0.01, 0.001])]
        alpha: Vec<f64>,
        /// Sample sizes (repeatable or comma-separated)
        #[arg(long = "n", value_delimiter = ',', required = true,
              value_parser = clap::value_parser!(u64).range(1..))]
        n: Vec<u64>,
    },
    /// Reproduce the cost/accuracy sweep tables
    Bench {
        /// Which sweeps to run
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Which implementations to sweep
        #[arg(long, value_enum, default_value = "both")]
        engine: BenchEngineArg,
        /// Working digits of the auditing evaluator
        #[arg(long, default_value_t = 60,
              value_parser = clap::value_parser!(u32).range(50..=1000))]
        digits: u32,
    },
    /// High-precision reference values as decimal strings
    #[command(allow_negative_numbers = true)]
    OracleEval {
        /// Working decimal digits
        #[arg(long, default_value_t = 200,
              value_parser = clap::value_parser!(u32).range(50..=1000))]
        digits: u32,
        /// Points to evaluate
        #[arg(required = true)]
        x: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Improved,
    Baseline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Sf,
    Isf,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BenchEngineArg {
    Improved,
    Baseline,
    Both,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

enum Cell {
    Int(u64),
    Num(f64),
    Str(String),
}

struct Table {
    note: Option<String>,
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

fn fmt_num(v: f64, precision: u32) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.*e}", precision as usize - 1, v)
    }
}

fn fmt_cell(cell: &Cell, precision: u32) -> String {
    match cell {
        Cell::Int(i) => i.to_string(),
        Cell::Num(v) => fmt_num(*v, precision),
        Cell::Str(s) => s.clone(),
    }
}

fn json_cell(cell: &Cell) -> Value {
    match cell {
        Cell::Int(i) => json!(i),
        // Non-finite values have no JSON number form and become null.
        Cell::Num(v) => Value::from(*v),
        Cell::Str(s) => json!(s),
    }
}

fn render(table: &Table, format: Format, precision: u32) -> String {
    match format {
        Format::Text => {
            let cells: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(|c| fmt_cell(c, precision)).collect())
                .collect();
            let widths: Vec<usize> = table
                .columns
                .iter()
                .enumerate()
                .map(|(j, h)| {
                    cells
                        .iter()
                        .map(|r| r[j].len())
                        .chain(std::iter::once(h.len()))
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let mut out = String::new();
            if let Some(note) = &table.note {
                out.push_str("# ");
                out.push_str(note);
                out.push('\n');
            }
            let header: Vec<String> = table
                .columns
                .iter()
                .zip(&widths)
                .map(|(h, w)| format!("{h:>w$}"))
                .collect();
            out.push_str(&header.join("  "));
            out.push('\n');
            for row in &cells {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                out.push_str(&line.join("  "));
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            let mut out = String::new();
            if let Some(note) = &table.note {
                out.push_str("# ");
                out.push_str(note);
                out.push('\n');
            }
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let line: Vec<String> = row.iter().map(|c| fmt_cell(c, precision)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (name, cell) in table.columns.iter().zip(row) {
                        obj.insert((*name).to_string(), json_cell(cell));
                    }
                    Value::Object(obj)
                })
                .collect();
            let v = match &table.note {
                Some(note) => json!({ "note": note, "rows": rows }),
                None => json!({ "rows": rows }),
            };
            let mut out = serde_json::to_string(&v).expect("plain values serialize");
            out.push('\n');
            out
        }
    }
}

fn cmd_eval(
    engine: EngineArg,
    xs: &[f64],
    format: Format,
    precision: u32,
) -> Result<i32, Failure> {
    let mut rows = Vec::new();
    for &x in xs {
        if !x.is_finite() {
            return Err(Error::Domain { what: "evaluation point", got: x }.into());
        }
        match engine {
            EngineArg::Improved => {
                let t = kolmogorov_triple(x).map_err(Failure::from)?;
                rows.push(vec![
                    Cell::Num(x),
                    Cell::Num(t.sf),
                    Cell::Num(t.cdf),
                    Cell::Num(t.pdf),
                    Cell::Int(u64::from(t.terms)),
                ]);
            }
            EngineArg::Baseline => {
                let r = baseline_sf(x);
                rows.push(vec![
                    Cell::Num(x),
                    Cell::Num(r.value),
                    Cell::Num(1.0 - r.value),
                    Cell::Num(f64::NAN),
                    Cell::Int(u64::from(r.terms_or_iters)),
                ]);
            }
        }
    }
    let table = Table { note: None, columns: &["x", "sf", "cdf", "pdf", "terms"], rows };
    print!("{}", render(&table, format, precision));
    Ok(0)
}

fn cmd_invert(
    engine: EngineArg,
    sf: &[f64],
    cdf: &[f64],
    format: Format,
    precision: u32,
) -> Result<i32, Failure> {
    if sf.is_empty() && cdf.is_empty() {
        return Err(usage("invert needs at least one --sf or --cdf probability"));
    }
    let mut rows = Vec::new();
    let mut stuck = false;
    for (values, side_is_sf) in [(sf, true), (cdf, false)] {
        for &p in values {
            let (x, iterations, converged) = match engine {
                EngineArg::Improved => {
                    let pair = if side_is_sf {
                        ProbPair::from_sf(p)
                    } else {
                        ProbPair::from_cdf(p)
                    }
                    .map_err(Failure::from)?;
                    let (x, report) = kolmogi(pair);
                    (x, report.iterations, report.converged)
                }
                EngineArg::Baseline => {
                    let p_sf = if side_is_sf { p } else { 1.0 - p };
                    if !(p_sf > 0.0 && p_sf < 1.0) {
                        return Err(Error::Domain {
                            what: "legacy inversion probability",
                            got: p,
                        }
                        .into());
                    }
                    let r = baseline_isf(p_sf);
                    (r.value, r.terms_or_iters, !r.hit_cap)
                }
            };
            stuck |= !converged;
            rows.push(vec![Cell::Num(p), Cell::Num(x), Cell::Int(u64::from(iterations))]);
        }
    }
    let table = Table { note: None, columns: &["p", "x", "iterations"], rows };
    print!("{}", render(&table, format, precision));
    Ok(if stuck { 3 } else { 0 })
}

fn cmd_smirnov(n: u32, xs: &[f64], format: Format, precision: u32) -> Result<i32, Failure> {
    let mut rows = Vec::new();
    for &x in xs {
        let exact = smirnov_sf_exact(n, x).map_err(Failure::from)?;
        let limit = smirnov_sf_limit((f64::from(n)).sqrt() * x);
        let maag = maag_dicaire_sf(n, x);
        rows.push(vec![
            Cell::Int(u64::from(n)),
            Cell::Num(x),
            Cell::Num(exact),
            Cell::Num(limit),
            Cell::Num(maag),
        ]);
    }
    let table = Table {
        note: None,
        columns: &["n", "x", "sf_exact", "sf_limit", "sf_maag"],
        rows,
    };
    print!("{}", render(&table, format, precision));
    Ok(0)
}

fn cmd_kstest(
    data: &PathBuf,
    n_override: Option<u64>,
    format: Format,
    precision: u32,
) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(data)
        .map_err(|e| usage(format!("cannot read {}: {e}", data.display())))?;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match body.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) => {
                return Err(Error::BadLine {
                    line: idx + 1,
                    content: raw.trim().to_string(),
                }
                .into())
            }
        }
    }
    let stats = ecdf_statistics(&values).map_err(Failure::from)?;
    let n_eff = n_override.unwrap_or(stats.n as u64);
    let n32 = u32::try_from(n_eff)
        .map_err(|_| Error::Domain { what: "sample size", got: n_eff as f64 })?;
    let scaled = (n_eff as f64).sqrt() * stats.d;
    let p_two = kolmogorov_triple(scaled).map_err(Failure::from)?.sf;
    let p_exact = smirnov_sf_exact(n32, stats.d_plus).map_err(Failure::from)?;
    let p_maag = maag_dicaire_sf(n32, stats.d_plus);
    let table = Table {
        note: Some(
            "inputs are PIT values: each line is the null CDF evaluated at one \
             observation, so valid data lie in [0, 1]"
                .to_string(),
        ),
        columns: &[
            "n",
            "d",
            "d_plus",
            "d_minus",
            "p_two_sided_asymptotic",
            "p_one_sided_exact",
            "p_one_sided_maag",
        ],
        rows: vec![vec![
            Cell::Int(n_eff),
            Cell::Num(stats.d),
            Cell::Num(stats.d_plus),
            Cell::Num(stats.d_minus),
            Cell::Num(p_two),
            Cell::Num(p_exact),
            Cell::Num(p_maag),
        ]],
    };
    print!("{}", render(&table, format, precision));
    Ok(0)
}

fn cmd_table(
    alphas: &[f64],
    ns: &[u64],
    format: Format,
    precision: u32,
) -> Result<i32, Failure> {
    let mut rows = Vec::new();
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain { what: "significance level", got: alpha }.into());
        }
        let pair = ProbPair::from_sf(alpha).map_err(Failure::from)?;
        let (x0, _) = kolmogi(pair);
        for &n in ns {
            rows.push(vec![
                Cell::Num(alpha),
                Cell::Int(n),
                Cell::Num(x0 / (n as f64).sqrt()),
            ]);
        }
    }
    let table = Table {
        note: Some(
            "asymptotic critical values c = Q(alpha)/sqrt(n); the finite-n \
             rejection rate approaches alpha as n grows"
                .to_string(),
        ),
        columns: &["alpha", "n", "c"],
        rows,
    };
    print!("{}", render(&table, format, precision));
    Ok(0)
}

fn cmd_bench(suite: SuiteArg, engine: BenchEngineArg, digits: u32, format: Format) -> i32 {
    let engines: Vec<bench::Engine> = match engine {
        BenchEngineArg::Improved => vec![bench::Engine::Improved],
        BenchEngineArg::Baseline => vec![bench::Engine::Baseline],
        BenchEngineArg::Both => vec![bench::Engine::Improved, bench::Engine::Baseline],
    };
    let mut rows = Vec::new();
    if matches!(suite, SuiteArg::Sf | SuiteArg::All) {
        for &e in &engines {
            rows.push(bench::sweep_sf(e, bench::sf_grid(), 1e-9, digits));
        }
    }
    if matches!(suite, SuiteArg::Isf | SuiteArg::All) {
        for &e in &engines {
            rows.push(bench::sweep_isf(e, bench::isf_grid(), 1e-9, digits));
        }
    }
    match format {
        Format::Text => print!("{}", bench::text_table(&rows)),
        Format::Csv => {
            println!("{}", bench::CSV_HEADER);
            for r in &rows {
                println!("{}", r.csv_row());
            }
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "engine": r.engine.to_string(),
                        "metric": r.metric.to_string(),
                        "mean": r.mean,
                        "std": r.std,
                        "max": r.max,
                        "failure_rate": r.failure_rate,
                        "tol_rate": r.tolerance_exceed_rate,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string(&arr).expect("plain values serialize"));
        }
    }
    0
}

fn cmd_oracle_eval(
    digits: u32,
    xs: &[f64],
    format: Format,
    precision: u32,
) -> Result<i32, Failure> {
    let mut oracle = Oracle::new(digits);
    let mut rows = Vec::new();
    for &x in xs {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Domain { what: "evaluation point", got: x }.into());
        }
        rows.push(vec![
            Cell::Num(x),
            Cell::Str(oracle.sf(x).to_decimal_string()),
            Cell::Str(oracle.cdf(x).to_decimal_string()),
            Cell::Str(oracle.pdf(x).to_decimal_string()),
        ]);
    }
    let table = Table { note: None, columns: &["x", "sf", "cdf", "pdf"], rows };
    print!("{}", render(&table, format, precision));
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    let Cli { command, format, precision } = cli;
    match command {
        Command::Eval { engine, x } => cmd_eval(engine, &x, format, precision),
        Command::Invert { engine, sf, cdf } => cmd_invert(engine, &sf, &cdf, format, precision),
        Command::Smirnov { n, x } => cmd_smirnov(n, &x, format, precision),
        Command::Kstest { data, n_override } => cmd_kstest(&data, n_override, format, precision),
        Command::Table { alpha, n } => cmd_table(&alpha, &n, format, precision),
        Command::Bench { suite, engine, digits } => Ok(cmd_bench(suite, engine, digits, format)),
        Command::OracleEval { digits, x } => cmd_oracle_eval(digits, &x, format, precision),
    }
}

/// Parse `std::env::args`, run one command, and return the process
/// exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
