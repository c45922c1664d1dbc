//! Grid sweeps measuring per-point evaluation cost and accuracy for
//! both engines, summarized the way the comparison tables expect:
//! moments over the points that finish within the loop cap, plus
//! failure and tolerance-exceedance rates over the whole grid.

use crate::baseline::{baseline_isf, baseline_sf};
use crate::dist::kolmogorov_triple;
use crate::oracle::Oracle;
use crate::quantile::{kolmogi, ProbPair};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::fmt;

/// Which implementation a sweep exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Improved,
    Baseline,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Improved => "improved",
            Engine::Baseline => "baseline",
        })
    }
}

/// What the per-point cost counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Terms,
    Iterations,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Terms => "terms",
            Metric::Iterations => "iterations",
        })
    }
}

/// Inclusive arithmetic grid start, start+step, ..., stop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

/// One sweep's outcome.
///
/// `mean`, `std` and `max` are computed over the grid points that did
/// not hit the 500-step cap; capped points surface only through
/// `failure_rate` and, when their value misses the oracle, through
/// `tolerance_exceed_rate`. Both rates are fractions of the whole grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSummary {
    pub engine: Engine,
    pub metric: Metric,
    pub mean: f64,
    pub std: f64,
    pub max: u32,
    pub failure_rate: f64,
    pub tolerance_exceed_rate: f64,
    pub grid_spec: GridSpec,
}

/// Header matching [`SweepSummary::csv_row`].
pub const CSV_HEADER: &str = "engine,metric,mean,std,max,failure_rate,tol_rate";

impl SweepSummary {
    /// Comma-separated row under [`CSV_HEADER`], deterministic for
    /// identical inputs.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.engine,
            self.metric,
            self.mean,
            self.std,
            self.max,
            self.failure_rate,
            self.tolerance_exceed_rate
        )
    }
}

/// Aligned text table over any set of sweep rows.
pub fn text_table(rows: &[SweepSummary]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:<11} {:>8} {:>8} {:>5} {:>9} {:>9}\n",
        "engine", "metric", "mean", "std", "max", "failure", "exceed"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<10} {:<11} {:>8.3} {:>8.3} {:>5} {:>8.2}% {:>8.2}%\n",
            r.engine.to_string(),
            r.metric.to_string(),
            r.mean,
            r.std,
            r.max,
            100.0 * r.failure_rate,
            100.0 * r.tolerance_exceed_rate
        ));
    }
    out
}

/// The survival/distribution sweep grid: x = 0, 0.001, ..., 1.7.
pub fn sf_grid() -> GridSpec {
    GridSpec { start: 0.0, step: 0.001, stop: 1.7 }
}

/// The quantile sweep grid: p = 0, 0.001, ..., 1.
pub fn isf_grid() -> GridSpec {
    GridSpec { start: 0.0, step: 0.001, stop: 1.0 }
}

fn grid_len(grid: &GridSpec) -> usize {
    assert!(
        grid.step > 0.0 && grid.stop >= grid.start,
        "grid must ascend: {grid:?}"
    );
    ((grid.stop - grid.start) / grid.step).round() as usize + 1
}

#[derive(Clone, Copy)]
struct PointRecord {
    cost: u32,
    capped: bool,
    failed: bool,
    exceeded: bool,
}

/// Relative-error audit of whichever side is smaller; when the
/// oracle's small side has left f64 range entirely the large side
/// carries all the representable information instead.
fn sf_exceeds(o: &mut Oracle, x: f64, sf: f64, cdf: f64, tol: f64) -> bool {
    let small_is_sf = sf <= cdf;
    let (approx, big) = if small_is_sf { (sf, o.sf(x)) } else { (cdf, o.cdf(x)) };
    if big.to_f64().abs() >= 1e-300 {
        return big.rel_err_of(approx) > tol;
    }
    let (approx, big) = if small_is_sf { (cdf, o.cdf(x)) } else { (sf, o.sf(x)) };
    big.rel_err_of(approx) > tol
}

/// The inverted point passes when the true root provably lies within
/// `tol` relative: sf(x(1-tol)) >= p_sf >= sf(x(1+tol)).
fn quantile_exceeds(o: &mut Oracle, x: f64, p_sf: f64, tol: f64) -> bool {
    if !x.is_finite() || x <= 0.0 {
        return true;
    }
    let lo = x * (1.0 - tol);
    let hi = x * (1.0 + tol);
    o.sf_cmp(lo, p_sf) == Ordering::Less || o.sf_cmp(hi, p_sf) == Ordering::Greater
}

fn sf_point(engine: Engine, o: &mut Oracle, x: f64, tol: f64) -> PointRecord {
    match engine {
        Engine::Improved => {
            let t = kolmogorov_triple(x).expect("grid points are finite");
            let exceeded = x > 0.0 && sf_exceeds(o, x, t.sf, t.cdf, tol);
            PointRecord { cost: t.terms, capped: false, failed: false, exceeded }
        }
        Engine::Baseline => {
            let r = baseline_sf(x);
            let exceeded = x > 0.0 && o.sf(x).rel_err_of(r.value) > tol;
            PointRecord {
                cost: r.terms_or_iters,
                capped: r.hit_cap,
                failed: r.hit_cap,
                exceeded,
            }
        }
    }
}

fn isf_point(engine: Engine, o: &mut Oracle, p_sf: f64, tol: f64) -> PointRecord {
    // Boundary probabilities resolve by special cases at zero cost.
    if p_sf == 0.0 || p_sf == 1.0 {
        return PointRecord { cost: 0, capped: false, failed: false, exceeded: false };
    }
    match engine {
        Engine::Improved => {
            let pair = ProbPair::from_sf(p_sf).expect("grid probabilities are valid");
            let (x, rep) = kolmogi(pair);
            PointRecord {
                cost: rep.iterations,
                capped: false,
                failed: !rep.converged,
                exceeded: quantile_exceeds(o, x, p_sf, tol),
            }
        }
        Engine::Baseline => {
            let r = baseline_isf(p_sf);
            PointRecord {
                cost: r.terms_or_iters,
                capped: r.hit_cap,
                failed: r.hit_cap,
                exceeded: quantile_exceeds(o, r.value, p_sf, tol),
            }
        }
    }
}

fn summarize(
    engine: Engine,
    metric: Metric,
    grid: GridSpec,
    records: &[PointRecord],
) -> SweepSummary {
    let total = records.len() as f64;
    let mut sum: u64 = 0;
    let mut sumsq: u128 = 0;
    let mut live: u64 = 0;
    let mut max: u32 = 0;
    let mut failures: u64 = 0;
    let mut exceeds: u64 = 0;
    for r in records {
        if r.failed {
            failures += 1;
        }
        if r.exceeded {
            exceeds += 1;
        }
        if r.capped {
            continue;
        }
        sum += r.cost as u64;
        sumsq += (r.cost as u128) * (r.cost as u128);
        if r.cost > max {
            max = r.cost;
        }
        live += 1;
    }
    let (mean, std) = if live == 0 {
        (0.0, 0.0)
    } else {
        let m = sum as f64 / live as f64;
        let var = sumsq as f64 / live as f64 - m * m;
        (m, var.max(0.0).sqrt())
    };
    SweepSummary {
        engine,
        metric,
        mean,
        std,
        max,
        failure_rate: failures as f64 / total,
        tolerance_exceed_rate: exceeds as f64 / total,
        grid_spec: grid,
    }
}

/// Sweep of distribution evaluation cost over an x grid, auditing each
/// point against an oracle at `digits` working digits.
pub fn sweep_sf(engine: Engine, grid: GridSpec, rel_tol_audit: f64, digits: u32) -> SweepSummary {
    let n = grid_len(&grid);
    let records: Vec<PointRecord> = (0..n)
        .into_par_iter()
        .map_init(
            || Oracle::new(digits),
            |o, i| sf_point(engine, o, grid.start + i as f64 * grid.step, rel_tol_audit),
        )
        .collect();
    summarize(engine, Metric::Terms, grid, &records)
}

/// Sweep of quantile inversion cost over a survival-probability grid,
/// auditing each returned root against an oracle.
pub fn sweep_isf(engine: Engine, grid: GridSpec, rel_tol_audit: f64, digits: u32) -> SweepSummary {
    let n = grid_len(&grid);
    let records: Vec<PointRecord> = (0..n)
        .into_par_iter()
        .map_init(
            || Oracle::new(digits),
            |o, i| isf_point(engine, o, grid.start + i as f64 * grid.step, rel_tol_audit),
        )
        .collect();
    summarize(engine, Metric::Iterations, grid, &records)
}
