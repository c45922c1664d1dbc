//! Iteration and accuracy sweeps over the standard grids.
//!
//! Each sweep runs an engine across its grid, audits every point
//! against the arbitrary-precision reference, and reduces to mean,
//! spread, and worst case plus failure and tolerance-exceed rates.
//! Audits run at 60 digits; expect a few seconds per sweep.

use ksdist::bench::{isf_grid, sf_grid, sweep_isf, sweep_sf, text_table, Engine};

fn main() {
    let rel_tol = 1e-9;
    let digits = 60;

    let summaries = vec![
        sweep_sf(Engine::Improved, sf_grid(), rel_tol, digits),
        sweep_sf(Engine::Baseline, sf_grid(), rel_tol, digits),
        sweep_isf(Engine::Improved, isf_grid(), rel_tol, digits),
        sweep_isf(Engine::Baseline, isf_grid(), rel_tol, digits),
    ];
    print!("{}", text_table(&summaries));

    // The corrected engine's bounded budgets show up as a small max
    // with zero failures; the baseline's cap shows up as a large one.
    let improved = &summaries[2];
    let baseline = &summaries[3];
    println!(
        "\ninversion worst case: improved {} updates, baseline {}",
        improved.max, baseline.max
    );
}
