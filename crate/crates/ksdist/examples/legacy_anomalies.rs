//! Reproduce the failure modes of the naive forward-summation engine.
//!
//! The baseline evaluator sums the alternating series term by term and
//! inverts with unguarded Newton from a fixed start. Four defects
//! follow, each shown here next to the corrected engine's answer.

use ksdist::{baseline_isf, baseline_sf, kolmogi, kolmogorov_triple, ProbPair};

fn main() {
    // 1. Probabilities above 1: near the origin the terms grow before
    // they alternate down, and the forward sum overshoots.
    let b = baseline_sf(0.01);
    let c = kolmogorov_triple(0.01).unwrap();
    println!("sf(0.01): baseline {:.17} vs corrected {:e}", b.value, c.sf);
    println!("  overshoot above 1 by {:e}", b.value - 1.0);

    // 2. Non-monotone output: a survival function must fall, but the
    // baseline wobbles at adjacent points near the mass of the law.
    let mut rises = 0u32;
    let mut prev = baseline_sf(0.009).value;
    for i in 10..=4000 {
        let x = f64::from(i) * 1e-3;
        let cur = baseline_sf(x).value;
        if cur > prev {
            rises += 1;
        }
        prev = cur;
    }
    println!("\nrising adjacent sf pairs on a 1e-3 grid: {rises}");

    // 3. Inversion floor: the fixed Newton start cannot travel below
    // about 0.33, so left-tail quantiles silently saturate.
    let b = baseline_isf(1.0 - 1e-10);
    let pair = ProbPair::from_sf(1.0 - 1e-10).unwrap();
    let (x, _) = kolmogi(pair);
    println!("\nisf(1 - 1e-10): baseline {:.6} vs corrected {x:.6}", b.value);

    // 4. Iteration blowup: without a bracket, Newton oscillates for
    // hundreds of rounds where the corrected solver needs a handful.
    let b = baseline_isf(0.999);
    let (x, report) = kolmogi(ProbPair::from_sf(0.999).unwrap());
    println!(
        "\nisf(0.999): baseline {} iterations (cap hit: {}), corrected {} -> x = {x:.12}",
        b.terms_or_iters, b.hit_cap, report.iterations
    );
}
