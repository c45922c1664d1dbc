//! Audit the double-precision engine against the slow reference.
//!
//! The oracle evaluates both series formulations in arbitrary
//! precision, so it certifies the fast path instead of sharing its
//! failure modes. Sixty digits keeps each call well under a second.

use ksdist::oracle::Oracle;
use ksdist::{kolmogi, kolmogorov_triple, ProbPair};

fn main() {
    let mut oracle = Oracle::new(60);

    println!("reference values at x = 1:");
    println!("  cdf = {}", oracle.cdf(1.0).to_decimal_string());
    println!("  sf  = {}", oracle.sf(1.0).to_decimal_string());

    // The two series formulations agree to working precision, which
    // certifies them independently of the double-precision code.
    let residual = oracle.series_agreement(1.0).to_f64();
    println!("  |1 - cdf - sf| across formulations = {residual:e}");

    println!("\nrelative error of the fast engine:");
    println!("{:>6}  {:>12}  {:>12}  {:>12}", "x", "sf", "cdf", "pdf");
    for x in [0.1, 0.5, 0.82, 0.83, 1.0, 2.0, 4.0] {
        let t = kolmogorov_triple(x).unwrap();
        let e_sf = oracle.sf(x).rel_err_of(t.sf);
        let e_cdf = oracle.cdf(x).rel_err_of(t.cdf);
        let e_pdf = oracle.pdf(x).rel_err_of(t.pdf);
        println!("{x:>6}  {e_sf:>12.2e}  {e_cdf:>12.2e}  {e_pdf:>12.2e}");
    }

    // Quantiles audit the same way, through the oracle's bisection root.
    let p = 1e-6;
    let (x, _) = kolmogi(ProbPair::from_sf(p).unwrap());
    let err = oracle.quantile_sf(p).rel_err_of(x);
    println!("\nisf({p:e}) = {x:.15}, rel err {err:.2e}");
}
