//! Numerics for the two-sided Kolmogorov limiting distribution.
//!
//! The distribution of `sqrt(n) * D_n` (the scaled supremum distance between
//! an empirical CDF and its target) converges to a limit with survival
//! function
//!
//! ```text
//! K(x) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2)
//! ```
//!
//! and an equivalent theta-function form of the CDF that converges quickly
//! where the sum above needs hundreds of cancelling terms:
//!
//! ```text
//! L(x) = 1 - K(x) = sqrt(2 pi) / x * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
//! ```
//!
//! This crate evaluates SF/CDF/PDF with a bounded number of terms on either
//! side of a fixed cutoff ([`dist`]), inverts the distribution with bracketed
//! Newton-Raphson ([`quantile`]), reimplements the legacy single-series
//! evaluator and its unbracketed inversion for comparison ([`baseline`]),
//! provides one-sided Smirnov statistics and ECDF distances ([`smirnov`]),
//! carries an extended-precision reference implementation used as ground
//! truth in tests ([`oracle`]), and reproduces term-count/iteration-count
//! sweep tables contrasting the two engines ([`bench`]).
//!
//! Start with [`kolmogorov_triple`] and [`kolmogi`]:
//!
//! ```
//! use ksdist::{kolmogorov_triple, kolmogi, ProbPair};
//!
//! let t = kolmogorov_triple(1.0).unwrap();
//! assert!((t.sf + t.cdf - 1.0).abs() < 1e-15);
//!
//! let pair = ProbPair::new(t.sf, t.cdf).unwrap();
//! let (x, report) = kolmogi(pair);
//! assert!(report.converged);
//! assert!((x - 1.0).abs() < 1e-10);
//! ```

pub mod baseline;
pub mod bench;
pub mod cli;
mod dd;
pub mod dist;
pub mod oracle;
pub mod quantile;
pub mod smirnov;

pub use baseline::{baseline_isf, baseline_sf, BaselineResult};
pub use dist::{
    eval_large_x, eval_small_x, kolmogorov_triple, kolmogorov_triple_eps, Branch, DistTriple,
};
pub use quantile::{kolmogi, kolmogi_with, Bracket, NRReport, ProbPair};
pub use smirnov::{ecdf_statistics, maag_dicaire_sf, smirnov_sf_exact, smirnov_sf_limit, EcdfStats};

use std::fmt;

/// Errors reported by the numeric entry points.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside a function's numeric domain.
    Domain {
        /// Which requirement was violated.
        what: &'static str,
        /// The offending value.
        got: f64,
    },
    /// A survival/cumulative pair failed the complementarity check.
    InvalidPair { p_sf: f64, p_cdf: f64 },
    /// A data value could not be parsed or was out of range, with its
    /// 1-based line number.
    BadLine { line: usize, content: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, got } => write!(f, "domain error: {what} (got {got})"),
            Error::InvalidPair { p_sf, p_cdf } => write!(
                f,
                "invalid probability pair: p_sf = {p_sf}, p_cdf = {p_cdf} are not complementary"
            ),
            Error::BadLine { line, content } => {
                write!(f, "line {line}: cannot parse {content:?} as a probability in [0,1]")
            }
        }
    }
}

impl std::error::Error for Error {}
