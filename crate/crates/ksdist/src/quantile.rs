//! Quantile inversion for the limiting distribution.
//!
//! The inverse is found by safeguarded Newton iteration on whichever
//! side of the distribution has the better-conditioned objective: the
//! survival function for p_sf at or below 1/2, the distribution
//! function otherwise. Each side pairs an analytic starting guess with
//! a bracket derived from one-term series bounds, so the solver needs
//! only two or three corrections almost everywhere and never leaves an
//! interval known to contain the root.

use crate::dist::kolmogorov_triple;
use crate::Error;
use std::f64::consts::{LN_2, PI};

/// ln sqrt(2 pi), correctly rounded.
const LN_SQRT_2PI: f64 = 0.9189385332046728;

/// Relative slack applied to bracket endpoints so that rounding in the
/// endpoint formulas cannot push the root outside.
const LOOSEN: f64 = 256.0 * f64::EPSILON;

/// A survival/distribution probability pair validated at construction.
///
/// Holding both sides exactly as the caller supplied them avoids the
/// cancellation that forming `1 - p` would cost in either tail, which
/// is what lets the inversion reach quantiles whose complement is far
/// below machine epsilon.
#[derive(Clone, Copy, Debug)]
pub struct ProbPair {
    p_sf: f64,
    p_cdf: f64,
}

impl ProbPair {
    /// Validates that both values are probabilities and complementary:
    /// they must sum to 1 within 1e-9, and a subnormal side pins the
    /// other to 1 within machine epsilon.
    pub fn new(p_sf: f64, p_cdf: f64) -> Result<Self, Error> {
        let in_range = |p: f64| (0.0..=1.0).contains(&p);
        if !in_range(p_sf) || !in_range(p_cdf) {
            return Err(Error::InvalidPair { p_sf, p_cdf });
        }
        let consistent = if p_sf < f64::MIN_POSITIVE {
            (p_cdf - 1.0).abs() <= f64::EPSILON
        } else if p_cdf < f64::MIN_POSITIVE {
            (p_sf - 1.0).abs() <= f64::EPSILON
        } else {
            (p_sf + p_cdf - 1.0).abs() <= 1e-9
        };
        if !consistent {
            return Err(Error::InvalidPair { p_sf, p_cdf });
        }
        Ok(ProbPair { p_sf, p_cdf })
    }

    /// Pair from the survival side, complementing the other.
    pub fn from_sf(p_sf: f64) -> Result<Self, Error> {
        Self::new(p_sf, 1.0 - p_sf)
    }

    /// Pair from the distribution side, complementing the other.
    pub fn from_cdf(p_cdf: f64) -> Result<Self, Error> {
        Self::new(1.0 - p_cdf, p_cdf)
    }

    pub fn p_sf(&self) -> f64 {
        self.p_sf
    }

    pub fn p_cdf(&self) -> f64 {
        self.p_cdf
    }
}

/// Interval bracketing a root, lo <= hi.
#[derive(Clone, Copy, Debug)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Convergence record for one root search.
#[derive(Clone, Copy, Debug)]
pub struct NRReport {
    /// Newton or bisection updates actually applied.
    pub iterations: u32,
    /// True when a stopping rule fired before the iteration cap.
    pub converged: bool,
    /// Objective magnitude at the last evaluated iterate. A residual
    /// the objective snapped to zero reads as exactly 0.
    pub residual: f64,
}

/// Bracket for the right-tail inversion, p_sf in (0, 0.5].
///
/// One-term bounds on the survival series: 2q(1 - e^-4) <= sf <= 2q
/// wherever the root of sf = p_sf can lie, inverted in log space so
/// subnormal probabilities keep full range. Endpoints are loosened by
/// a few hundred ulp to absorb their own rounding.
pub fn bracket_small_p(p_sf: f64) -> Bracket {
    assert!(
        p_sf > 0.0 && p_sf <= 0.5,
        "right-tail bracket needs p_sf in (0, 0.5], got {p_sf}"
    );
    let ln_p = p_sf.ln();
    let ln_qa = ln_p - (LN_2 + (-(-4.0f64).exp()).ln_1p()) + LOOSEN.ln_1p();
    let ln_qb = ln_p - LN_2 + (-LOOSEN).ln_1p();
    Bracket {
        lo: (-0.5 * ln_qa).sqrt(),
        hi: (-0.5 * ln_qb).sqrt(),
    }
}

/// Starting guess for the right-tail inversion: series reversion of
/// the survival function around its leading exponential.
pub fn initial_guess_small_p(p_sf: f64) -> f64 {
    assert!(
        p_sf > 0.0 && p_sf <= 0.5,
        "right-tail guess needs p_sf in (0, 0.5], got {p_sf}"
    );
    let p1 = p_sf / 2.0;
    let p2 = p1 * p1;
    let p3 = p2 * p1;
    let p4 = p2 * p2;
    let p7 = p4 * p3;
    let p9 = p7 * p2;
    let p10 = p9 * p1;
    let p12 = p10 * p2;
    let p13 = p12 * p1;
    let q0 = p1 + p4 + 4.0 * p7 - p9 + 22.0 * p10 - 13.0 * p12 + 140.0 * p13;
    (-0.5 * q0.ln()).sqrt()
}

/// One contraction step toward the left-tail root: maps x to the
/// solution of the one-term distribution model
/// p_cdf = sqrt(2 pi)/x * exp(-pi^2 / (8 x^2)) with the prefactor
/// frozen at the current iterate. Evaluated in log space so subnormal
/// probabilities keep full range.
///
/// Panics when the log of the model argument reaches 0, where the
/// square root would leave the real line.
pub fn g_p(x: f64, p_cdf: f64) -> f64 {
    assert!(
        p_cdf > 0.0 && p_cdf <= 0.73,
        "left-tail contraction needs p_cdf in (0, 0.73], got {p_cdf}"
    );
    assert!(x.is_finite() && x > 0.0, "contraction point must be finite and positive, got {x}");
    let ln_arg = p_cdf.ln() + x.ln() - LN_SQRT_2PI;
    assert!(
        ln_arg < 0.0,
        "contraction argument reached 1 at x = {x}, p_cdf = {p_cdf}"
    );
    PI / (-8.0 * ln_arg).sqrt()
}

/// Bracket for the left-tail inversion, p_cdf in (0, 0.73].
///
/// Two contraction steps from each side of the root: from below via
/// max(sqrt(p_cdf), 0.04) and from above via 1. The map approaches the
/// root monotonically from either side, so two applications tighten
/// each endpoint while preserving containment.
pub fn bracket_large_p(p_cdf: f64) -> Bracket {
    assert!(
        p_cdf > 0.0 && p_cdf <= 0.73,
        "left-tail bracket needs p_cdf in (0, 0.73], got {p_cdf}"
    );
    let a0 = p_cdf.sqrt().max(0.04);
    let lo = g_p(g_p(a0, p_cdf), p_cdf);
    let hi = g_p(g_p(1.0, p_cdf), p_cdf);
    // Extreme contraction can cross the endpoints by an ulp.
    if lo <= hi {
        Bracket { lo, hi }
    } else {
        Bracket { lo: hi, hi: lo }
    }
}

/// Starting guess for the left-tail inversion: a quadratic fit of the
/// one-term model parameter for p_cdf at or above 0.1, the bracket
/// midpoint below, always clamped into the bracket.
pub fn initial_guess_large_p(p_cdf: f64, bracket: Bracket) -> f64 {
    assert!(
        p_cdf > 0.0 && p_cdf <= 0.73,
        "left-tail guess needs p_cdf in (0, 0.73], got {p_cdf}"
    );
    if p_cdf >= 0.1 {
        let t = 0.2353 * p_cdf * p_cdf + 0.2136 * p_cdf - 0.000764;
        let x = PI / (-8.0 * t.ln()).sqrt();
        x.clamp(bracket.lo, bracket.hi)
    } else {
        0.5 * (bracket.lo + bracket.hi)
    }
}

/// Newton-Raphson iteration confined to a bracket, with bisection as
/// the fallback whenever the Newton proposal is unusable.
///
/// The objective's sign at `bracket.lo` orients the bracket update;
/// that one extra evaluation is not counted as an iteration. The
/// search stops when the objective returns exactly 0 (the objective
/// owns any residual tolerance and signals it by snapping to zero),
/// when a Newton proposal inside the closed bracket moves less than
/// `rel_tol` relatively (endpoint hits included), or at `max_iter`
/// applied updates. The reported count is the number of updates that
/// moved the iterate, the final accepted proposal included; an
/// initial estimate so good that the first proposal reproduces it
/// exactly therefore reports zero. The result never leaves the
/// bracket.
pub fn bracketed_newton<F, G>(
    f: F,
    f_deriv: G,
    x0: f64,
    bracket: Bracket,
    rel_tol: f64,
    max_iter: u32,
) -> (f64, NRReport)
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let Bracket { mut lo, mut hi } = bracket;
    debug_assert!(lo <= hi);
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return (lo, NRReport { iterations: 0, converged: true, residual: 0.0 });
    }
    let positive_at_lo = f_lo > 0.0;

    let mut x = x0.clamp(lo, hi);
    let mut iterations = 0u32;
    loop {
        let fx = f(x);
        if fx == 0.0 {
            return (x, NRReport { iterations, converged: true, residual: 0.0 });
        }
        // Keep the sign change inside [lo, hi].
        if (fx > 0.0) == positive_at_lo {
            lo = x;
        } else {
            hi = x;
        }
        if iterations >= max_iter {
            return (x, NRReport { iterations, converged: false, residual: fx.abs() });
        }
        let d = f_deriv(x);
        let newton = x - fx / d;
        let newton_bracketed = d != 0.0 && newton >= lo && newton <= hi;
        // A sub-tolerance Newton step is converged even when it rounds
        // onto a bracket endpoint; deciding containment first would
        // misread that endpoint hit as an escape and bisect against
        // the far side long after the answer is in hand. The accepted
        // proposal is itself an applied update whenever it moves.
        if newton_bracketed && (newton - x).abs() <= rel_tol * newton.abs() {
            let iterations = iterations + u32::from(newton != x);
            return (newton, NRReport { iterations, converged: true, residual: fx.abs() });
        }
        let x_new = if newton_bracketed && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (x_new - x).abs() <= rel_tol * x_new.abs() {
            let iterations = iterations + u32::from(x_new != x);
            return (x_new, NRReport { iterations, converged: true, residual: fx.abs() });
        }
        x = x_new;
        iterations += 1;
    }
}

fn ulp(v: f64) -> f64 {
    v.next_up() - v
}

fn snap_zero(v: f64, tol: f64) -> f64 {
    if v.abs() <= tol {
        0.0
    } else {
        v
    }
}

fn dist_sf(x: f64) -> f64 {
    kolmogorov_triple(x).expect("bracketed iterates are finite and positive").sf
}

fn dist_cdf(x: f64) -> f64 {
    kolmogorov_triple(x).expect("bracketed iterates are finite and positive").cdf
}

fn dist_pdf(x: f64) -> f64 {
    kolmogorov_triple(x).expect("bracketed iterates are finite and positive").pdf
}

/// Quantile of the limiting distribution at default tolerances:
/// relative step at machine epsilon, at most 100 updates.
pub fn kolmogi(pair: ProbPair) -> (f64, NRReport) {
    kolmogi_with(pair, f64::EPSILON, 100)
}

/// Quantile with caller-chosen step tolerance and iteration cap.
///
/// Probability-zero sides return their exact boundary quantile. The
/// objective snaps to zero once its magnitude falls within two ulp of
/// the smaller probability, which is as close as the objective can
/// resolve; past that point iteration would only chase rounding noise.
pub fn kolmogi_with(pair: ProbPair, rel_tol: f64, max_iter: u32) -> (f64, NRReport) {
    assert!(
        rel_tol.is_finite() && rel_tol >= 0.0,
        "relative tolerance must be finite and non-negative, got {rel_tol}"
    );
    let done = |x: f64| (x, NRReport { iterations: 0, converged: true, residual: 0.0 });
    if pair.p_cdf == 0.0 {
        return done(0.0);
    }
    if pair.p_sf == 0.0 {
        return done(f64::INFINITY);
    }
    let ProbPair { p_sf, p_cdf } = pair;
    let f_tol = 2.0 * ulp(p_sf.min(p_cdf));
    if p_sf <= 0.5 {
        let bracket = bracket_small_p(p_sf);
        let x0 = initial_guess_small_p(p_sf);
        let f = move |x: f64| snap_zero(dist_sf(x) - p_sf, f_tol);
        bracketed_newton(f, |x| -dist_pdf(x), x0, bracket, rel_tol, max_iter)
    } else {
        let bracket = bracket_large_p(p_cdf);
        let x0 = initial_guess_large_p(p_cdf, bracket);
        let f = move |x: f64| snap_zero(p_cdf - dist_cdf(x), f_tol);
        bracketed_newton(f, |x| -dist_pdf(x), x0, bracket, rel_tol, max_iter)
    }
}
