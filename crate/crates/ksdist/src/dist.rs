//! Limiting distribution of the scaled two-sided Kolmogorov-Smirnov
//! statistic.
//!
//! Two theta-series forms of the same distribution converge fastest on
//! opposite sides of x = 0.82. The left-tail form sums
//! sqrt(2 pi)/x * (t + t^9 + t^25 + ...) with t = exp(-pi^2 / (8 x^2));
//! the right-tail form sums 2 * (q - q^4 + q^9 - ...) with
//! q = exp(-2 x^2). Both are evaluated by a backward recurrence whose
//! term budget comes from a truncation tolerance, so evaluation cost is
//! a handful of terms everywhere.
//!
//! The left-tail exponent is carried as an unevaluated hi/lo pair and
//! recombined with the prefactor in log space. That keeps the cdf fully
//! accurate (not just absolutely small) through the subnormal range,
//! down to the smallest positive float.

use crate::dd::{two_prod, two_sum};
use crate::Error;
use std::f64::consts::PI;

/// Branch cutoff: the left-tail series runs for x at or below this, the
/// right-tail series above.
const CUTOFF: f64 = 0.82;

/// pi^2 as a hi/lo pair carrying roughly 107 bits.
const PI2_HI: f64 = 9.869604401089358;
const PI2_LO: f64 = 6.265295508739711e-16;

/// sqrt(2 pi), correctly rounded.
const SQRT_2PI: f64 = 2.5066282746310007;

/// Floor for the effective truncation tolerance. Budgets are sized for
/// at least this much headroom so that the two branches agree near the
/// cutoff to well below f64 round-off.
const EPS_FLOOR: f64 = 1e-21;

/// Which evaluation path produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Left-tail theta series (x <= 0.82).
    SmallX,
    /// Right-tail alternating series (x > 0.82).
    LargeX,
    /// Closed-form boundary point (x <= 0 or x = +inf).
    Degenerate,
}

/// One evaluation of the distribution at a point.
#[derive(Clone, Copy, Debug)]
pub struct DistTriple {
    /// Survival function value, clipped to [0, 1].
    pub sf: f64,
    /// Distribution function value, clipped to [0, 1].
    pub cdf: f64,
    /// Density value, clipped to be non-negative.
    pub pdf: f64,
    /// Series branch taken.
    pub branch: Branch,
    /// Series terms charged: the left-tail budget R, the right-tail
    /// budget R plus its closing term, or 0 for degenerate points.
    pub terms: u32,
}

/// Recurrence state at loop exit, kept for the invariant tests.
#[derive(Clone, Copy, Debug)]
#[cfg_attr(not(test), allow(dead_code))]
struct SeriesState {
    /// exp(-2 x^2).
    q: f64,
    /// exp(-pi^2 / (8 x^2)).
    t: f64,
    /// t^8, built by three squarings (within 2 ulp of t^8 exactly).
    u: f64,
    /// Term budget actually looped over.
    r: u32,
    /// Final series accumulator S_0.
    s: f64,
    /// Final derivative accumulator D_0.
    d: f64,
}

/// Left-tail term budget: floor(c x + 1) with c = sqrt(-2 ln eps)/pi,
/// at least 1. At default tolerance the result is capped at 2, which is
/// exact for the whole branch domain.
fn small_budget(x: f64, eps: f64) -> u32 {
    let eff = eps.min(EPS_FLOOR);
    let c = (-2.0 * eff.ln()).sqrt() / PI;
    let r = (c * x + 1.0).floor().max(1.0).min(1e6) as u32;
    if eps >= f64::EPSILON {
        r.clamp(1, 2)
    } else {
        r
    }
}

/// Right-tail term budget: floor(c / x) with c = sqrt(-2 ln eps)/3. At
/// default tolerance the result is capped at 4, which is exact for the
/// whole branch domain.
fn large_budget(x: f64, eps: f64) -> u32 {
    let eff = eps.min(EPS_FLOOR);
    let c = (-2.0 * eff.ln()).sqrt() / 3.0;
    let r = (c / x).floor().max(0.0).min(1e6) as u32;
    if eps >= f64::EPSILON {
        r.min(4)
    } else {
        r
    }
}

/// w = pi^2 / (8 x^2) as a hi/lo pair good to about 2^-104 relative.
///
/// 8 x^2 is exact in double-double (the scale by 8 loses no bits), so a
/// single division correction recovers the low word.
fn theta_exponent(x: f64) -> (f64, f64) {
    let (x2_hi, x2_lo) = two_prod(x, x);
    if x2_hi == 0.0 {
        return (f64::INFINITY, 0.0);
    }
    if x2_hi.is_infinite() {
        return (0.0, 0.0);
    }
    let y_hi = 8.0 * x2_hi;
    let y_lo = 8.0 * x2_lo;
    let w_hi = PI2_HI / y_hi;
    let (m_hi, m_lo) = two_prod(w_hi, y_hi);
    let resid = (PI2_HI - m_hi) + (PI2_LO - m_lo - w_hi * y_lo);
    (w_hi, resid / y_hi)
}

fn check_point(x: f64, eps: f64) {
    assert!(
        x.is_finite() && x > 0.0,
        "evaluation point must be finite and positive, got {x}"
    );
    assert!(eps > 0.0 && eps < 1.0, "tolerance must lie in (0, 1), got {eps}");
}

fn eval_small_x_state(x: f64, eps: f64) -> (f64, f64, SeriesState) {
    let r = small_budget(x, eps);
    if x <= 1e-154 {
        // x^2 underflows; the true value sits far below the subnormal
        // floor, so report an exact zero without running the series.
        let st = SeriesState { q: 1.0, t: 0.0, u: 0.0, r, s: 1.0, d: 1.0 };
        return (0.0, 0.0, st);
    }
    let (w_hi, w_lo) = theta_exponent(x);
    let t = (-w_hi).exp() * (1.0 - w_lo);
    let u = {
        let t2 = t * t;
        let t4 = t2 * t2;
        t4 * t4
    };

    // Ascending powers u, u^2, ..., u^r by repeated multiplication,
    // consumed in reverse by the backward recurrence.
    let mut upows = vec![0.0f64; r as usize];
    let mut acc = 1.0;
    for p in upows.iter_mut() {
        acc *= u;
        *p = acc;
    }

    // S_{k-1} = 1 + u^k S_k and D_{k-1} = (2k-1)^2 + u^k D_k, seeded
    // with the closing term's coefficient. Every stage stays
    // non-negative because all series terms are positive.
    let mut s = 1.0f64;
    let mut d = {
        let v = 2.0 * r as f64 + 1.0;
        v * v
    };
    for k in (1..=r).rev() {
        let up = upows[k as usize - 1];
        s = 1.0 + up * s;
        let m = 2.0 * k as f64 - 1.0;
        d = m * m + up * d;
        debug_assert!(s >= 1.0 && d >= 1.0);
    }

    // cdf = sqrt(2 pi)/x * t * S_0, assembled as exp(a - w) with
    // a = ln(sqrt(2 pi)/x). The hi exponent goes through exp once; the
    // dropped low bits come back as the relative correction `corr`.
    // Multiplying by the exponential last makes the single subnormal
    // rounding the final operation.
    let a = (SQRT_2PI / x).ln();
    let (s_hi, s_lo) = two_sum(a, -w_hi);
    let corr = s_lo - w_lo;
    let e_fac = s_hi.exp();
    let cdf = (s * (1.0 + corr)) * e_fac;
    let pdf = (((2.0 * w_hi * d - s) / x) * (1.0 + corr)) * e_fac;

    let st = SeriesState { q: (-2.0 * x * x).exp(), t, u, r, s, d };
    (cdf, pdf, st)
}

fn eval_large_x_state(x: f64, eps: f64) -> (f64, f64, SeriesState) {
    let r = large_budget(x, eps);
    let q = (-2.0 * x * x).exp();
    let q2 = q * q;

    // Ascending odd powers q^3, q^5, ..., q^(2r+1) by repeated
    // multiplication, consumed in reverse by the backward recurrence.
    let mut qodds = vec![0.0f64; r as usize];
    let mut acc = q;
    for p in qodds.iter_mut() {
        acc *= q2;
        *p = acc;
    }

    // S_{k-1} = 1 - q^(2k+1) S_k and D_{k-1} = k^2 - q^(2k+1) D_k,
    // seeded with the closing term's coefficient.
    let mut s = 1.0f64;
    let mut d = {
        let v = r as f64 + 1.0;
        v * v
    };
    for k in (1..=r).rev() {
        let qo = qodds[k as usize - 1];
        s = 1.0 - qo * s;
        d = (k as f64) * (k as f64) - qo * d;
    }
    let sf = 2.0 * q * s;
    let pdf = 8.0 * q * x * d;

    let (w_hi, w_lo) = theta_exponent(x);
    let t = (-w_hi).exp() * (1.0 - w_lo);
    let u = {
        let t2 = t * t;
        let t4 = t2 * t2;
        t4 * t4
    };
    let st = SeriesState { q, t, u, r, s, d };
    (sf, pdf, st)
}

/// Left-tail evaluation: returns (cdf, pdf, terms) at truncation
/// tolerance `eps`.
///
/// Intended for 0 < x <= 0.82; usable for cross-checks up to about
/// 1.15 with a widened budget. Panics outside the domain.
pub fn eval_small_x(x: f64, eps: f64) -> (f64, f64, u32) {
    check_point(x, eps);
    let (cdf, pdf, st) = eval_small_x_state(x, eps);
    (cdf, pdf, st.r)
}

/// Right-tail evaluation: returns (sf, pdf, terms) at truncation
/// tolerance `eps`, where `terms` counts recurrence steps (the closing
/// term is not included).
///
/// Intended for x > 0.82; usable for cross-checks down to about 0.75
/// with a widened budget. Panics outside the domain.
pub fn eval_large_x(x: f64, eps: f64) -> (f64, f64, u32) {
    check_point(x, eps);
    let (sf, pdf, st) = eval_large_x_state(x, eps);
    (sf, pdf, st.r)
}

fn clip01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Distribution triple at the default tolerance (machine epsilon).
pub fn kolmogorov_triple(x: f64) -> Result<DistTriple, Error> {
    kolmogorov_triple_eps(x, f64::EPSILON)
}

/// Distribution triple with a caller-chosen truncation tolerance.
///
/// x <= 0 and x = +inf return exact boundary values; NaN is a domain
/// error. The complement side is formed by subtraction, so sf + cdf
/// reproduces 1 to within one rounding.
pub fn kolmogorov_triple_eps(x: f64, eps: f64) -> Result<DistTriple, Error> {
    if x.is_nan() {
        return Err(Error::Domain { what: "evaluation point", got: x });
    }
    assert!(eps > 0.0 && eps < 1.0, "tolerance must lie in (0, 1), got {eps}");
    if x <= 0.0 {
        return Ok(DistTriple {
            sf: 1.0,
            cdf: 0.0,
            pdf: 0.0,
            branch: Branch::Degenerate,
            terms: 0,
        });
    }
    if x == f64::INFINITY {
        return Ok(DistTriple {
            sf: 0.0,
            cdf: 1.0,
            pdf: 0.0,
            branch: Branch::Degenerate,
            terms: 0,
        });
    }
    let triple = if x <= CUTOFF {
        let (cdf, pdf, st) = eval_small_x_state(x, eps);
        DistTriple {
            sf: clip01(1.0 - cdf),
            cdf: clip01(cdf),
            pdf: pdf.max(0.0),
            branch: Branch::SmallX,
            terms: st.r,
        }
    } else {
        let (sf, pdf, st) = eval_large_x_state(x, eps);
        DistTriple {
            sf: clip01(sf),
            cdf: clip01(1.0 - sf),
            pdf: pdf.max(0.0),
            branch: Branch::LargeX,
            terms: st.r + 1,
        }
    };
    Ok(triple)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn cdf_matches_frozen_left_tail_points() {
        let cases = [
            (0.1, 6.6093052422455605e-53),
            (0.3, 9.305801334566623e-06),
            (0.5, 0.03605475633512491),
            (0.8, 0.45585758842580193),
            (0.82, 0.4880282947015027),
        ];
        for (x, want) in cases {
            let t = kolmogorov_triple(x).unwrap();
            assert_eq!(t.branch, Branch::SmallX, "x = {x}");
            assert!(rel(t.cdf, want) <= 2e-15, "x = {x}: {} vs {want}", t.cdf);
        }
    }

    #[test]
    fn sf_matches_frozen_right_tail_points() {
        // Just past the cutoff the four-term budget truncates at a
        // relative error near 1e-14; further out the tail terms decay
        // so fast that rounding alone sets the error.
        let cases = [
            (0.8201, 0.5118128354122994, 3e-14),
            (1.0, 0.2699996716773545, 2e-15),
            (1.5, 0.02221796261652513, 2e-15),
            (2.0, 0.0006709252557796953, 2e-15),
            (3.0, 3.045995948942526e-08, 2e-15),
        ];
        for (x, want, tol) in cases {
            let t = kolmogorov_triple(x).unwrap();
            assert_eq!(t.branch, Branch::LargeX, "x = {x}");
            assert!(rel(t.sf, want) <= tol, "x = {x}: {} vs {want}", t.sf);
        }
    }

    #[test]
    fn pdf_matches_frozen_points() {
        // The k^2 weights amplify the truncated tail, so the density
        // just past the cutoff carries a few units of 1e-13 while the
        // rest of the range stays at rounding level.
        let cases = [
            (0.3, 0.0008193934196931296, 4e-15),
            (0.5, 0.6395828509404566, 4e-15),
            (0.8275735551899077, 1.5724904339966017, 4e-13),
            (1.0, 1.0719485583569417, 4e-15),
            (1.5, 0.13330722741988021, 4e-15),
            (2.0, 0.005367402045629683, 4e-15),
        ];
        for (x, want, tol) in cases {
            let t = kolmogorov_triple(x).unwrap();
            assert!(rel(t.pdf, want) <= tol, "x = {x}: {} vs {want}", t.pdf);
        }
    }

    #[test]
    fn complement_reproduces_one_within_rounding() {
        for x in [0.3, 0.5, 0.82, 0.8201, 1.0, 2.0] {
            let t = kolmogorov_triple(x).unwrap();
            assert!(
                (t.sf + t.cdf - 1.0).abs() <= f64::EPSILON,
                "x = {x}: sf + cdf = {}",
                t.sf + t.cdf
            );
        }
    }

    #[test]
    fn branches_agree_near_the_cutoff() {
        // Frozen values straddle the branch switch; both sides also
        // agree with each other when evaluated out of their home range.
        let sf_small = kolmogorov_triple(0.82).unwrap().sf;
        assert!(rel(sf_small, 0.5119717052984973) <= 2e-15);
        let (sf_large, _, _) = eval_large_x(0.82, 1e-21);
        assert!(rel(sf_large, sf_small) <= 1e-13);
        let (cdf_small, _, _) = eval_small_x(0.8201, 1e-21);
        assert!(rel(cdf_small, 0.4881871645877006) <= 2e-15);
    }

    #[test]
    fn term_counts_follow_the_budget_zones() {
        let cases = [
            (0.1, Branch::SmallX, 1),
            (0.319, Branch::SmallX, 1),
            (0.32, Branch::SmallX, 2),
            (0.5, Branch::SmallX, 2),
            (0.6, Branch::SmallX, 2),
            (0.82, Branch::SmallX, 2),
            (0.8201, Branch::LargeX, 4),
            (0.9, Branch::LargeX, 4),
            (1.092, Branch::LargeX, 4),
            (1.1, Branch::LargeX, 3),
            (1.639, Branch::LargeX, 3),
            (1.64, Branch::LargeX, 2),
            (2.0, Branch::LargeX, 2),
            (3.27, Branch::LargeX, 2),
            (3.3, Branch::LargeX, 1),
            (5.0, Branch::LargeX, 1),
        ];
        for (x, branch, terms) in cases {
            let t = kolmogorov_triple(x).unwrap();
            assert_eq!(t.branch, branch, "x = {x}");
            assert_eq!(t.terms, terms, "x = {x}");
        }
    }

    #[test]
    fn tighter_tolerance_widens_the_budget() {
        // Below machine epsilon the default caps come off.
        assert_eq!(kolmogorov_triple_eps(0.82, 1e-30).unwrap().terms, 4);
        assert_eq!(kolmogorov_triple_eps(1.1, 1e-30).unwrap().terms, 4);
        // Requests looser than the budget floor of 1e-21 are held there.
        assert_eq!(
            kolmogorov_triple_eps(0.82, 1e-17).unwrap().terms,
            kolmogorov_triple_eps(0.82, 1e-21).unwrap().terms
        );
        assert_eq!(kolmogorov_triple_eps(0.82, 1e-21).unwrap().terms, 3);
        // Tighter requests keep widening the budget past the floor.
        assert_eq!(kolmogorov_triple_eps(0.82, 1e-40).unwrap().terms, 4);
        // Direct right-tail calls below the cutoff hit the default cap.
        assert_eq!(eval_large_x(0.001, f64::EPSILON).2, 4);
    }

    #[test]
    fn degenerate_and_infinite_points() {
        for x in [0.0, -3.0, f64::NEG_INFINITY] {
            let t = kolmogorov_triple(x).unwrap();
            assert_eq!((t.sf, t.cdf, t.pdf), (1.0, 0.0, 0.0));
            assert_eq!(t.branch, Branch::Degenerate);
            assert_eq!(t.terms, 0);
        }
        let t = kolmogorov_triple(f64::INFINITY).unwrap();
        assert_eq!((t.sf, t.cdf, t.pdf), (0.0, 1.0, 0.0));
        assert_eq!(t.branch, Branch::Degenerate);
        assert_eq!(t.terms, 0);
        assert!(matches!(
            kolmogorov_triple(f64::NAN),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn left_tail_reaches_the_subnormal_floor() {
        let t = kolmogorov_triple(0.040596694).unwrap();
        assert_eq!(t.cdf, f64::from_bits(1));
        assert_eq!(t.sf, 1.0);
        assert!(t.pdf > 0.0 && t.pdf < 1e-310);

        let t = kolmogorov_triple(0.01).unwrap();
        assert_eq!((t.sf, t.cdf, t.pdf), (1.0, 0.0, 0.0));

        let t = kolmogorov_triple(1e-200).unwrap();
        assert_eq!((t.sf, t.cdf, t.pdf), (1.0, 0.0, 0.0));
        assert_eq!(t.branch, Branch::SmallX);
        assert_eq!(t.terms, 1);
    }

    #[test]
    fn single_term_right_tail_is_the_leading_exponential() {
        let t = kolmogorov_triple(4.0).unwrap();
        assert_eq!(t.terms, 1);
        let q = (-32.0f64).exp();
        assert_eq!(t.sf, 2.0 * q);
        assert_eq!(t.pdf, 32.0 * q);
    }

    #[test]
    fn state_invariants_hold_at_exit() {
        for x in [0.2, 0.4, 0.6, 0.82] {
            let (_, _, st) = eval_small_x_state(x, f64::EPSILON);
            assert!((st.u - st.t.powi(8)).abs() <= 2.0 * f64::EPSILON * st.u);
            assert!(st.s >= 1.0 && st.d >= 1.0);
            assert_eq!(st.q, (-2.0 * x * x).exp());
        }
        for x in [0.83, 1.0, 1.5, 3.0, 5.0] {
            let (_, _, st) = eval_large_x_state(x, f64::EPSILON);
            assert!(st.s > 0.0 && st.s <= 1.0);
            assert!(st.d > 0.0 && st.d <= ((st.r + 1) as f64).powi(2));
            assert!((st.u - st.t.powi(8)).abs() <= 2.0 * f64::EPSILON * st.u);
        }
    }

    #[test]
    #[should_panic(expected = "tolerance")]
    fn zero_tolerance_is_rejected() {
        let _ = kolmogorov_triple_eps(1.0, 0.0);
    }

    #[test]
    #[should_panic(expected = "evaluation point")]
    fn negative_point_is_rejected_by_the_series_evaluators() {
        let _ = eval_small_x(-1.0, f64::EPSILON);
    }
}
