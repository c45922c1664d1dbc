//! Legacy reference evaluator, preserved with its known defects.
//!
//! This is the classical forward-summation approach: the right-tail
//! alternating series summed term by term with a relative stop, and an
//! unbracketed Newton inversion seeded from the one-term model. It is
//! kept as a comparison target, quirks and all:
//!
//! - forward summation needs hundreds of terms as x approaches 0 and
//!   hits the term cap below roughly x = 0.0086;
//! - partial sums in the cap region overshoot 1 and oscillate, so the
//!   returned values are not monotone there;
//! - the inversion's one-term derivative underestimates the true slope
//!   near the left tail, so for p_sf above roughly 0.998 it creeps and
//!   hits the iteration cap.
//!
//! Nothing here validates its input beyond what the original did; the
//! Newton loop is free to wander outside the support and the series
//! happily evaluates there.

/// Value plus the effort and cap status of the loop that produced it.
#[derive(Clone, Copy, Debug)]
pub struct BaselineResult {
    /// Series sum or final Newton iterate, unclipped.
    pub value: f64,
    /// Series terms added, or Newton updates applied.
    pub terms_or_iters: u32,
    /// True when the 500-step cap stopped the loop.
    pub hit_cap: bool,
}

/// Loop cap shared by the series and the inversion.
const CAP: u32 = 500;

/// Survival function by forward summation of 2 sum (-1)^(k-1) q^(k^2),
/// q = exp(-2 x^2). Terms are added until one vanishes, drops below
/// 1e-16 of the running sum, or the cap strikes.
pub fn baseline_sf(x: f64) -> BaselineResult {
    if x < 1.1e-16 {
        return BaselineResult { value: 1.0, terms_or_iters: 0, hit_cap: false };
    }
    let mut partial = 0.0f64;
    let mut sign = 1.0f64;
    let mut k = 0u32;
    let mut hit_cap = false;
    loop {
        k += 1;
        let kk = k as f64;
        let t = (-2.0 * x * x * kk * kk).exp();
        partial += sign * t;
        sign = -sign;
        if t == 0.0 {
            break;
        }
        if (t / partial).abs() < 1e-16 {
            break;
        }
        if k == CAP {
            hit_cap = true;
            break;
        }
    }
    BaselineResult { value: 2.0 * partial, terms_or_iters: k, hit_cap }
}

/// Inverse survival function by unbracketed Newton iteration on
/// baseline_sf, with the one-term derivative -8 x exp(-2 x^2). Stops
/// on a relative step below 1e-10 or at the cap; either way the last
/// iterate is returned unchecked.
pub fn baseline_isf(p: f64) -> BaselineResult {
    assert!(p > 0.0 && p < 1.0, "inversion needs p in (0, 1), got {p}");
    let q0 = (p / 2.0).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
    let mut x = (-q0.ln() / 2.0).sqrt();
    let mut iters = 0u32;
    let mut hit_cap = false;
    loop {
        iters += 1;
        let fx = baseline_sf(x).value - p;
        let d = -8.0 * x * (-2.0 * x * x).exp();
        let x_new = x - fx / d;
        let step_small = (x_new - x).abs() < 1e-10 * x_new.abs();
        x = x_new;
        if step_small {
            break;
        }
        if iters == CAP {
            hit_cap = true;
            break;
        }
    }
    BaselineResult { value: x, terms_or_iters: iters, hit_cap }
}
