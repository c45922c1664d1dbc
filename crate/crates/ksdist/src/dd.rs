//! Error-free float transforms.
//!
//! The left-tail evaluator carries its exponent as an unevaluated
//! hi/lo pair so that results stay fully accurate down to the
//! smallest subnormal. These two primitives are all it needs.

/// Exact sum: returns `(s, e)` with `s = fl(a + b)` and `a + b == s + e`.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Exact product: returns `(p, e)` with `p = fl(a * b)` and `a * b == p + e`.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}
