//! Bracketing root refinement: bisection with a secant polish.

use crate::error::{QwallError, Result};

/// Refines a sign-changing bracket [a, b] to relative tolerance `rel_tol`.
///
/// Plain bisection until the bracket is small, then secant steps as long as
/// they stay inside the bracket; falls back to bisection otherwise.
pub fn bisect_secant<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    rel_tol: f64,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(QwallError::RootSearch(format!(
            "no sign change on [{a}, {b}] (f = {fa:.3e}, {fb:.3e})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        // secant candidate from the bracket endpoints
        let s = b - fb * (b - a) / (fb - fa);
        let x = if s > a && s < b && (fb - fa).abs() > 0.0 {
            s
        } else {
            mid
        };
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    Ok(0.5 * (a + b))
}

/// Scans [lo, hi] with `n` uniform panels and returns every sign-change
/// bracket (a, b, f(a), f(b)) in order.
pub fn scan_brackets<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    n: usize,
) -> Vec<(f64, f64, f64, f64)> {
    let mut out = Vec::new();
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..=n {
        let xb = lo + (hi - lo) * i as f64 / n as f64;
        let fb = f(xb);
        if fa == 0.0 {
            out.push((xa, xa, 0.0, 0.0));
        } else if fa * fb < 0.0 {
            out.push((xa, xb, fa, fb));
        }
        xa = xb;
        fa = fb;
    }
    out
}
