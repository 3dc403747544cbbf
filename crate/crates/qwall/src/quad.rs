//! Quadrature rules: Gauss-Legendre (fixed and adaptive) and Gauss-Hermite.
//!
//! Adaptive Gauss-Legendre with absolute tolerance 1e-12 is the house rule
//! for every oracle integral; nodes are generated by Newton iteration on the
//! orthogonal-polynomial recurrences, so there are no tabulated constants to
//! go stale.

use num_complex::Complex64;

use crate::error::{QwallError, Result};

/// House absolute tolerance for oracle integrals.
pub const HOUSE_ABS_TOL: f64 = 1e-12;

const MAX_DEPTH: u32 = 40;

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n with the usual Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 1..n {
                    let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (b - a);
        let d = 0.5 * (b + a);
        let mut s = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c * x + d);
        }
        c * s
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        let c = 0.5 * (b - a);
        let d = 0.5 * (b + a);
        let mut s = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c * x + d);
        }
        c * s
    }
}

fn gl_pair() -> (&'static GaussLegendre, &'static GaussLegendre) {
    use std::sync::OnceLock;
    static G10: OnceLock<GaussLegendre> = OnceLock::new();
    static G20: OnceLock<GaussLegendre> = OnceLock::new();
    (
        G10.get_or_init(|| GaussLegendre::new(10)),
        G20.get_or_init(|| GaussLegendre::new(20)),
    )
}

/// Adaptive Gauss-Legendre on [a, b] to absolute tolerance `abs_tol`.
///
/// Each panel is accepted when |GL10 - GL20| is below its share of the
/// budget; otherwise it is bisected, up to depth 40.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    let (g10, g20) = gl_pair();
    let mut total = 0.0;
    let mut stack = vec![(a, b, abs_tol, 0u32)];
    while let Some((lo, hi, tol, depth)) = stack.pop() {
        let coarse = g10.integrate(lo, hi, &mut f);
        let fine = g20.integrate(lo, hi, &mut f);
        let err = (fine - coarse).abs();
        // second disjunct: panel roundoff floor, unreachable by refinement
        if err <= tol
            || err <= 8.0 * f64::EPSILON * (fine.abs() + coarse.abs())
            || hi - lo < 1e-15 * (b - a).abs()
        {
            total += fine;
        } else if depth >= MAX_DEPTH {
            return Err(QwallError::Numeric(format!(
                "adaptive quadrature stalled on [{lo}, {hi}] (achieved {:.3e}, wanted {:.3e})",
                (fine - coarse).abs(),
                tol
            )));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * tol, depth + 1));
            stack.push((mid, hi, 0.5 * tol, depth + 1));
        }
    }
    Ok(total)
}

/// Adaptive Gauss-Legendre for complex-valued integrands.
pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<Complex64> {
    let (g10, g20) = gl_pair();
    let mut total = Complex64::new(0.0, 0.0);
    let mut stack = vec![(a, b, abs_tol, 0u32)];
    while let Some((lo, hi, tol, depth)) = stack.pop() {
        let coarse = g10.integrate_complex(lo, hi, &mut f);
        let fine = g20.integrate_complex(lo, hi, &mut f);
        let err = (fine.re - coarse.re).abs() + (fine.im - coarse.im).abs();
        let scale = fine.re.abs() + fine.im.abs() + coarse.re.abs() + coarse.im.abs();
        if err <= tol
            || err <= 8.0 * f64::EPSILON * scale
            || hi - lo < 1e-15 * (b - a).abs()
        {
            total += fine;
        } else if depth >= MAX_DEPTH {
            return Err(QwallError::Numeric(format!(
                "adaptive quadrature stalled on [{lo}, {hi}] (achieved {err:.3e}, wanted {tol:.3e})"
            )));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * tol, depth + 1));
            stack.push((mid, hi, 0.5 * tol, depth + 1));
        }
    }
    Ok(total)
}

/// Gauss-Hermite nodes and weights for the weight e^{-x^2} on the real line.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Orthonormal Hermite values p_0..p_{n} at x (weight e^{-x^2}).
fn hermite_orthonormal(n: usize, x: f64) -> (f64, f64) {
    // returns (p_n(x), p_{n-1}(x))
    let mut p0 = std::f64::consts::PI.powf(-0.25);
    if n == 0 {
        return (p0, 0.0);
    }
    let mut p1 = std::f64::consts::SQRT_2 * x * p0;
    for k in 1..n {
        let p2 = x * (2.0 / (k as f64 + 1.0)).sqrt() * p1 - (k as f64 / (k as f64 + 1.0)).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        let nf = n as f64;
        let mut z = 0.0;
        for i in 0..m {
            // Initial guesses marching inward from the largest root.
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[n - 1],
                3 => 1.91 * z - 0.91 * nodes[n - 2],
                _ => 2.0 * z - nodes[n - i + 1],
            };
            let mut pn = 0.0;
            let mut pm = 0.0;
            for _ in 0..200 {
                let (a, b) = hermite_orthonormal(n, z);
                pn = a;
                pm = b;
                let dp = (2.0 * nf).sqrt() * pm; // p_n' = sqrt(2n) p_{n-1}
                let dz = pn / dp;
                z -= dz;
                if dz.abs() < 1e-15 * (1.0 + z.abs()) {
                    break;
                }
            }
            let _ = pn;
            nodes[n - 1 - i] = z;
            nodes[i] = -z;
            let w = 1.0 / (nf * pm * pm); // Golub-Welsch with orthonormal p
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
            let (_, pm) = hermite_orthonormal(n, 0.0);
            weights[n / 2] = 1.0 / (nf * pm * pm);
        }
        Self { nodes, weights }
    }

    /// Integrates f over the real line against the weight e^{-x^2} already
    /// contained in the weights: sum_i w_i g(x_i) ~ int g(x) e^{-x^2} dx.
    pub fn integrate_weighted_complex<F: FnMut(f64) -> Complex64>(&self, mut g: F) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            s += w * g(x);
        }
        s
    }
}

/// Composite Simpson rule on uniformly sampled values (even interval count).
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    assert!(n >= 2 && n % 2 == 0, "Simpson needs an even interval count");
    let mut s = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// Complex composite Simpson on uniform samples.
pub fn simpson_uniform_complex(values: &[Complex64], h: f64) -> Complex64 {
    let n = values.len() - 1;
    assert!(n >= 2 && n % 2 == 0, "Simpson needs an even interval count");
    let mut s = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * (h / 3.0)
}
