//! Harmonic-oscillator eigenfunctions Y_n(y) with scale sqrt(hbar):
//! Y_n(y) = (sqrt(hbar)/(2^n n! sqrt(pi)))^{1/2} e^{-hbar y^2/2} H_n(sqrt(hbar) y),
//! evaluated by the stable three-term recurrence, plus Gauss-Hermite
//! machinery matched to the e^{-hbar y^2} weight.

use crate::error::{QwallError, Result};
use crate::quad::GaussHermite;

/// Physicists' Hermite polynomial H_n(z) by recurrence.
pub fn hermite_h(n: usize, z: f64) -> f64 {
    let mut h0 = 1.0;
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * z;
    for k in 1..n {
        let h2 = 2.0 * z * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Normalized oscillator eigenfunction Y_n(y).
///
/// The recurrence runs on the normalized functions directly,
/// Y_{k+1} = z sqrt(2/(k+1)) Y_k - sqrt(k/(k+1)) Y_{k-1} with z = sqrt(hbar) y,
/// so no factorial overflow is possible.
pub fn hermite_y(n: usize, y: f64, hbar: f64) -> Result<f64> {
    if !(hbar > 0.0) {
        return Err(QwallError::Argument(format!("need hbar > 0, got {hbar}")));
    }
    let z = hbar.sqrt() * y;
    let gauss = (-0.5 * z * z).exp();
    let mut y0 = (hbar.sqrt() / std::f64::consts::PI.sqrt()).sqrt() * gauss;
    if n == 0 {
        return Ok(y0);
    }
    let mut y1 = std::f64::consts::SQRT_2 * z * y0;
    for k in 1..n {
        let y2 = z * (2.0 / (k as f64 + 1.0)).sqrt() * y1 - (k as f64 / (k as f64 + 1.0)).sqrt() * y0;
        y0 = y1;
        y1 = y2;
    }
    Ok(y1)
}

/// The Hermite basis with its quadrature rule (nodes scaled to the
/// e^{-hbar y^2} weight) and the ladder matrix elements of y, y^2 and y d/dy.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    pub n_max: usize,
    pub hbar: f64,
    /// Quadrature nodes in y (already divided by sqrt(hbar)).
    pub nodes: Vec<f64>,
    /// Weights including the 1/sqrt(hbar) Jacobian; sum_i w_i g(y_i) ~
    /// int g(y) e^{-hbar y^2} dy.
    pub weights: Vec<f64>,
}

impl HermiteBasis {
    pub fn build(n_max: usize, hbar: f64) -> Result<Self> {
        if n_max == 0 {
            return Err(QwallError::Argument("HermiteBasis needs n_max >= 1".into()));
        }
        if !(hbar > 0.0) {
            return Err(QwallError::Argument(format!("need hbar > 0, got {hbar}")));
        }
        // enough nodes for products Y_l Y_n times a smooth gauge factor
        let rule = GaussHermite::new((2 * n_max + 32).min(400));
        let s = hbar.sqrt();
        let nodes = rule.nodes.iter().map(|x| x / s).collect();
        let weights = rule.weights.iter().map(|w| w / s).collect();
        Ok(Self { n_max, hbar, nodes, weights })
    }

    /// Dimensionless ladder element <m| xi |n>, xi = sqrt(hbar) y.
    pub fn xi(&self, m: usize, n: usize) -> f64 {
        let nf = n as f64;
        if m + 1 == n {
            (nf / 2.0).sqrt()
        } else if m == n + 1 {
            ((nf + 1.0) / 2.0).sqrt()
        } else {
            0.0
        }
    }

    /// <m| xi^2 |n>.
    pub fn xi2(&self, m: usize, n: usize) -> f64 {
        let nf = n as f64;
        if m == n {
            nf + 0.5
        } else if m + 2 == n {
            0.5 * (nf * (nf - 1.0)).sqrt()
        } else if m == n + 2 {
            0.5 * ((nf + 1.0) * (nf + 2.0)).sqrt()
        } else {
            0.0
        }
    }

    /// <m| xi d/dxi |n> (= <m| y d/dy |n>, scale-free).
    pub fn xi_dxi(&self, m: usize, n: usize) -> f64 {
        let nf = n as f64;
        if m == n {
            -0.5
        } else if m + 2 == n {
            0.5 * (nf * (nf - 1.0)).sqrt()
        } else if m == n + 2 {
            -0.5 * ((nf + 1.0) * (nf + 2.0)).sqrt()
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_polynomial_value() {
        // H_2(z) = 4 z^2 - 2 at z = 1.5
        assert!((hermite_h(2, 1.5) - 7.0).abs() < 1e-14);
    }

    #[test]
    fn recurrence_matches_rodrigues_form_at_small_n() {
        // Rodrigues: Y_n = (sqrt(hbar)/(2^n n! sqrt(pi)))^{1/2} e^{-z^2/2} H_n(z)
        let hbar: f64 = 1.3;
        for n in 0..=8usize {
            let norm = (hbar.sqrt()
                / (2f64.powi(n as i32) * (1..=n).product::<usize>() as f64
                    * std::f64::consts::PI.sqrt()))
            .sqrt();
            for i in 0..20 {
                let y = -3.0 + 6.0 * i as f64 / 19.0;
                let z = hbar.sqrt() * y;
                let want = norm * (-0.5 * z * z).exp() * hermite_h(n, z);
                let got = hermite_y(n, y, hbar).unwrap();
                assert!((got - want).abs() < 1e-10, "n={n} y={y}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn gaussian_normalization_and_orthonormality() {
        let hbar = 0.7;
        let b = HermiteBasis::build(21, hbar).unwrap();
        for n in 0..=20usize {
            for m in n..=20usize {
                // int Y_n Y_m dy via the weighted rule: Y_n Y_m = e^{-hbar y^2} (polys)
                let ip: f64 = b
                    .nodes
                    .iter()
                    .zip(&b.weights)
                    .map(|(&y, &w)| {
                        let g = (0.5 * hbar * y * y).exp();
                        w * (hermite_y(n, y, hbar).unwrap() * g)
                            * (hermite_y(m, y, hbar).unwrap() * g)
                    })
                    .sum();
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-10, "({n},{m}): {ip}");
            }
        }
    }

    #[test]
    fn parity() {
        let hbar = 1.0;
        for n in 0..=9usize {
            for y in [0.3, 1.1, 2.4] {
                let a = hermite_y(n, y, hbar).unwrap();
                let b = hermite_y(n, -y, hbar).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((a - sign * b).abs() < 1e-12);
            }
        }
    }
}
