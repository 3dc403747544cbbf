//! Adiabatic eigensystem of the hard-wall box: E_n = n^2 pi^2/(2 L^2) and
//! psi_n(x) = sqrt(2/L) sin(n pi x / L), in units hbar^2/m = 1.

use crate::error::{QwallError, Result};

/// Box level energy E_n = n^2 pi^2 / (2 L^2).
pub fn box_energy(n: usize, l: f64) -> Result<f64> {
    if n == 0 {
        return Err(QwallError::Argument("box level index starts at n = 1".into()));
    }
    if !(l > 0.0) {
        return Err(QwallError::Argument(format!("need L > 0, got {l}")));
    }
    let np = n as f64 * std::f64::consts::PI;
    Ok(np * np / (2.0 * l * l))
}

/// Eigenvalue and normalized eigenfunction profile of box level n.
pub fn box_eigensystem(n: usize, l: f64) -> Result<(f64, impl Fn(f64) -> f64)> {
    let e = box_energy(n, l)?;
    let k = n as f64 * std::f64::consts::PI / l;
    let amp = (2.0 / l).sqrt();
    Ok((e, move |x: f64| amp * (k * x).sin()))
}
