//! Statistical occupation of the single-particle levels and the adiabatic
//! force they exert.

use crate::boxbasis;
use crate::error::{QwallError, Result};

/// Fermi-Dirac weights (finite temperature) or sharp N-particle filling.
///
/// Zero temperature fills by *index* (f_n = 1 for n <= N), not by an energy
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OccupationModel {
    ZeroTemperature { n_particles: usize },
    FiniteTemperature { beta: f64, mu: f64 },
}

impl OccupationModel {
    pub fn zero_t(n_particles: usize) -> Result<Self> {
        if n_particles == 0 {
            return Err(QwallError::Argument(
                "zero-temperature filling needs at least one particle".into(),
            ));
        }
        Ok(Self::ZeroTemperature { n_particles })
    }

    pub fn finite_t(beta: f64, mu: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(QwallError::Argument(format!("need beta > 0, got {beta}")));
        }
        Ok(Self::FiniteTemperature { beta, mu })
    }

    /// Occupation weight f in [0, 1] of level `n` (1-based) with energy `e`.
    pub fn weight(&self, n: usize, e: f64) -> f64 {
        match *self {
            Self::ZeroTemperature { n_particles } => {
                if n >= 1 && n <= n_particles {
                    1.0
                } else {
                    0.0
                }
            }
            Self::FiniteTemperature { beta, mu } => {
                // overflow-safe logistic
                let x = beta * (e - mu);
                if x >= 0.0 {
                    let ex = (-x).exp();
                    ex / (1.0 + ex)
                } else {
                    1.0 / (1.0 + x.exp())
                }
            }
        }
    }

    /// Weight of box level n at cavity length L.
    pub fn weight_box(&self, n: usize, l: f64) -> f64 {
        self.weight(n, boxbasis::box_energy(n, l).unwrap_or(f64::INFINITY))
    }

    /// Highest index whose weight is non-negligible (> 1e-16), used to size
    /// truncations.
    pub fn highest_relevant(&self, l: f64, n_cap: usize) -> usize {
        match *self {
            Self::ZeroTemperature { n_particles } => n_particles,
            Self::FiniteTemperature { .. } => {
                let mut last = 1;
                for n in 1..=n_cap {
                    if self.weight_box(n, l) > 1e-16 {
                        last = n;
                    }
                }
                last
            }
        }
    }
}

/// Adiabatic force on the wall, F_ad = sum_n (n pi)^2 / L^3 f_n.
///
/// Zero temperature is an exact finite sum; finite temperature is truncated
/// at `n_max` and the convergence is checked by doubling n_max and requiring
/// a relative change below 1e-8.
pub fn adiabatic_force(model: &OccupationModel, l: f64, n_max: usize) -> Result<f64> {
    if !(l > 0.0) {
        return Err(QwallError::Argument(format!("need L > 0, got {l}")));
    }
    match *model {
        OccupationModel::ZeroTemperature { n_particles } => {
            Ok(partial_adiabatic_force(model, l, n_particles))
        }
        OccupationModel::FiniteTemperature { .. } => {
            let f1 = partial_adiabatic_force(model, l, n_max);
            let f2 = partial_adiabatic_force(model, l, 2 * n_max);
            if (f2 - f1).abs() > 1e-8 * f2.abs() {
                return Err(QwallError::Truncation(format!(
                    "adiabatic force not converged at n_max = {n_max}: {f1} vs {f2} at 2 n_max"
                )));
            }
            Ok(f2)
        }
    }
}

fn partial_adiabatic_force(model: &OccupationModel, l: f64, n_max: usize) -> f64 {
    let pi2 = std::f64::consts::PI.powi(2);
    (1..=n_max)
        .map(|n| (n * n) as f64 * pi2 / (l * l * l) * model.weight_box(n, l))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fermi_weight_symmetry_point() {
        let m = OccupationModel::finite_t(2.0, 5.0).unwrap();
        assert!((m.weight(1, 5.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_t_fills_by_index() {
        let m = OccupationModel::zero_t(3).unwrap();
        assert_eq!(m.weight(1, 0.0), 1.0);
        assert_eq!(m.weight(2, 0.0), 1.0);
        assert_eq!(m.weight(3, 0.0), 1.0);
        assert_eq!(m.weight(4, 0.0), 0.0);
    }

    #[test]
    fn degenerate_limit() {
        let m = OccupationModel::finite_t(1e6, 1.0).unwrap();
        assert!((m.weight(1, 0.5) - 1.0).abs() < 1e-12);
        assert!(m.weight(1, 1.5) < 1e-12);
    }

    #[test]
    fn adiabatic_force_values() {
        let m = OccupationModel::zero_t(1).unwrap();
        assert!((adiabatic_force(&m, 1.0, 64).unwrap() - PI * PI).abs() < 1e-12);
        assert!((adiabatic_force(&m, 2.0, 64).unwrap() - PI * PI / 8.0).abs() < 1e-13);
        let m2 = OccupationModel::zero_t(2).unwrap();
        assert!((adiabatic_force(&m2, 1.0, 64).unwrap() - 5.0 * PI * PI).abs() < 1e-11);
    }

    #[test]
    fn adiabatic_force_scales_as_inverse_cube() {
        let m = OccupationModel::finite_t(0.8, 30.0).unwrap();
        let f1 = adiabatic_force(&m, 1.0, 256).unwrap();
        let f2 = adiabatic_force(&m, 1.7, 256).unwrap();
        // F(L) L^3 is L-independent only at fixed weights; finite-T weights
        // depend on E_n(L), so compare at fixed spectrum via the zero-T model.
        let mz = OccupationModel::zero_t(4).unwrap();
        let g1 = adiabatic_force(&mz, 1.0, 64).unwrap();
        let g2 = adiabatic_force(&mz, 1.7, 64).unwrap();
        assert!((g1 - g2 * 1.7f64.powi(3)).abs() < 1e-10 * g1.abs());
        assert!(f1 > 0.0 && f2 > 0.0);
    }

    #[test]
    fn finite_t_monotone_in_energy() {
        let m = OccupationModel::finite_t(1.3, 40.0).unwrap();
        let mut prev = 1.0;
        for n in 1..=30 {
            let f = m.weight_box(n, 1.0);
            assert!(f <= prev + 1e-15);
            assert!((0.0..=1.0).contains(&f));
            prev = f;
        }
    }
}
