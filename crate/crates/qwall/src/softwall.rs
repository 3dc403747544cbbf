//! Soft-wall engine: a harmonic trap whose confining length L(t) = L0 + Ldot t
//! sets the frequency through hbar w(t) = 1/L^2(t).
//!
//! In the scaled/gauged picture the modes are the fixed oscillator functions
//! Y_n with eigenvalues hbar (n + 1/2), and states evolve by the pure phases
//! c_n(t) = c_n(0) e^{-i (n + 1/2) tau(t)}. The energy and force are
//!
//!   E = K0/(2 L^2) + (hbar Ldot / L) Im K1 + (hbar^2 Ldot^2 / 2) K2,
//!   F = K0/L^3 + (hbar Ldot / L^2) Im K1,
//!
//! K0 = int (|phi_y|^2 + hbar^2 y^2 |phi|^2), K1 = int y phi* phi_y,
//! K2 = int y^2 |phi|^2. All three come from the ladder matrix elements in
//! the Hermite basis; quadrature is the test oracle.

use num_complex::Complex64;

use crate::error::{QwallError, Result};
use crate::hermite::HermiteBasis;
use crate::occupation::OccupationModel;
use crate::schedule::{WallKind, WallSchedule};
use crate::types::{BasisKind, ForceBreakdown, RawIntegrals, SpectralState};

/// Norm deficit allowed before the quadrature degree is declared
/// insufficient.
pub const NORM_DEFICIT_TOL: f64 = 1e-8;

fn require_linear(schedule: &WallSchedule) -> Result<()> {
    match schedule.kind {
        WallKind::Linear | WallKind::Fixed => Ok(()),
        _ => Err(QwallError::Validation(
            "the soft-wall engine handles fixed and linear confining lengths only".into(),
        )),
    }
}

/// Envelope-stripped basis values Y_n(y) e^{+hbar y^2/2} (polynomial growth
/// only), used against the Gauss-Hermite weight.
fn y_stripped(n_max: usize, y: f64, hbar: f64) -> Vec<f64> {
    let z = hbar.sqrt() * y;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut y0 = (hbar.sqrt() / std::f64::consts::PI.sqrt()).sqrt();
    out.push(y0);
    if n_max == 0 {
        return out;
    }
    let mut y1 = std::f64::consts::SQRT_2 * z * y0;
    out.push(y1);
    for k in 1..n_max {
        let y2 = z * (2.0 / (k as f64 + 1.0)).sqrt() * y1 - (k as f64 / (k as f64 + 1.0)).sqrt() * y0;
        y0 = y1;
        y1 = y2;
        out.push(y1);
    }
    out
}

/// Expansion coefficients c_n = int Y_l Y_n e^{-i hbar Ldot(0) L(0) y^2 / 2} dy
/// of the sudden-start initial state, by Gauss-Hermite quadrature.
///
/// Parity makes c_n vanish exactly for odd n + l; those entries are zeroed.
pub fn softwall_coefficients(
    level: usize,
    schedule: &WallSchedule,
    basis: &HermiteBasis,
) -> Result<SpectralState> {
    require_linear(schedule)?;
    if (schedule.hbar - basis.hbar).abs() > 1e-15 * schedule.hbar {
        return Err(QwallError::Validation(
            "basis hbar does not match the schedule hbar".into(),
        ));
    }
    if level >= basis.n_max {
        return Err(QwallError::Argument(format!(
            "need level < n_max, got {level} / {}",
            basis.n_max
        )));
    }
    let lam = 0.5 * schedule.hbar * schedule.ldot0 * schedule.l0;
    let n_max = basis.n_max;
    let mut coeffs = vec![Complex64::default(); n_max];
    // accumulate per node: stripped values against the weight
    let mut acc = vec![Complex64::default(); n_max];
    for (&y, &w) in basis.nodes.iter().zip(&basis.weights) {
        let ys = y_stripped(n_max - 1, y, basis.hbar);
        let phase = Complex64::from_polar(w * ys[level], -lam * y * y);
        for n in 0..n_max {
            acc[n] += phase * ys[n];
        }
    }
    for n in 0..n_max {
        coeffs[n] = if (n + level) % 2 == 0 { acc[n] } else { Complex64::default() };
    }
    let state = SpectralState::new(BasisKind::Hermite, coeffs, level);
    let deficit = 1.0 - state.norm_sqr();
    if deficit.abs() > NORM_DEFICIT_TOL {
        return Err(QwallError::Numeric(format!(
            "Gauss-Hermite degree insufficient: norm deficit {deficit:.3e}"
        )));
    }
    Ok(state)
}

/// Phase evolution c_n(t) = c_n(0) e^{-i (n + 1/2) tau}.
pub fn propagate(state: &SpectralState, tau: f64) -> SpectralState {
    let coeffs = state
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64 + 0.5) * tau))
        .collect();
    SpectralState::new(state.basis, coeffs, state.source_level)
}

/// K-integrals from the coefficient (ladder) algebra: K0 is diagonal,
/// K1 couples n to n +- 2, K2 is the scaled xi^2 matrix.
pub fn k_integrals(state: &SpectralState, basis: &HermiteBasis) -> (f64, Complex64, f64) {
    let hbar = basis.hbar;
    let n = state.n_max();
    let mut k0 = 0.0;
    let mut k1 = Complex64::default();
    let mut k2 = Complex64::default();
    for i in 0..n {
        k0 += 2.0 * hbar * (i as f64 + 0.5) * state.coeffs[i].norm_sqr();
        for j in 0..n {
            let pair = state.coeffs[i].conj() * state.coeffs[j];
            let d = basis.xi_dxi(i, j);
            if d != 0.0 {
                k1 += pair * d;
            }
            let x2 = basis.xi2(i, j);
            if x2 != 0.0 {
                k2 += pair * (x2 / hbar);
            }
        }
    }
    (k0, k1, k2.re)
}

/// Operator-route force and the -dE/dL route (central difference at frozen
/// K-integrals) side by side.
pub fn force_routes(
    state: &SpectralState,
    schedule: &WallSchedule,
    t: f64,
    basis: &HermiteBasis,
) -> Result<(f64, f64)> {
    let (l, ldot, _) = schedule.eval_length(t)?;
    let hbar = schedule.hbar;
    let (k0, k1, k2) = k_integrals(state, basis);
    let f_op = k0 / (l * l * l) + hbar * ldot / (l * l) * k1.im;
    let e_at = |lv: f64| {
        k0 / (2.0 * lv * lv) + hbar * ldot / lv * k1.im + 0.5 * hbar * hbar * ldot * ldot * k2
    };
    let dl = crate::hardwall::FD_REL_STEP * l;
    let f_fd = -(e_at(l + dl) - e_at(l - dl)) / (2.0 * dl);
    Ok((f_op, f_fd))
}

/// Energy and force with the operator-vs-(-dE/dL) consistency check (the
/// derivative is taken at frozen K-integrals, central difference).
pub fn softwall_energy_force(
    state: &SpectralState,
    schedule: &WallSchedule,
    t: f64,
    basis: &HermiteBasis,
) -> Result<(f64, ForceBreakdown)> {
    require_linear(schedule)?;
    let (l, ldot, _) = schedule.eval_length(t)?;
    let hbar = schedule.hbar;
    let (k0, k1, k2) = k_integrals(state, basis);
    let energy = k0 / (2.0 * l * l) + hbar * ldot / l * k1.im + 0.5 * hbar * hbar * ldot * ldot * k2;
    let adiabatic = k0 / (l * l * l);
    let non_adiabatic = hbar * ldot / (l * l) * k1.im;
    let (f_op, f_fd) = force_routes(state, schedule, t, basis)?;
    if (f_fd - f_op).abs() > crate::hardwall::ROUTE_TOL * f_op.abs().max(1e-300) {
        return Err(QwallError::Consistency(format!(
            "soft-wall force routes disagree: operator {f_op:.12e} vs -dE/dL {f_fd:.12e}"
        )));
    }
    Ok((
        energy,
        ForceBreakdown {
            adiabatic,
            non_adiabatic,
            raw: RawIntegrals::Trap { k0, im_k1: k1.im, k2 },
        },
    ))
}

/// Convenience: initial state at `level`, evolved to t, energy and force.
pub fn trajectory_point(
    level: usize,
    schedule: &WallSchedule,
    basis: &HermiteBasis,
    t: f64,
) -> Result<(f64, ForceBreakdown)> {
    let c0 = softwall_coefficients(level, schedule, basis)?;
    let tau = schedule.scaled_time(t)?;
    let ct = propagate(&c0, tau);
    softwall_energy_force(&ct, schedule, t, basis)
}

/// Velocity-squared coefficient of the soft wall: the O(Ldot) ladder algebra
/// gives Im K1 = -Ldot0 L0 (l + 1/2) cos(2 tau), so with the oscillation at
/// its mean the non-adiabatic force is C_soft Ldot0^2/L0 with
/// C_soft = -hbar sum_l f_l (l + 1/2) < 0.
pub fn softwall_coefficient(model: &OccupationModel, schedule: &WallSchedule, n_max: usize) -> f64 {
    let mut c = 0.0;
    for l in 0..n_max {
        // oscillator levels are indexed from 0; occupation by 1-based index
        let f = model.weight(l + 1, (l as f64 + 0.5) * schedule.hbar / (schedule.l0 * schedule.l0));
        c += -schedule.hbar * f * (l as f64 + 0.5);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_velocity_coefficients_are_kronecker() {
        let w = WallSchedule::linear(1.0, 0.0).unwrap();
        let b = HermiteBasis::build(24, 1.0).unwrap();
        let st = softwall_coefficients(3, &w, &b).unwrap();
        for (n, c) in st.coeffs.iter().enumerate() {
            let want = if n == 3 { 1.0 } else { 0.0 };
            assert!((c.re - want).abs() < 1e-10 && c.im.abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn parity_selection_and_norm() {
        // hbar Ldot L = 0.2
        let w = WallSchedule::linear(1.0, 0.2).unwrap();
        let b = HermiteBasis::build(64, 1.0).unwrap();
        let st = softwall_coefficients(2, &w, &b).unwrap();
        for (n, c) in st.coeffs.iter().enumerate() {
            if (n + 2) % 2 == 1 {
                assert_eq!(c.norm(), 0.0, "n={n}");
            }
        }
        let s = st.norm_sqr();
        assert!(1.0 - s < 1e-8, "{s}");
    }

    #[test]
    fn stationary_levels_energy_and_force() {
        // Ldot = 0, level l: E = (l + 1/2)/L^2 (hbar = 1) and F = 2(l+1/2)/L^3
        let l_len = 1.7;
        let w = WallSchedule::linear(l_len, 0.0).unwrap();
        let b = HermiteBasis::build(24, 1.0).unwrap();
        for level in [0usize, 1, 4] {
            let (e, f) = trajectory_point(level, &w, &b, 0.9).unwrap();
            let want_e = (level as f64 + 0.5) / (l_len * l_len);
            assert!((e - want_e).abs() < 1e-12, "E({level}) = {e} vs {want_e}");
            let want_f = 2.0 * (level as f64 + 0.5) / l_len.powi(3);
            assert!((f.total() - want_f).abs() < 1e-12);
            assert_eq!(f.non_adiabatic, 0.0);
        }
    }

    #[test]
    fn virial_balance_of_k0() {
        // stationary state: kinetic part = potential part = hbar (l + 1/2)/... each
        let b = HermiteBasis::build(16, 1.0).unwrap();
        let level = 2usize;
        let coeffs: Vec<Complex64> = (0..16)
            .map(|n| Complex64::new(if n == level { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let st = SpectralState::new(BasisKind::Hermite, coeffs, level);
        let (k0, _, k2) = k_integrals(&st, &b);
        let potential = b.hbar * b.hbar * k2; // hbar^2 int y^2 |phi|^2
        let kinetic = k0 - potential;
        assert!((kinetic - potential).abs() < 1e-10, "{kinetic} vs {potential}");
    }

    #[test]
    fn ladder_k_integrals_match_quadrature() {
        let w = WallSchedule::linear(1.0, 0.15).unwrap();
        let b = HermiteBasis::build(48, 1.0).unwrap();
        let st0 = softwall_coefficients(1, &w, &b).unwrap();
        let st = propagate(&st0, 0.37);
        let (k0, k1, k2) = k_integrals(&st, &b);
        // quadrature oracle: phi and phi_y on the Gauss-Hermite nodes,
        // envelope-stripped against the weight
        let hbar = b.hbar;
        let (mut q0, mut q1, mut q2) = (0.0, Complex64::default(), 0.0);
        for (&y, &wq) in b.nodes.iter().zip(&b.weights) {
            let ys = y_stripped(b.n_max - 1, y, hbar);
            let mut phi_s = Complex64::default(); // phi e^{+hbar y^2/2}
            let mut dphi_s = Complex64::default(); // phi_y e^{+hbar y^2/2}
            for n in 0..b.n_max {
                let c = st.coeffs[n];
                phi_s += c * ys[n];
                // Y_n' = sqrt(hbar) (sqrt(n/2) Y_{n-1} - sqrt((n+1)/2) Y_{n+1})
                let mut d = 0.0;
                if n >= 1 {
                    d += hbar.sqrt() * ((n as f64) / 2.0).sqrt() * ys[n - 1];
                }
                // stripped Y_{n+1} from the recurrence one step further
                let ynp1 = if n + 1 < ys.len() {
                    ys[n + 1]
                } else {
                    let z = hbar.sqrt() * y;
                    z * (2.0 / (n as f64 + 1.0)).sqrt() * ys[n]
                        - ((n as f64) / (n as f64 + 1.0)).sqrt() * ys[n - 1]
                };
                d -= hbar.sqrt() * ((n as f64 + 1.0) / 2.0).sqrt() * ynp1;
                dphi_s += c * d;
            }
            q0 += wq * (dphi_s.norm_sqr() + hbar * hbar * y * y * phi_s.norm_sqr());
            q1 += wq * y * phi_s.conj() * dphi_s;
            q2 += wq * y * y * phi_s.norm_sqr();
        }
        assert!((q0 - k0).abs() < 1e-8, "K0 {k0} vs {q0}");
        assert!((q1.im - k1.im).abs() < 1e-8, "Im K1 {} vs {}", k1.im, q1.im);
        assert!((q2 - k2).abs() < 1e-8, "K2 {k2} vs {q2}");
    }

    #[test]
    fn nonadiabatic_force_even_in_velocity() {
        let b = HermiteBasis::build(48, 1.0).unwrap();
        let mut vals = Vec::new();
        for ld in [0.03, -0.03] {
            let w = WallSchedule::linear(1.0, ld).unwrap();
            let (_, f) = trajectory_point(0, &w, &b, 0.0).unwrap();
            vals.push(f.non_adiabatic);
        }
        assert!((vals[0] - vals[1]).abs() <= 1e-9 * vals[0].abs(), "{vals:?}");
    }

    #[test]
    fn coefficient_negative_and_quadratic_law() {
        let b = HermiteBasis::build(48, 1.0).unwrap();
        let model = OccupationModel::zero_t(1).unwrap();
        let mut pts = Vec::new();
        for ld in [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2] {
            let w = WallSchedule::linear(1.0, ld).unwrap();
            let (_, f) = trajectory_point(0, &w, &b, 0.0).unwrap();
            pts.push((ld, f.non_adiabatic.abs()));
            assert!(f.non_adiabatic < 0.0);
        }
        let n = pts.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &(x, y) in &pts {
            let (lx, ly) = (x.ln(), y.ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope - 2.0).abs() <= 0.05, "slope {slope}");
        // C_soft at l=0, hbar=1: -(0 + 1/2)
        let w = WallSchedule::linear(1.0, 1e-3).unwrap();
        let c = softwall_coefficient(&model, &w, 48);
        assert!(c < 0.0);
        assert!((c + 0.5).abs() < 1e-12);
        let f0 = trajectory_point(0, &w, &b, 0.0).unwrap().1.non_adiabatic;
        assert!((f0 - c * w.ldot0 * w.ldot0 / w.l0).abs() < 1e-6 * f0.abs());
    }
}
