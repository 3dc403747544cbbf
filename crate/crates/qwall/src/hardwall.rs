//! Exact force computation for the linearly expanding hard-wall cavity.
//!
//! The working picture is the scaled/gauged wavefunction
//! phi(y, t) = sum_n c_n(t) sqrt(2) sin(n pi y), with
//! c_n(t) = c_n(0) exp(-i n^2 pi^2 tau / (2 hbar)) and
//! c_n(0) = 2 int_0^1 sin(l pi y) sin(n pi y) exp(-i hbar Ldot L0 y^2 / 2) dy.
//!
//! Observables:
//!   E = I0/(2 L^2) + (hbar Ldot / L) Im I1 + (hbar^2 Ldot^2 / 2) I2
//!   F = I0/L^3 + (hbar Ldot / L^2) Im I1     (adiabatic + non-adiabatic)
//! with I0 = int |phi_y|^2, I1 = int y phi* phi_y, I2 = int y^2 |phi|^2
//! expressed through the J tables.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{QwallError, Result};
use crate::jtable::JTable;
use crate::occupation::OccupationModel;
use crate::quad;
use crate::schedule::{WallKind, WallSchedule};
use crate::types::{BasisKind, EnergyBreakdown, ForceBreakdown, RawIntegrals, SpectralState};

/// Truncation budget for sum |c_n|^2 at the default n_max.
pub const TRUNCATION_EPS: f64 = 1e-8;

/// Relative step of the -dE/dL consistency check.
pub const FD_REL_STEP: f64 = 1e-5;

/// Tolerance of the operator-route vs -dE/dL consistency check.
pub const ROUTE_TOL: f64 = 1e-6;

/// How the oscillatory factor of Im I1 is treated.
///
/// `Instantaneous` keeps the full phase factors; `TimeAveraged` replaces the
/// cos(pi^2 (l^2 - n^2) tau / 2) factors of the second-order expansion by 1,
/// the reduction used to extract the velocity-squared coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    #[default]
    Instantaneous,
    TimeAveraged,
}

fn require_linear(schedule: &WallSchedule) -> Result<()> {
    match schedule.kind {
        WallKind::Linear | WallKind::Fixed => Ok(()),
        _ => Err(QwallError::Validation(
            "the hard-wall exact engine handles fixed and linear wall laws only".into(),
        )),
    }
}

/// Expansion coefficients c_n(0) of the sudden-start initial state over the
/// transitionless basis, by adaptive quadrature of the exact integrand.
pub fn initial_coefficients(
    level: usize,
    schedule: &WallSchedule,
    n_max: usize,
) -> Result<SpectralState> {
    require_linear(schedule)?;
    if level == 0 || level > n_max {
        return Err(QwallError::Argument(format!(
            "need 1 <= level <= n_max, got level {level}, n_max {n_max}"
        )));
    }
    let lam = 0.5 * schedule.hbar * schedule.ldot0 * schedule.l0;
    let lf = level as f64;
    let mut coeffs = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let nf = n as f64;
        let c = quad::integrate_complex(
            |y| {
                let trig = 2.0 * (lf * PI * y).sin() * (nf * PI * y).sin();
                Complex64::from_polar(trig, -lam * y * y)
            },
            0.0,
            1.0,
            quad::HOUSE_ABS_TOL,
        )?;
        coeffs.push(c);
    }
    let state = SpectralState::new(BasisKind::BoxSine, coeffs, level);
    state.check_truncation(TRUNCATION_EPS)?;
    Ok(state)
}

/// Second-order expansion of the same coefficients through the J tables:
/// c_n(0) ~ delta_{nl} - i lam J2(n,l) - lam^2/2 J3(n,l), lam = hbar Ldot L0/2.
///
/// This is the comparison path for the small-velocity expansions; the exact
/// engine itself always uses the quadrature coefficients.
pub fn initial_coefficients_expansion(
    level: usize,
    schedule: &WallSchedule,
    jt: &JTable,
) -> Result<SpectralState> {
    require_linear(schedule)?;
    if level == 0 || level > jt.n_max {
        return Err(QwallError::Argument(format!(
            "need 1 <= level <= n_max, got level {level}, n_max {}",
            jt.n_max
        )));
    }
    let lam = 0.5 * schedule.hbar * schedule.ldot0 * schedule.l0;
    let coeffs = (1..=jt.n_max)
        .map(|n| {
            let kro = if n == level { 1.0 } else { 0.0 };
            Complex64::new(kro - 0.5 * lam * lam * jt.j3(n, level), -lam * jt.j2(n, level))
        })
        .collect();
    Ok(SpectralState::new(BasisKind::BoxSine, coeffs, level))
}

/// Phase evolution c_n(tau) = c_n(0) exp(-i n^2 pi^2 tau / (2 hbar)).
pub fn propagate(state: &SpectralState, tau: f64, hbar: f64) -> SpectralState {
    let coeffs = state
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = (i + 1) as f64;
            c * Complex64::from_polar(1.0, -n * n * PI * PI * tau / (2.0 * hbar))
        })
        .collect();
    SpectralState::new(state.basis, coeffs, state.source_level)
}

/// I0 = pi^2 sum |c_n|^2 n^2 (constant along the trajectory).
pub fn i0_from_coeffs(state: &SpectralState) -> f64 {
    state
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = (i + 1) as f64;
            PI * PI * n * n * c.norm_sqr()
        })
        .sum()
}

/// I1 = sum_{n', n} c*_{n'} c_n n pi J1(n, n').
pub fn i1_from_coeffs(state: &SpectralState, jt: &JTable) -> Complex64 {
    let n_max = state.n_max();
    assert!(jt.n_max >= n_max, "JTable smaller than the state");
    let mut acc = Complex64::default();
    for (ip, cp) in state.coeffs.iter().enumerate() {
        let mut inner = Complex64::default();
        for (jn, cn) in state.coeffs.iter().enumerate() {
            inner += cn * ((jn + 1) as f64 * PI * jt.j1(jn + 1, ip + 1));
        }
        acc += cp.conj() * inner;
    }
    acc
}

/// I2 = sum_{n', n} c*_{n'} c_n J2(n, n') (real by symmetry).
pub fn i2_from_coeffs(state: &SpectralState, jt: &JTable) -> f64 {
    let n_max = state.n_max();
    assert!(jt.n_max >= n_max, "JTable smaller than the state");
    let mut acc = Complex64::default();
    for (ip, cp) in state.coeffs.iter().enumerate() {
        let mut inner = Complex64::default();
        for (jn, cn) in state.coeffs.iter().enumerate() {
            inner += cn * jt.j2(jn + 1, ip + 1);
        }
        acc += cp.conj() * inner;
    }
    acc.re
}

/// Average energy and its raw integrals at wall state (L, Ldot).
pub fn energy_expectation(
    state: &SpectralState,
    l: f64,
    ldot: f64,
    hbar: f64,
    jt: &JTable,
) -> EnergyBreakdown {
    let i0 = i0_from_coeffs(state);
    let im_i1 = i1_from_coeffs(state, jt).im;
    let i2 = i2_from_coeffs(state, jt);
    let energy = i0 / (2.0 * l * l) + hbar * ldot / l * im_i1 + 0.5 * hbar * hbar * ldot * ldot * i2;
    EnergyBreakdown { energy, i0, im_i1, i2 }
}

/// Operator-route force and the -dE/dL route side by side.
///
/// The energy derivative is taken with the raw integrals frozen (they carry
/// the t-dependence of the phases, not of L), by central finite difference
/// with step `FD_REL_STEP * L`.
pub fn force_routes(
    state: &SpectralState,
    l: f64,
    ldot: f64,
    hbar: f64,
    jt: &JTable,
) -> (f64, f64) {
    let eb = energy_expectation(state, l, ldot, hbar, jt);
    let f_op = eb.i0 / (l * l * l) + hbar * ldot / (l * l) * eb.im_i1;
    let energy_at = |lv: f64| {
        eb.i0 / (2.0 * lv * lv) + hbar * ldot / lv * eb.im_i1
            + 0.5 * hbar * hbar * ldot * ldot * eb.i2
    };
    let dl = FD_REL_STEP * l;
    let f_fd = -(energy_at(l + dl) - energy_at(l - dl)) / (2.0 * dl);
    (f_op, f_fd)
}

/// Force by the operator route, asserted against the -dE/dL route at
/// `ROUTE_TOL` relative.
pub fn force_exact(
    state: &SpectralState,
    l: f64,
    ldot: f64,
    hbar: f64,
    jt: &JTable,
) -> Result<ForceBreakdown> {
    let eb = energy_expectation(state, l, ldot, hbar, jt);
    let adiabatic = eb.i0 / (l * l * l);
    let non_adiabatic = hbar * ldot / (l * l) * eb.im_i1;
    let (f_op, f_fd) = force_routes(state, l, ldot, hbar, jt);
    if (f_fd - f_op).abs() > ROUTE_TOL * f_op.abs().max(1e-300) {
        return Err(QwallError::Consistency(format!(
            "force routes disagree: operator {f_op:.12e} vs -dE/dL {f_fd:.12e}"
        )));
    }
    Ok(ForceBreakdown {
        adiabatic,
        non_adiabatic,
        raw: RawIntegrals::Box { i0: eb.i0, im_i1: eb.im_i1, i2: eb.i2 },
    })
}

/// Im I1 of the O(Ldot) expansion with the evaluation-mode switch:
/// Im I1 = -hbar Ldot0 L0 (16/pi^2) sum_{n != l} (n l)^2/(n^2-l^2)^3 cos(...),
/// the cos factor being cos(pi^2 (l^2 - n^2) tau / 2 hbar) instantaneous or 1
/// time-averaged.
pub fn im_i1_expansion(
    level: usize,
    schedule: &WallSchedule,
    n_max: usize,
    tau: f64,
    mode: EvalMode,
) -> f64 {
    let lf = level as f64;
    let pref = -schedule.hbar * schedule.ldot0 * schedule.l0 * 16.0 / (PI * PI);
    let mut s = 0.0;
    for n in 1..=n_max {
        if n == level {
            continue;
        }
        let nf = n as f64;
        let d = nf * nf - lf * lf;
        let cosf = match mode {
            EvalMode::TimeAveraged => 1.0,
            EvalMode::Instantaneous => {
                (PI * PI * (lf * lf - nf * nf) * tau / (2.0 * schedule.hbar)).cos()
            }
        };
        s += (nf * lf).powi(2) / (d * d * d) * cosf;
    }
    pref * s
}

/// One sampled point of an exact trajectory.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub t: f64,
    pub l: f64,
    pub ldot: f64,
    pub tau: f64,
    pub energy: EnergyBreakdown,
    pub force: ForceBreakdown,
}

/// Exact trajectory of a single sudden-start level under a linear wall law.
#[derive(Debug, Clone)]
pub struct ExactTrajectory {
    pub schedule: WallSchedule,
    pub state0: SpectralState,
    pub samples: Vec<TrajectorySample>,
}

/// Runs the exact engine over a time grid. In time-averaged mode the
/// non-adiabatic term is replaced by its cos -> 1 expansion value.
pub fn trajectory(
    level: usize,
    schedule: &WallSchedule,
    n_max: usize,
    times: &[f64],
    mode: EvalMode,
    jt: &JTable,
) -> Result<ExactTrajectory> {
    let state0 = initial_coefficients(level, schedule, n_max)?;
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let (l, ldot, _) = schedule.eval_length(t)?;
        let tau = schedule.scaled_time(t)?;
        let state = propagate(&state0, tau, schedule.hbar);
        let energy = energy_expectation(&state, l, ldot, schedule.hbar, jt);
        let force = match mode {
            EvalMode::Instantaneous => force_exact(&state, l, ldot, schedule.hbar, jt)?,
            EvalMode::TimeAveraged => {
                let im_i1 = im_i1_expansion(level, schedule, n_max, tau, mode);
                let adiabatic = energy.i0 / (l * l * l);
                ForceBreakdown {
                    adiabatic,
                    non_adiabatic: schedule.hbar * ldot / (l * l) * im_i1,
                    raw: RawIntegrals::Box { i0: energy.i0, im_i1, i2: energy.i2 },
                }
            }
        };
        samples.push(TrajectorySample { t, l, ldot, tau, energy, force });
    }
    Ok(ExactTrajectory { schedule: *schedule, state0, samples })
}

/// Exact-route velocity-squared coefficient
/// C' = -(16 hbar^2/pi^2) sum_l f_l sum_{n != l} (n l)^2/(n^2 - l^2)^3,
/// the time-averaged non-adiabatic force being C' Ldot0^2 / L0.
///
/// The double sum is truncated at `n_max` with an analytic 1/n^4 tail bound;
/// the tail must stay below 1e-6 |C'|.
pub fn nonadiabatic_coefficient_exact(
    model: &OccupationModel,
    schedule: &WallSchedule,
    n_max: usize,
) -> Result<CoefficientEstimate> {
    let highest = model.highest_relevant(schedule.l0, n_max);
    if n_max < 4 * highest {
        return Err(QwallError::Argument(format!(
            "n_max = {n_max} too small: need >= 4 x highest occupied index ({highest})"
        )));
    }
    let h2 = schedule.hbar * schedule.hbar;
    let mut value = 0.0;
    let mut tail = 0.0;
    for l in 1..=highest {
        let f = model.weight_box(l, schedule.l0);
        if f <= 0.0 {
            continue;
        }
        let lf = l as f64;
        let mut s = 0.0;
        for n in 1..=n_max {
            if n == l {
                continue;
            }
            let nf = n as f64;
            let d = nf * nf - lf * lf;
            s += (nf * lf).powi(2) / (d * d * d);
        }
        value += -16.0 * h2 / (PI * PI) * f * s;
        // tail: sum_{n > n_max} (n l)^2/(n^2-l^2)^3 <= l^2/(1-r^2)^3 / (3 n_max^3)
        let r = lf / n_max as f64;
        tail += 16.0 * h2 / (PI * PI) * f * lf * lf
            / ((1.0 - r * r).powi(3) * 3.0 * (n_max as f64).powi(3));
    }
    if tail > 1e-6 * value.abs() {
        return Err(QwallError::Truncation(format!(
            "C' tail estimate {tail:.3e} exceeds 1e-6 |C'| = {:.3e}",
            1e-6 * value.abs()
        )));
    }
    Ok(CoefficientEstimate { value, tail_bound: tail })
}

/// A truncated-series coefficient together with its tail bound.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientEstimate {
    pub value: f64,
    pub tail_bound: f64,
}
