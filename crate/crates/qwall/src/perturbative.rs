//! Perturbative force from the density matrix in the adiabatic basis.
//!
//! The density matrix of the suddenly-started wall is expanded as
//! rho = f(H) + g1 (Ldot0/L0) + g2 (Ldot0/L0)^2 + ..., driven by the
//! adiabatic coupling matrix gamma_{lm}. The force expectation splits into
//! S1 (adiabatic), S2 (first order) and S3 (second order); in the window
//! where the oscillatory factors average out, S2 and S3 reduce to closed
//! velocity-squared sums with prefactors 16 and 32 and their total defines
//! the coefficient C of F_nonad = C Ldot0^2 / L0.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::boxbasis::box_energy;
use crate::error::{QwallError, Result};
use crate::hardwall::CoefficientEstimate;
use crate::occupation::{adiabatic_force, OccupationModel};
use crate::schedule::{WallKind, WallSchedule};

pub use crate::hardwall::EvalMode;

/// gamma_{lm} = (-1)^{l+m+1} 2 l m / (l^2 - m^2) off-diagonal, zero on the
/// diagonal.
pub fn gamma(l: usize, m: usize) -> f64 {
    if l == m {
        return 0.0;
    }
    let (lf, mf) = (l as f64, m as f64);
    let s = if (l + m + 1) % 2 == 0 { 1.0 } else { -1.0 };
    s * 2.0 * lf * mf / (lf * lf - mf * mf)
}

/// Dense antisymmetric gamma table for indices 1..=n_max.
#[derive(Debug, Clone)]
pub struct GammaMatrix {
    pub n_max: usize,
    entries: Vec<f64>,
}

impl GammaMatrix {
    pub fn build(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(QwallError::Argument("GammaMatrix needs n_max >= 1".into()));
        }
        let mut entries = vec![0.0; n_max * n_max];
        for l in 1..=n_max {
            for m in 1..=n_max {
                entries[(l - 1) * n_max + (m - 1)] = gamma(l, m);
            }
        }
        Ok(Self { n_max, entries })
    }

    #[inline]
    pub fn get(&self, l: usize, m: usize) -> f64 {
        self.entries[(l - 1) * self.n_max + (m - 1)]
    }
}

fn require_linear(schedule: &WallSchedule) -> Result<()> {
    match schedule.kind {
        WallKind::Linear | WallKind::Fixed => Ok(()),
        _ => Err(QwallError::Validation(
            "the perturbative engine handles fixed and linear wall laws only".into(),
        )),
    }
}

/// First-order density correction
/// g1_nm = i hbar gamma_{mn}/(E_n - E_m) (1 - e^{(E_n - E_m) t/(i hbar)}) (f_n - f_m),
/// with the energies frozen at their t = 0 values. Zero on the diagonal.
pub fn g1_element(
    n: usize,
    m: usize,
    t: f64,
    schedule: &WallSchedule,
    model: &OccupationModel,
) -> Result<Complex64> {
    require_linear(schedule)?;
    if n == 0 || m == 0 {
        return Err(QwallError::Argument("level indices start at 1".into()));
    }
    if n == m {
        return Ok(Complex64::default());
    }
    let hbar = schedule.hbar;
    let en = box_energy(n, schedule.l0)?;
    let em = box_energy(m, schedule.l0)?;
    let de = en - em;
    let fn_ = model.weight(n, en);
    let fm = model.weight(m, em);
    // e^{de t/(i hbar)} = e^{-i de t/hbar}
    let phase = Complex64::from_polar(1.0, -de * t / hbar);
    Ok(Complex64::new(0.0, hbar * gamma(m, n) / de) * (1.0 - phase) * (fn_ - fm))
}

/// Second-order diagonal correction
/// g2_nn = -2 sum_l gamma_{nl}^2 (f_n - f_l) (hbar/(E_n - E_l))^2 (1 - cos((E_n - E_l) t / hbar)).
///
/// Truncation of the l-sum is reported through the returned tail bound.
pub fn g2_diagonal(
    n: usize,
    t: f64,
    schedule: &WallSchedule,
    model: &OccupationModel,
    n_max: usize,
) -> Result<CoefficientEstimate> {
    require_linear(schedule)?;
    if n == 0 {
        return Err(QwallError::Argument("level indices start at 1".into()));
    }
    let hbar = schedule.hbar;
    let en = box_energy(n, schedule.l0)?;
    let fn_ = model.weight(n, en);
    let mut s = 0.0;
    for l in 1..=n_max {
        if l == n {
            continue;
        }
        let el = box_energy(l, schedule.l0)?;
        let fl = model.weight(l, el);
        let de = en - el;
        let osc = 1.0 - (de * t / hbar).cos();
        s += -2.0 * gamma(n, l).powi(2) * (fn_ - fl) * (hbar / de).powi(2) * osc;
    }
    // |terms| <= 2 gamma^2 (f diff <= 1) (hbar/de)^2 * 2; gamma^2 (hbar/de)^2
    // ~ 64 n^2 L0^4 hbar^2 / (pi^4 l^6) for l >> n
    let nf = n as f64;
    let tail = 2.0 * 2.0 * 64.0 * nf * nf * schedule.l0.powi(4) * hbar * hbar
        / (PI.powi(4) * 5.0 * (n_max as f64).powi(5));
    Ok(CoefficientEstimate { value: s, tail_bound: tail })
}

/// Matrix element of the force operator in the adiabatic basis:
/// F_mn = (n pi)^2 / L^3 delta_mn + i hbar Ldot / L^2 gamma_mn.
pub fn force_matrix_element(m: usize, n: usize, l: f64, ldot: f64, hbar: f64) -> Complex64 {
    let diag = if m == n {
        (n as f64 * PI).powi(2) / (l * l * l)
    } else {
        0.0
    };
    Complex64::new(diag, hbar * ldot / (l * l) * gamma(m, n))
}

/// The three force contributions and their total.
#[derive(Debug, Clone, Copy)]
pub struct PerturbativeForce {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// Truncation tail bound on |S2 + S3|.
    pub tail_bound: f64,
    /// Set when t lies outside the sudden-start validity window.
    pub outside_window: bool,
}

impl PerturbativeForce {
    pub fn total(&self) -> f64 {
        self.s1 + self.s2 + self.s3
    }

    pub fn non_adiabatic(&self) -> f64 {
        self.s2 + self.s3
    }
}

/// Force expectation S1 + S2 + S3 at time t.
///
/// S1 uses the instantaneous length L(t). In instantaneous mode S2 and S3
/// carry their oscillatory (1 - cos) factors; in time-averaged mode those
/// factors are replaced by their window mean 1 and the reduced
/// velocity-squared forms (prefactors 16 and 32 over pi^2 L0) are returned.
pub fn perturbative_force(
    model: &OccupationModel,
    schedule: &WallSchedule,
    t: f64,
    n_max: usize,
    mode: EvalMode,
) -> Result<PerturbativeForce> {
    require_linear(schedule)?;
    let hbar = schedule.hbar;
    let (l, ldot, _) = schedule.eval_length(t)?;
    let l0 = schedule.l0;
    let ldot0 = schedule.ldot0;

    let s1 = adiabatic_force(model, l, n_max)?;

    let highest = model.highest_relevant(l0, n_max);
    let (w_lo, w_hi) = schedule.validity_window(highest);
    let outside_window = ldot0 != 0.0 && !(t > w_lo && t < w_hi);

    if ldot0 == 0.0 {
        return Ok(PerturbativeForce { s1, s2: 0.0, s3: 0.0, tail_bound: 0.0, outside_window });
    }

    let osc = |de: f64| match mode {
        EvalMode::TimeAveraged => 1.0,
        EvalMode::Instantaneous => 1.0 - (de * t / hbar).cos(),
    };
    // In time-averaged mode the reduced forms are exact L0-forms; keep the
    // instantaneous prefactors only in instantaneous mode.
    // S2 terms carry hbar^2 explicitly; S3 terms carry theirs via (hbar/dE)^2.
    let (pref2, pref3) = match mode {
        EvalMode::TimeAveraged => (
            2.0 * hbar * hbar * ldot0 * ldot0 / (l0 * l0 * l0),
            2.0 * PI * PI * ldot0 * ldot0 / (l0 * l0 * l0.powi(3)),
        ),
        EvalMode::Instantaneous => (
            2.0 * hbar * hbar * ldot * ldot0 / (l * l * l0),
            2.0 * PI * PI * ldot0 * ldot0 / (l0 * l0 * l * l * l),
        ),
    };

    let mut s2 = 0.0;
    let mut s2_flat = 0.0; // same sum with the oscillation factor at its mean
    for m in 1..=highest.min(n_max) {
        let em = box_energy(m, l0)?;
        let fm = model.weight(m, em);
        for n in (m + 1)..=n_max {
            let en = box_energy(n, l0)?;
            let fnn = model.weight(n, en);
            if fnn == fm {
                continue;
            }
            let de = en - em;
            let base = pref2 * gamma(m, n).powi(2) * (fnn - fm) / de;
            s2 += base * osc(de);
            s2_flat += base;
        }
    }

    let mut s3 = 0.0;
    let mut s3_flat = 0.0;
    for n in 1..=n_max {
        let en = box_energy(n, l0)?;
        let fnn = model.weight(n, en);
        let mut inner = 0.0;
        let mut inner_flat = 0.0;
        for ll in 1..=n_max {
            if ll == n {
                continue;
            }
            let el = box_energy(ll, l0)?;
            let fl = model.weight(ll, el);
            if fl == fnn {
                continue;
            }
            let de = en - el;
            let base = gamma(n, ll).powi(2) * (fnn - fl) * (hbar / de).powi(2);
            inner += base * osc(de);
            inner_flat += base;
        }
        s3 += pref3 * (n as f64).powi(2) * inner;
        s3_flat += pref3 * (n as f64).powi(2) * inner_flat;
    }

    // analytic 1/n^4 tail of the pair sums, judged against the
    // velocity-squared scale (the instantaneous value vanishes at t -> 0
    // for any truncation)
    let tail = 48.0 * hbar * hbar / (PI * PI) * ldot0 * ldot0 / l0
        * (highest as f64).powi(2)
        / (3.0 * (n_max as f64).powi(3));
    let scale = (s2 + s3).abs().max((s2_flat + s3_flat).abs());
    if scale > 0.0 && tail > 1e-6 * scale {
        return Err(QwallError::Truncation(format!(
            "S2+S3 tail bound {tail:.3e} exceeds 1e-6 x scale {:.3e}; raise n_max",
            1e-6 * scale
        )));
    }

    Ok(PerturbativeForce { s1, s2, s3, tail_bound: tail, outside_window })
}

/// Velocity-squared coefficient of the reduced non-adiabatic force,
/// C = (48 hbar^2/pi^2) sum_{n > m} m^2 n^2 (f_n - f_m)/(n^2 - m^2)^3,
/// truncated with an analytic tail bound.
pub fn coefficient_c(
    model: &OccupationModel,
    hbar: f64,
    l0: f64,
    n_max: usize,
) -> Result<CoefficientEstimate> {
    if n_max < 1000 {
        return Err(QwallError::Argument(format!(
            "coefficient C needs n_max >= 1000 for its tail budget, got {n_max}"
        )));
    }
    let highest = model.highest_relevant(l0, n_max);
    let mut s = 0.0;
    for m in 1..=highest {
        let em = box_energy(m, l0)?;
        let fm = model.weight(m, em);
        for n in (m + 1)..=n_max {
            let en = box_energy(n, l0)?;
            let fnn = model.weight(n, en);
            if fnn == fm {
                continue;
            }
            let (mf, nf) = (m as f64, n as f64);
            let d = nf * nf - mf * mf;
            let term = mf * mf * nf * nf * (fnn - fm) / (d * d * d);
            s += term;
            // the summand decays like 1/n^4: stop once terms are negligible
            if n > 2 * m && term.abs() < 1e-18 * s.abs() {
                break;
            }
        }
    }
    let value = 48.0 * hbar * hbar / (PI * PI) * s;
    let mut tail = 0.0;
    for m in 1..=highest {
        let r = m as f64 / n_max as f64;
        tail += 48.0 * hbar * hbar / (PI * PI) * (m as f64).powi(2)
            / ((1.0 - r * r).powi(3) * 3.0 * (n_max as f64).powi(3));
    }
    if tail > 1e-6 * value.abs() {
        return Err(QwallError::Truncation(format!(
            "C tail bound {tail:.3e} exceeds 1e-6 |C| = {:.3e}; raise n_max",
            1e-6 * value.abs()
        )));
    }
    Ok(CoefficientEstimate { value, tail_bound: tail })
}
