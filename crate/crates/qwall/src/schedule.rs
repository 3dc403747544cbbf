//! Wall-motion schedules: the cavity length law L(t), its derivatives, the
//! scaled time tau = int dt/L^2, and the sudden-start validity window.

use crate::error::{QwallError, Result};
use crate::quad;

/// How the cavity length L(t) evolves.
///
/// The sqrt-law L(t) = sqrt(a t^2 + b t + c) is the general family with
/// L^3 L'' constant (= -B^2/4, B^2 = b^2 - 4ac); a fixed wall and the
/// linearly moving wall are its closed-form special cases, kept as explicit
/// kinds so their exact expressions are used directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WallKind {
    Fixed,
    Linear,
    SqrtLaw { a: f64, b: f64, c: f64 },
}

/// The cavity length law together with the model's hbar.
///
/// Units follow the prescription hbar^2/m = 1, which makes the box spectrum
/// E_n = n^2 pi^2 / (2 L^2) independent of hbar; hbar itself survives only in
/// phases, gauge factors and the velocity-dependent force terms.
#[derive(Debug, Clone, Copy)]
pub struct WallSchedule {
    pub kind: WallKind,
    /// Length at t = 0.
    pub l0: f64,
    /// Wall velocity at t = 0.
    pub ldot0: f64,
    /// Reduced Planck constant in model units (default 1).
    pub hbar: f64,
}

impl WallSchedule {
    pub fn fixed(l0: f64) -> Result<Self> {
        Self::validated(WallKind::Fixed, l0, 0.0, 1.0)
    }

    pub fn linear(l0: f64, ldot0: f64) -> Result<Self> {
        Self::validated(WallKind::Linear, l0, ldot0, 1.0)
    }

    /// L(t) = sqrt(a t^2 + b t + c); requires c = L0^2 > 0.
    pub fn sqrt_law(a: f64, b: f64, c: f64) -> Result<Self> {
        if c <= 0.0 {
            return Err(QwallError::Validation(format!(
                "sqrt-law needs c = L0^2 > 0, got c = {c}"
            )));
        }
        let l0 = c.sqrt();
        let ldot0 = b / (2.0 * l0);
        Self::validated(WallKind::SqrtLaw { a, b, c }, l0, ldot0, 1.0)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    fn validated(kind: WallKind, l0: f64, ldot0: f64, hbar: f64) -> Result<Self> {
        if !(l0 > 0.0) {
            return Err(QwallError::Validation(format!("need L0 > 0, got {l0}")));
        }
        if !(hbar > 0.0) {
            return Err(QwallError::Validation(format!("need hbar > 0, got {hbar}")));
        }
        Ok(Self { kind, l0, ldot0, hbar })
    }

    /// The invariant B^2 = b^2 - 4ac of L^3 L'' = -B^2/4 (zero for fixed and
    /// linear laws).
    pub fn b_squared(&self) -> f64 {
        match self.kind {
            WallKind::Fixed | WallKind::Linear => 0.0,
            WallKind::SqrtLaw { a, b, c } => b * b - 4.0 * a * c,
        }
    }

    /// Earliest positive time at which L(t) reaches zero, if any.
    pub fn zero_crossing(&self) -> Option<f64> {
        match self.kind {
            WallKind::Fixed => None,
            WallKind::Linear => {
                if self.ldot0 < 0.0 {
                    Some(-self.l0 / self.ldot0)
                } else {
                    None
                }
            }
            WallKind::SqrtLaw { a, b, c } => {
                // smallest positive root of a t^2 + b t + c = 0
                let disc = b * b - 4.0 * a * c;
                if disc < 0.0 {
                    return None;
                }
                let sq = disc.sqrt();
                let roots = if a != 0.0 {
                    [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)]
                } else if b != 0.0 {
                    [-c / b, f64::INFINITY]
                } else {
                    return None;
                };
                roots
                    .into_iter()
                    .filter(|t| *t > 0.0 && t.is_finite())
                    .fold(None, |acc: Option<f64>, t| {
                        Some(acc.map_or(t, |x| x.min(t)))
                    })
            }
        }
    }

    /// L(t), L'(t), L''(t); errors out (naming the crossing time) if the law
    /// has hit zero anywhere on [0, t].
    pub fn eval_length(&self, t: f64) -> Result<(f64, f64, f64)> {
        if let Some(tz) = self.zero_crossing() {
            if t >= tz {
                return Err(QwallError::Domain(format!(
                    "L(t) is non-positive at t = {t}: the wall law crosses zero at t = {tz}"
                )));
            }
        }
        Ok(match self.kind {
            WallKind::Fixed => (self.l0, 0.0, 0.0),
            WallKind::Linear => (self.l0 + self.ldot0 * t, self.ldot0, 0.0),
            WallKind::SqrtLaw { a, b, c } => {
                let l = (a * t * t + b * t + c).sqrt();
                let ldot = (2.0 * a * t + b) / (2.0 * l);
                let lddot = -self.b_squared() / (4.0 * l * l * l);
                (l, ldot, lddot)
            }
        })
    }

    /// Scaled time tau(t) = int_0^t ds / L^2(s), by the closed form of each
    /// kind.
    pub fn scaled_time(&self, t: f64) -> Result<f64> {
        if let Some(tz) = self.zero_crossing() {
            if t >= tz {
                return Err(QwallError::Domain(format!(
                    "scaled time diverges: L(s) vanishes at s = {tz} inside [0, {t}]"
                )));
            }
        }
        Ok(match self.kind {
            WallKind::Fixed => t / (self.l0 * self.l0),
            WallKind::Linear => {
                let l = self.l0 + self.ldot0 * t;
                t / (self.l0 * l)
            }
            WallKind::SqrtLaw { a, b, c } => sqrtlaw_tau(a, b, c, t),
        })
    }

    /// Scaled time by adaptive quadrature; the oracle for the closed forms.
    pub fn scaled_time_quadrature(&self, t: f64) -> Result<f64> {
        let me = *self;
        quad::integrate(
            move |s| {
                let (l, _, _) = me.eval_length(s).unwrap_or((f64::NAN, 0.0, 0.0));
                1.0 / (l * l)
            },
            0.0,
            t,
            quad::HOUSE_ABS_TOL,
        )
    }

    /// Sudden-start validity window (t_lo, t_hi) of the short-time analysis:
    /// 10 hbar / dE < t < 0.1 L/|Ldot|, with dE the box level spacing at the
    /// highest occupied index. The factors 10 and 0.1 are safety margins.
    pub fn validity_window(&self, highest_occupied: usize) -> (f64, f64) {
        let n = highest_occupied.max(1) as f64;
        let de = ((n + 1.0) * (n + 1.0) - n * n) * std::f64::consts::PI.powi(2)
            / (2.0 * self.l0 * self.l0);
        let lo = 10.0 * self.hbar / de;
        let hi = if self.ldot0 == 0.0 {
            f64::INFINITY
        } else {
            0.1 * self.l0 / self.ldot0.abs()
        };
        (lo, hi)
    }
}

/// Closed-form antiderivative of 1/(a t^2 + b t + c) on [0, t], split by the
/// sign of the discriminant b^2 - 4ac.
fn sqrtlaw_tau(a: f64, b: f64, c: f64, t: f64) -> f64 {
    if a == 0.0 {
        return if b == 0.0 {
            t / c
        } else {
            ((b * t + c) / c).ln() / b
        };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        let s = (-disc).sqrt();
        2.0 / s * (((2.0 * a * t + b) / s).atan() - (b / s).atan())
    } else if disc == 0.0 {
        2.0 / b - 2.0 / (2.0 * a * t + b)
    } else {
        let s = disc.sqrt();
        let u1 = (2.0 * a * t + b - s) / (2.0 * a * t + b + s);
        let u0 = (b - s) / (b + s);
        ((u1 / u0).abs()).ln() / s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_direct_substitution() {
        let w = WallSchedule::linear(1.0, 0.1).unwrap();
        let (l, ld, ldd) = w.eval_length(2.0).unwrap();
        assert_eq!(l, 1.2);
        assert_eq!(ld, 0.1);
        assert_eq!(ldd, 0.0);
    }

    #[test]
    fn sqrtlaw_constant_law() {
        let w = WallSchedule::sqrt_law(0.0, 0.0, 4.0).unwrap();
        let (l, ld, ldd) = w.eval_length(5.0).unwrap();
        assert!((l - 2.0).abs() < 1e-15);
        assert_eq!(ld, 0.0);
        assert_eq!(ldd, 0.0);
    }

    #[test]
    fn sqrtlaw_degenerate_is_linear() {
        // a=1, b=2, c=1: B^2 = 0, L = t + 1
        let w = WallSchedule::sqrt_law(1.0, 2.0, 1.0).unwrap();
        let (l, _, ldd) = w.eval_length(1.0).unwrap();
        assert!((l - 2.0).abs() < 1e-15);
        assert!((l.powi(3) * ldd).abs() < 1e-15);
        assert_eq!(w.b_squared(), 0.0);
    }

    #[test]
    fn l3_lddot_invariant_constant() {
        let w = WallSchedule::sqrt_law(0.7, 0.4, 1.69).unwrap();
        let b2 = w.b_squared();
        for t in [0.0, 0.3, 1.1, 2.7] {
            let (l, _, ldd) = w.eval_length(t).unwrap();
            assert!((l.powi(3) * ldd + b2 / 4.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn central_difference_matches_lddot() {
        let h = 1e-5;
        for w in [
            WallSchedule::linear(1.0, 0.05).unwrap(),
            WallSchedule::sqrt_law(0.7, 0.4, 1.69).unwrap(),
            WallSchedule::sqrt_law(2.0, -0.3, 1.0).unwrap(),
        ] {
            for t in [0.1, 0.9, 1.7] {
                let (l, _, ldd) = w.eval_length(t).unwrap();
                let lp = w.eval_length(t + h).unwrap().0;
                let lm = w.eval_length(t - h).unwrap().0;
                let fd = (lp - 2.0 * l + lm) / (h * h);
                // 1e-6 is the truncation budget; the second term is the f64
                // cancellation floor of a second difference at this step.
                let tol = 1e-6 + 4.0 * f64::EPSILON * l / (h * h);
                assert!((fd - ldd).abs() < tol, "fd={fd} ldd={ldd}");
            }
        }
    }

    #[test]
    fn scaled_time_fixed_and_linear() {
        let w = WallSchedule::fixed(2.0).unwrap();
        assert!((w.scaled_time(4.0).unwrap() - 1.0).abs() < 1e-15);
        let w = WallSchedule::linear(1.0, 1.0).unwrap();
        // int_0^1 ds/(1+s)^2 = 1/2
        let tau = w.scaled_time(1.0).unwrap();
        assert!((tau - 0.5).abs() < 1e-15);
        let tau_q = w.scaled_time_quadrature(1.0).unwrap();
        assert!((tau - tau_q).abs() <= 1e-12 * tau.abs());
    }

    #[test]
    fn scaled_time_sqrtlaw_matches_quadrature_all_branches() {
        for (a, b, c) in [
            (1.0, 2.0, 1.0),   // disc = 0
            (0.5, 0.1, 4.0),   // disc < 0
            (1.0, 3.0, 1.0),   // disc > 0
            (0.0, 0.4, 1.0),   // a = 0
            (2.0, -0.3, 1.0),  // contracting start
        ] {
            let w = WallSchedule::sqrt_law(a, b, c).unwrap();
            for t in [0.4, 1.3] {
                let cf = w.scaled_time(t).unwrap();
                let q = w.scaled_time_quadrature(t).unwrap();
                assert!(
                    (cf - q).abs() <= 1e-11 * cf.abs().max(1.0),
                    "a={a} b={b} c={c} t={t}: {cf} vs {q}"
                );
            }
        }
    }

    #[test]
    fn domain_error_names_zero_crossing() {
        let w = WallSchedule::linear(1.0, -0.5).unwrap();
        let err = w.eval_length(3.0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('2'), "{msg}"); // crossing at t = 2
        assert!(w.scaled_time(3.0).is_err());
    }

    #[test]
    fn window_for_ground_state() {
        let w = WallSchedule::linear(1.0, 0.02).unwrap();
        let (lo, hi) = w.validity_window(1);
        assert!(lo < 1.0 && 1.0 < hi, "({lo}, {hi})");
    }
}
