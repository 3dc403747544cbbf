//! Confluent hypergeometric function M(a, b, z) (Kummer's function) and the
//! eigenmode evaluator of the sqrt-law wall.
//!
//! The engine's eigencondition involves M(3/4 + i K/(hbarB), 3/2, i hbarB/2)
//! with a large imaginary first parameter. The Taylor series is exact but
//! loses ~e^{n pi} of precision in double arithmetic at high mode number
//! (the terms reach (a z)^k / (k!)^2 scales before cancelling), so the
//! production path evaluates the equivalent real mode function
//!
//!   u(y; K) with u'' = -(2K + (hbarB)^2 y^2 / 4) u, u(0) = 0, u'(0) = 1,
//!
//! which satisfies u(y) = y e^{-i hbarB y^2/4} M(3/4 + iK/hbarB, 3/2,
//! i hbarB y^2/2); the right side is identically real by the Kummer
//! transformation M(a, b, z) = e^z M(b-a, b, -z). The series evaluator stays
//! as the cross-check oracle at small mode number.

use num_complex::Complex64;

use crate::error::{QwallError, Result};

const MAX_TERMS: usize = 10_000;

/// Kummer's M(a, b, z) by Taylor series with term-ratio stopping at relative
/// 1e-16. The series is entire in z; b must not be a non-positive integer,
/// and |z| <= 10 keeps the use within the regime the engine needs.
pub fn kummer_m(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if b.im == 0.0 && b.re <= 0.0 && b.re.fract() == 0.0 {
        return Err(QwallError::Argument(format!(
            "Kummer M undefined for non-positive integer b = {b}"
        )));
    }
    if z.norm() > 10.0 {
        return Err(QwallError::Argument(format!(
            "Kummer series evaluator restricted to |z| <= 10, got |z| = {}",
            z.norm()
        )));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        if term.norm() <= 1e-16 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(QwallError::Numeric(format!(
        "Kummer series did not converge within {MAX_TERMS} terms (a={a}, b={b}, z={z})"
    )))
}

/// Integrates the sqrt-law mode equation
/// u'' = -(2K + (hbarB)^2 y^2/4) u, u(0) = 0, u'(0) = 1
/// with fixed-step RK4 up to each requested point of the ascending grid `ys`
/// (which must end at the last point wanted). Returns (u, u') samples.
pub fn mode_solution(k_energy: f64, hbar_b: f64, ys: &[f64], steps_per_unit: usize) -> Vec<(f64, f64)> {
    let rhs = |y: f64, u: f64, v: f64| -> (f64, f64) {
        (v, -(2.0 * k_energy + 0.25 * (hbar_b * y).powi(2)) * u)
    };
    let mut out = Vec::with_capacity(ys.len());
    let mut y = 0.0f64;
    let mut u = 0.0f64;
    let mut v = 1.0f64;
    for &target in ys {
        debug_assert!(target >= y);
        let span = target - y;
        if span > 0.0 {
            let n = ((span * steps_per_unit as f64).ceil() as usize).max(1);
            let h = span / n as f64;
            for _ in 0..n {
                let (k1u, k1v) = rhs(y, u, v);
                let (k2u, k2v) = rhs(y + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
                let (k3u, k3v) = rhs(y + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
                let (k4u, k4v) = rhs(y + h, u + h * k3u, v + h * k3v);
                u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
                v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
                y += h;
            }
            y = target; // clamp accumulated rounding
        }
        out.push((u, v));
    }
    out
}

/// Step density that keeps the RK4 phase error per oscillation period fixed:
/// the mode oscillates with wavenumber ~ sqrt(2K).
pub fn steps_for(k_energy: f64) -> usize {
    let omega = (2.0 * k_energy.abs()).sqrt().max(1.0);
    ((omega * 160.0) as usize).clamp(2_000, 200_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_at_origin_is_one() {
        let v = kummer_m(
            Complex64::new(0.3, -1.2),
            Complex64::new(1.5, 0.0),
            Complex64::default(),
        )
        .unwrap();
        assert!((v - 1.0).norm() < 1e-16);
    }

    #[test]
    fn known_identity_m11_is_exp() {
        let z = Complex64::new(0.3, 0.4);
        let v = kummer_m(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), z).unwrap();
        assert!((v - z.exp()).norm() < 1e-14);
    }

    #[test]
    fn matches_forty_digit_reference() {
        // mpmath (mp.dps = 40): hyp1f1(3/4, 3/2, i/20)
        let want = Complex64::new(
            0.99956255967502010168019655475103,
            0.024994271348716894915549415465052,
        );
        let v = kummer_m(
            Complex64::new(0.75, 0.0),
            Complex64::new(1.5, 0.0),
            Complex64::new(0.0, 0.05),
        )
        .unwrap();
        assert!((v - want).norm() < 1e-15, "{v}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(kummer_m(
            Complex64::new(0.5, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.1, 0.0)
        )
        .is_err());
        assert!(kummer_m(
            Complex64::new(0.5, 0.0),
            Complex64::new(1.5, 0.0),
            Complex64::new(20.0, 0.0)
        )
        .is_err());
    }

    #[test]
    fn mode_solution_equals_series_representation() {
        // u(y) = y e^{-i hbarB y^2/4} M(3/4 + iK/hbarB, 3/2, i hbarB y^2/2)
        let hbar_b = 0.1;
        for k_en in [4.0, 5.5] {
            let ys = [0.3, 0.7, 1.0];
            let got = mode_solution(k_en, hbar_b, &ys, steps_for(k_en));
            for (&y, &(u, _)) in ys.iter().zip(&got) {
                let a = Complex64::new(0.75, k_en / hbar_b);
                let z = Complex64::new(0.0, 0.5 * hbar_b * y * y);
                let m = kummer_m(a, Complex64::new(1.5, 0.0), z).unwrap();
                let rep = Complex64::from_polar(1.0, -0.25 * hbar_b * y * y) * m * y;
                assert!(rep.im.abs() < 1e-12, "representation should be real");
                assert!((u - rep.re).abs() < 1e-10, "y={y}: {u} vs {}", rep.re);
            }
        }
    }

    #[test]
    fn zero_potential_limit_is_sine() {
        // hbarB = 0: u = sin(sqrt(2K) y)/sqrt(2K)
        let k_en = 12.0;
        let ys = [0.25, 0.5, 1.0];
        let got = mode_solution(k_en, 0.0, &ys, steps_for(k_en));
        let w = (2.0 * k_en).sqrt();
        for (&y, &(u, _)) in ys.iter().zip(&got) {
            assert!((u - (w * y).sin() / w).abs() < 1e-12);
        }
    }
}
