//! Exact engine for the sqrt-law wall L(t) = sqrt(a t^2 + b t + c).
//!
//! The gauged fixed-domain equation is i hbar L^2 phi_t = -phi_yy/2
//! - (hbarB)^2 y^2 phi / 8 with B^2 = b^2 - 4ac; its eigenmodes
//! phi_n(y) = A_n u_n(y) (the real Kummer modes of [`crate::kummer`]) carry
//! eigenvalues K_n -> n^2 pi^2/2 as hbarB -> 0. States evolve by pure phases
//! c_n(t) = c_n(0) exp(-i K_n tau(t)/hbar) and the force is
//!
//!   F = I0bar/L^3 + (hbar Ldot/L^2) Im I1bar,
//!   I0bar = 2 sum |c_n|^2 K_n + (hbarB)^2/4 sum Re[c_n* c_n'] <phi_n|y^2|phi_n'>.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{QwallError, Result};
use crate::kummer::{mode_solution, steps_for};
use crate::quad::GaussLegendre;
use crate::rootfind;
use crate::schedule::{WallKind, WallSchedule};
use crate::types::{BasisKind, ForceBreakdown, RawIntegrals, SpectralState};

/// Eigenbasis of the sqrt-law wall at a fixed hbarB = hbar * B.
#[derive(Debug, Clone)]
pub struct KummerBasis {
    pub hbar_b: f64,
    pub n_max: usize,
    /// Eigenvalues K_1 < K_2 < ... (energy-like, in the units of n^2 pi^2/2).
    pub roots: Vec<f64>,
    /// Normalization constants A_n (positive: phi_n'(0) > 0).
    pub norms: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// phi_n and phi_n' sampled on the quadrature nodes, row per mode.
    samples: Vec<Vec<(f64, f64)>>,
    /// <phi_n | y^2 | phi_m>
    y2: Vec<f64>,
    /// <phi_n | y d/dy | phi_m> = int y phi_n phi_m' dy
    ydy: Vec<f64>,
}

impl KummerBasis {
    /// Builds the basis: bracketed root search near the semiclassical guesses
    /// n^2 pi^2/2, mode sampling on a composite Gauss-Legendre grid, and the
    /// y^2 / y d/dy matrices.
    pub fn build(hbar_b: f64, n_max: usize) -> Result<Self> {
        if hbar_b < 0.0 {
            return Err(QwallError::Argument(format!("need hbarB >= 0, got {hbar_b}")));
        }
        if n_max == 0 {
            return Err(QwallError::Argument("KummerBasis needs n_max >= 1".into()));
        }
        let panels = n_max.max(16);
        let gl = GaussLegendre::new(20);
        let mut nodes = Vec::with_capacity(panels * gl.nodes.len());
        let mut weights = Vec::with_capacity(panels * gl.nodes.len());
        for p in 0..panels {
            let lo = p as f64 / panels as f64;
            let hi = (p + 1) as f64 / panels as f64;
            let c = 0.5 * (hi - lo);
            let d = 0.5 * (hi + lo);
            for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
                nodes.push(c * x + d);
                weights.push(c * w);
            }
        }

        let mut roots = Vec::with_capacity(n_max);
        let mut samples = Vec::with_capacity(n_max);
        let mut norms = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let k = find_root(hbar_b, n)?;
            if let Some(&prev) = roots.last() {
                if k <= prev {
                    return Err(QwallError::RootSearch(format!(
                        "mode ordering violated: K_{n} = {k} <= K_{} = {prev}",
                        n - 1
                    )));
                }
            }
            let mut s = mode_solution(k, hbar_b, &nodes, steps_for(k));
            let norm_sq: f64 = s
                .iter()
                .zip(&weights)
                .map(|(&(u, _), &w)| w * u * u)
                .sum();
            let a_n = 1.0 / norm_sq.sqrt();
            for (u, v) in s.iter_mut() {
                *u *= a_n;
                *v *= a_n;
            }
            roots.push(k);
            norms.push(a_n);
            samples.push(s);
        }

        let mut y2 = vec![0.0; n_max * n_max];
        let mut ydy = vec![0.0; n_max * n_max];
        for i in 0..n_max {
            for j in 0..n_max {
                let mut sy2 = 0.0;
                let mut sydy = 0.0;
                for ((&(ui, _), &(uj, vj)), (&y, &w)) in samples[i]
                    .iter()
                    .zip(&samples[j])
                    .zip(nodes.iter().zip(&weights))
                {
                    sy2 += w * y * y * ui * uj;
                    sydy += w * y * ui * vj;
                }
                y2[i * n_max + j] = sy2;
                ydy[i * n_max + j] = sydy;
            }
        }

        Ok(Self { hbar_b, n_max, roots, norms, nodes, weights, samples, y2, ydy })
    }

    /// phi_n(y) at an arbitrary point (fresh integration to y).
    pub fn basis_function(&self, n: usize, y: f64) -> Result<f64> {
        if n == 0 || n > self.n_max {
            return Err(QwallError::Argument(format!("mode index {n} outside 1..={}", self.n_max)));
        }
        if !(0.0..=1.0).contains(&y) {
            return Err(QwallError::Argument(format!("y = {y} outside [0, 1]")));
        }
        let k = self.roots[n - 1];
        let s = mode_solution(k, self.hbar_b, &[y], steps_for(k));
        Ok(self.norms[n - 1] * s[0].0)
    }

    /// Discrete inner product <phi_n | phi_m> on the basis quadrature grid.
    pub fn overlap(&self, n: usize, m: usize) -> f64 {
        self.samples[n - 1]
            .iter()
            .zip(&self.samples[m - 1])
            .zip(&self.weights)
            .map(|((&(un, _), &(um, _)), &w)| w * un * um)
            .sum()
    }

    fn quad_complex<F: FnMut(f64, f64) -> Complex64>(&self, n: usize, mut f: F) -> Complex64 {
        // integrates f(y, phi_n(y)) over [0,1] on the cached grid
        let mut s = Complex64::default();
        for (&(u, _), (&y, &w)) in self.samples[n - 1]
            .iter()
            .zip(self.nodes.iter().zip(&self.weights))
        {
            s += w * f(y, u);
        }
        s
    }
}

/// Roots of the eigencondition (the mode function vanishing at y = 1),
/// bracketed within +-30% of the semiclassical guess n^2 pi^2/2 and refined
/// by bisection + secant to 1e-12 relative.
pub fn find_root(hbar_b: f64, n: usize) -> Result<f64> {
    let guess = (n as f64 * PI).powi(2) / 2.0;
    if hbar_b == 0.0 {
        return Ok(guess);
    }
    let boundary = |k: f64| mode_solution(k, hbar_b, &[1.0], steps_for(k))[0].0;
    let (lo, hi) = (0.7 * guess, 1.3 * guess);
    let brackets = rootfind::scan_brackets(boundary, lo, hi, 48.max(8 * n));
    let best = brackets
        .into_iter()
        .min_by(|a, b| {
            let da = (0.5 * (a.0 + a.1) - guess).abs();
            let db = (0.5 * (b.0 + b.1) - guess).abs();
            da.partial_cmp(&db).unwrap()
        })
        .ok_or_else(|| {
            QwallError::RootSearch(format!(
                "no sign change within 30% of the semiclassical guess {guess:.6} (hbarB = {hbar_b})"
            ))
        })?;
    rootfind::bisect_secant(boundary, best.0, best.1, best.2, best.3, 1e-12)
}

/// All roots K_1..K_n_max.
pub fn find_roots(hbar_b: f64, n_max: usize) -> Result<Vec<f64>> {
    (1..=n_max).map(|n| find_root(hbar_b, n)).collect()
}

fn sqrtlaw_params(schedule: &WallSchedule) -> Result<(f64, f64, f64)> {
    match schedule.kind {
        WallKind::SqrtLaw { a, b, c } => Ok((a, b, c)),
        _ => Err(QwallError::Validation(
            "the sqrt-law engine needs a sqrt-law wall schedule".into(),
        )),
    }
}

/// Checks schedule/basis consistency: hbarB of the basis must equal
/// hbar * sqrt(b^2 - 4ac), and the discriminant must be non-negative.
pub fn check_schedule(schedule: &WallSchedule, basis: &KummerBasis) -> Result<()> {
    let (_, _, _) = sqrtlaw_params(schedule)?;
    let b2 = schedule.b_squared();
    if b2 < 0.0 {
        return Err(QwallError::Validation(format!(
            "sqrt-law engine needs b^2 - 4ac >= 0, got {b2}"
        )));
    }
    let want = schedule.hbar * b2.sqrt();
    if (basis.hbar_b - want).abs() > 1e-12 * want.max(1.0) {
        return Err(QwallError::Validation(format!(
            "basis hbarB = {} does not match schedule hbar*B = {want}",
            basis.hbar_b
        )));
    }
    Ok(())
}

/// The J-bar moments J̄_k(n, l) = sqrt(2) int y^k phi_n(y) sin(l pi y) dy for
/// k = 0, 2, 4; the expansion-path ingredients for the pair products.
pub fn jbar_moments(basis: &KummerBasis, n: usize, level: usize) -> (f64, f64, f64) {
    let lf = level as f64;
    let j = |k: i32| {
        basis
            .quad_complex(n, |y, u| {
                Complex64::new(2f64.sqrt() * y.powi(k) * u * (lf * PI * y).sin(), 0.0)
            })
            .re
    };
    (j(0), j(2), j(4))
}

/// Initial coefficients c_n(0) = sqrt(2) int phi_n(y) sin(l pi y)
/// e^{-i hbar L(0) Ldot(0) y^2 / 2} dy over the Kummer basis.
pub fn sqrtlaw_coefficients(
    level: usize,
    schedule: &WallSchedule,
    basis: &KummerBasis,
) -> Result<SpectralState> {
    check_schedule(schedule, basis)?;
    if level == 0 || level > basis.n_max {
        return Err(QwallError::Argument(format!(
            "need 1 <= level <= n_max, got {level} / {}",
            basis.n_max
        )));
    }
    let lam = 0.5 * schedule.hbar * schedule.l0 * schedule.ldot0;
    let lf = level as f64;
    let coeffs: Vec<Complex64> = (1..=basis.n_max)
        .map(|n| {
            basis.quad_complex(n, |y, u| {
                Complex64::from_polar(2f64.sqrt() * u * (lf * PI * y).sin(), -lam * y * y)
            })
        })
        .collect();
    let state = SpectralState::new(BasisKind::Kummer, coeffs, level);
    state.check_truncation(1e-6)?;
    Ok(state)
}

/// Phase evolution c_n(t) = c_n(0) e^{-i K_n tau / hbar}.
pub fn propagate(state: &SpectralState, basis: &KummerBasis, tau: f64, hbar: f64) -> SpectralState {
    let coeffs = state
        .coeffs
        .iter()
        .zip(&basis.roots)
        .map(|(c, &k)| c * Complex64::from_polar(1.0, -k * tau / hbar))
        .collect();
    SpectralState::new(state.basis, coeffs, state.source_level)
}

/// Energy, force and the y^2 moment at time t.
#[derive(Debug, Clone, Copy)]
pub struct SqrtLawObservables {
    pub energy: f64,
    pub force: ForceBreakdown,
    /// <y^2> of the gauged state (the I2 analogue).
    pub i2_bar: f64,
}

/// Observables at time t from the evolved coefficients:
/// I0bar = int |phi_y|^2 = 2 sum |c|^2 K + (hbarB)^2/4 <y^2>-coupling,
/// I1bar = int y phi* phi_y, F = I0bar/L^3 + (hbar Ldot/L^2) Im I1bar and
/// E = I0bar/(2 L^2) + (hbar Ldot/L) Im I1bar + (hbar^2 Ldot^2/2) <y^2>.
pub fn sqrtlaw_observables(
    state: &SpectralState,
    schedule: &WallSchedule,
    basis: &KummerBasis,
    t: f64,
) -> Result<SqrtLawObservables> {
    check_schedule(schedule, basis)?;
    let (l, ldot, _) = schedule.eval_length(t)?;
    let n = basis.n_max.min(state.n_max());

    let mut i0 = 0.0;
    for i in 0..n {
        i0 += 2.0 * state.coeffs[i].norm_sqr() * basis.roots[i];
    }
    let mut y2 = 0.0;
    let mut i1 = Complex64::default();
    for i in 0..n {
        for jm in 0..n {
            let pair = state.coeffs[i].conj() * state.coeffs[jm];
            y2 += pair.re * basis.y2[i * basis.n_max + jm];
            i1 += pair * basis.ydy[i * basis.n_max + jm];
        }
    }
    i0 += 0.25 * basis.hbar_b * basis.hbar_b * y2;

    let hbar = schedule.hbar;
    let adiabatic = i0 / (l * l * l);
    let non_adiabatic = hbar * ldot / (l * l) * i1.im;
    let energy = i0 / (2.0 * l * l) + hbar * ldot / l * i1.im + 0.5 * hbar * hbar * ldot * ldot * y2;
    Ok(SqrtLawObservables {
        energy,
        force: ForceBreakdown {
            adiabatic,
            non_adiabatic,
            raw: RawIntegrals::SqrtLaw { i0_bar: i0, im_i1_bar: i1.im },
        },
        i2_bar: y2,
    })
}

/// Force breakdown at time t from the evolved coefficients.
pub fn sqrtlaw_force(
    state: &SpectralState,
    schedule: &WallSchedule,
    basis: &KummerBasis,
    t: f64,
) -> Result<ForceBreakdown> {
    Ok(sqrtlaw_observables(state, schedule, basis, t)?.force)
}

/// Convenience: initial state, phases at t, force at t.
pub fn force_at(
    level: usize,
    schedule: &WallSchedule,
    basis: &KummerBasis,
    t: f64,
) -> Result<ForceBreakdown> {
    let c0 = sqrtlaw_coefficients(level, schedule, basis)?;
    let tau = schedule.scaled_time(t)?;
    let ct = propagate(&c0, basis, tau, schedule.hbar);
    sqrtlaw_force(&ct, schedule, basis, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardwall;
    use crate::jtable::JTable;

    #[test]
    fn semiclassical_limit_of_roots() {
        let roots = find_roots(1e-3, 5).unwrap();
        for (i, k) in roots.iter().enumerate() {
            let n = i + 1;
            let guess = (n as f64 * PI).powi(2) / 2.0;
            assert!((k / guess - 1.0).abs() <= 1e-3, "n={n}: {k}");
        }
        // strict ordering
        for w in roots.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn k1_regression_at_hbarb_tenth() {
        // mpmath (mp.dps = 40): findroot of Re M(3/4 + 10iK, 3/2, i/20)
        let k1 = find_root(0.1, 1).unwrap();
        assert!((k1 - 4.934448856130989).abs() < 1e-9, "{k1}");
        let k2 = find_root(0.1, 2).unwrap();
        assert!((k2 - 19.73880796791506).abs() < 1e-8, "{k2}");
    }

    #[test]
    fn basis_boundary_and_orthonormality() {
        let basis = KummerBasis::build(0.1, 8).unwrap();
        for n in 1..=8usize {
            let end = basis.basis_function(n, 1.0).unwrap();
            assert!(end.abs() < 1e-10, "phi_{n}(1) = {end}");
            assert_eq!(basis.basis_function(n, 0.0).unwrap(), 0.0);
            for m in n..=8usize {
                let o = basis.overlap(n, m);
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((o - want).abs() < 1e-8, "<{n}|{m}> = {o}");
            }
        }
    }

    #[test]
    fn sine_limit_coefficients() {
        // Ldot(0) = 0 and hbarB = 0: the basis is the sine basis and
        // c_n(0) = delta_{n level}
        let w = WallSchedule::sqrt_law(0.0, 0.0, 1.0).unwrap();
        let basis = KummerBasis::build(0.0, 12).unwrap();
        let st = sqrtlaw_coefficients(3, &w, &basis).unwrap();
        for (i, c) in st.coeffs.iter().enumerate() {
            let want = if i + 1 == 3 { 1.0 } else { 0.0 };
            assert!((c.re - want).abs() < 1e-9 && c.im.abs() < 1e-12, "n={}", i + 1);
        }
    }

    #[test]
    fn completeness_of_projection() {
        let basis = KummerBasis::build(0.1, 64).unwrap();
        // project sqrt(2) sin(pi y) onto the basis and reconstruct (L^2 norm)
        let coeffs: Vec<f64> = (1..=64)
            .map(|n| {
                basis
                    .quad_complex(n, |y, u| {
                        Complex64::new(2f64.sqrt() * (PI * y).sin() * u, 0.0)
                    })
                    .re
            })
            .collect();
        let sum_sq: f64 = coeffs.iter().map(|c| c * c).sum();
        assert!(1.0 - sum_sq < 1e-6, "missing L^2 mass {}", 1.0 - sum_sq);
    }

    #[test]
    fn pair_products_match_jbar_expansion() {
        // hbar Ldot L = 0.1
        let l0 = 1.0;
        let ldot0 = 0.1;
        let w = WallSchedule::sqrt_law(ldot0 * ldot0, 2.0 * l0 * ldot0, l0 * l0).unwrap();
        assert!(w.b_squared().abs() < 1e-15);
        let basis = KummerBasis::build(0.0, 24).unwrap();
        let st = sqrtlaw_coefficients(1, &w, &basis).unwrap();
        let lam = 0.5 * w.hbar * w.ldot0 * w.l0;
        for n in 1..=6usize {
            for np in 1..=6usize {
                let got = st.coeffs[np - 1] * st.coeffs[n - 1].conj();
                let (j0n, j2n, j3n) = jbar_moments(&basis, n, 1);
                let (j0p, j2p, j3p) = jbar_moments(&basis, np, 1);
                // product of c_np = J0' - i lam J2' - lam^2/2 J3' with the
                // conjugate of c_n; the J2'J2 cross term enters with + lam^2
                let want = Complex64::new(j0p * j0n, 0.0)
                    - Complex64::i() * lam * (j2p * j0n - j0p * j2n)
                    - 0.5 * lam * lam * (j0p * j3n + j0n * j3p - 2.0 * j2p * j2n);
                assert!((got - want).norm() < 1e-4, "n={n} np={np}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn degenerate_law_matches_linear_engine() {
        // B^2 = 0 with L0 = 1, Ldot0 = 1 is the linear law L = 1 + t
        let w = WallSchedule::sqrt_law(1.0, 2.0, 1.0).unwrap();
        let basis = KummerBasis::build(0.0, 48).unwrap();
        let lin = WallSchedule::linear(1.0, 1.0).unwrap();
        let jt = JTable::build(48).unwrap();
        for t in [0.0, 0.5, 1.0] {
            let f_sq = force_at(1, &w, &basis, t).unwrap();
            let tr = hardwall::trajectory(1, &lin, 48, &[t], hardwall::EvalMode::Instantaneous, &jt)
                .unwrap();
            let f_l = tr.samples[0].force;
            assert!(
                (f_sq.total() - f_l.total()).abs() <= 1e-6 * f_l.total().abs(),
                "t={t}: {} vs {}",
                f_sq.total(),
                f_l.total()
            );
            assert!(
                (f_sq.non_adiabatic - f_l.non_adiabatic).abs()
                    <= 1e-6 * f_l.non_adiabatic.abs().max(1e-12),
                "t={t}"
            );
        }
    }

    #[test]
    fn force_even_in_initial_velocity() {
        // flip b: Ldot(0) changes sign; F_nonad at t = 0 must match to 1e-8
        let b2: f64 = 1e-6;
        let ld = 0.02;
        let mk = |sgn: f64| {
            let b = 2.0 * sgn * ld;
            let a = (b * b - b2) / 4.0;
            WallSchedule::sqrt_law(a, b, 1.0).unwrap()
        };
        let basis = KummerBasis::build(b2.sqrt(), 32).unwrap();
        let fp = force_at(1, &mk(1.0), &basis, 0.0).unwrap().non_adiabatic;
        let fm = force_at(1, &mk(-1.0), &basis, 0.0).unwrap().non_adiabatic;
        assert!((fp - fm).abs() <= 1e-8 * fp.abs(), "{fp} vs {fm}");
    }

    #[test]
    fn continuity_as_b_goes_to_zero() {
        let ld = 0.02;
        let mut last = None;
        for b2 in [1e-4, 1e-6, 0.0] {
            let b = 2.0 * ld;
            let a = (b * b - b2) / 4.0;
            let w = WallSchedule::sqrt_law(a, b, 1.0).unwrap();
            let basis = KummerBasis::build(w.hbar * b2.sqrt(), 24).unwrap();
            let f = force_at(1, &w, &basis, 0.3).unwrap();
            if let Some(prev) = last {
                let d: f64 = f.total() - prev;
                assert!(d.abs() < 1e-4, "jump {d} at B^2 = {b2}");
            }
            last = Some(f.total());
        }
    }

    #[test]
    fn quadratic_law_slope() {
        // fixed small B^2, sweep Ldot(0) = b/(2 sqrt c), slope of log|F_nonad|
        let b2: f64 = 1e-6;
        let basis = KummerBasis::build(b2.sqrt(), 32).unwrap();
        let mut pts = Vec::new();
        for ld in [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2] {
            let b = 2.0 * ld;
            let a = (b * b - b2) / 4.0;
            let w = WallSchedule::sqrt_law(a, b, 1.0).unwrap();
            let f = force_at(1, &w, &basis, 0.0).unwrap().non_adiabatic;
            pts.push((ld as f64, f.abs()));
        }
        let slope = log_log_slope(&pts);
        assert!((slope - 2.0).abs() <= 0.05, "slope = {slope}");
    }

    fn log_log_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &(x, y) in pts {
            let (lx, ly) = (x.ln(), y.ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }
}
