//! The acceptance checklist: one function per criterion, each returning a
//! pass/fail report with the measured numbers. The `acceptance` integration
//! test and the CLI `selftest` subcommand both run [`run_all`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::hardwall::{self, EvalMode};
use crate::hermite::{hermite_y, HermiteBasis};
use crate::jtable::{self, JTable};
use crate::occupation::OccupationModel;
use crate::pde::{self, OracleConfig};
use crate::perturbative;
use crate::quad;
use crate::schedule::WallSchedule;
use crate::softwall;
use crate::sqrtlaw::{self, KummerBasis};
use crate::types::{BasisKind, SpectralState};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionReport {
    fn pass(id: usize, name: &'static str, details: String) -> Self {
        Self { id, name, passed: true, details }
    }

    fn fail(id: usize, name: &'static str, details: String) -> Self {
        Self { id, name, passed: false, details }
    }

    /// One fixed-format summary line.
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.details
        )
    }
}

fn guard<F: FnOnce() -> Result<CriterionReport, String>>(
    id: usize,
    name: &'static str,
    f: F,
) -> CriterionReport {
    match f() {
        Ok(r) => r,
        Err(e) => CriterionReport::fail(id, name, e),
    }
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

/// 1. Quadratic non-adiabatic law, hard wall, time-averaged mode.
pub fn criterion_1() -> CriterionReport {
    const NAME: &str = "quadratic non-adiabatic law (hard wall)";
    guard(1, NAME, || {
        let jt = JTable::build(64).map_err(|e| e.to_string())?;
        let mut pts = Vec::new();
        for ld in [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2] {
            let w = WallSchedule::linear(1.0, ld).map_err(|e| e.to_string())?;
            let tr = hardwall::trajectory(1, &w, 64, &[0.0], EvalMode::TimeAveraged, &jt)
                .map_err(|e| e.to_string())?;
            pts.push((ld, tr.samples[0].force.non_adiabatic.abs()));
        }
        let slope = log_log_slope(&pts);
        let ok = (slope - 2.0).abs() <= 0.05;
        let details = format!("log-log slope = {slope:.6} (want 2.00 +- 0.05)");
        Ok(if ok {
            CriterionReport::pass(1, NAME, details)
        } else {
            CriterionReport::fail(1, NAME, details)
        })
    })
}

/// 2. Time-reversal symmetry of the non-adiabatic force.
pub fn criterion_2() -> CriterionReport {
    const NAME: &str = "time-reversal symmetry of F_nonad";
    guard(2, NAME, || {
        let jt = JTable::build(64).map_err(|e| e.to_string())?;
        let mut f_hard = Vec::new();
        for ld in [0.02, -0.02] {
            let w = WallSchedule::linear(1.0, ld).map_err(|e| e.to_string())?;
            let tr = hardwall::trajectory(1, &w, 64, &[0.0], EvalMode::Instantaneous, &jt)
                .map_err(|e| e.to_string())?;
            f_hard.push(tr.samples[0].force.non_adiabatic);
        }
        let rel_hard = (f_hard[0] - f_hard[1]).abs() / f_hard[0].abs();

        let basis = HermiteBasis::build(48, 1.0).map_err(|e| e.to_string())?;
        let mut f_soft = Vec::new();
        for ld in [0.02, -0.02] {
            let w = WallSchedule::linear(1.0, ld).map_err(|e| e.to_string())?;
            let (_, f) = softwall::trajectory_point(0, &w, &basis, 0.0).map_err(|e| e.to_string())?;
            f_soft.push(f.non_adiabatic);
        }
        let rel_soft = (f_soft[0] - f_soft[1]).abs() / f_soft[0].abs();

        let ok = rel_hard <= 1e-9 && rel_soft <= 1e-9;
        let details =
            format!("relative +-Ldot mismatch: exact {rel_hard:.2e}, soft wall {rel_soft:.2e} (want <= 1e-9)");
        Ok(if ok {
            CriterionReport::pass(2, NAME, details)
        } else {
            CriterionReport::fail(2, NAME, details)
        })
    })
}

/// 3. Operator-expectation force vs -dE/dL on the standard scenario.
pub fn criterion_3() -> CriterionReport {
    const NAME: &str = "route equality (operator vs -dE/dL)";
    guard(3, NAME, || {
        let jt = JTable::build(64).map_err(|e| e.to_string())?;
        let w = WallSchedule::linear(1.0, 0.02).map_err(|e| e.to_string())?;
        let c0 = hardwall::initial_coefficients(1, &w, 64).map_err(|e| e.to_string())?;
        let tau = w.scaled_time(1.0).map_err(|e| e.to_string())?;
        let st = hardwall::propagate(&c0, tau, w.hbar);
        let (l, ldot, _) = w.eval_length(1.0).map_err(|e| e.to_string())?;
        let (f_op, f_fd) = hardwall::force_routes(&st, l, ldot, w.hbar, &jt);
        let rel_hard = (f_op - f_fd).abs() / f_op.abs();

        let basis = HermiteBasis::build(48, 1.0).map_err(|e| e.to_string())?;
        let c0s = softwall::softwall_coefficients(1, &w, &basis).map_err(|e| e.to_string())?;
        let sts = softwall::propagate(&c0s, tau);
        let (s_op, s_fd) = softwall::force_routes(&sts, &w, 1.0, &basis).map_err(|e| e.to_string())?;
        let rel_soft = (s_op - s_fd).abs() / s_op.abs();

        let ok = rel_hard <= 1e-6 && rel_soft <= 1e-6;
        let details =
            format!("relative route mismatch: hard {rel_hard:.2e}, soft {rel_soft:.2e} (want <= 1e-6)");
        Ok(if ok {
            CriterionReport::pass(3, NAME, details)
        } else {
            CriterionReport::fail(3, NAME, details)
        })
    })
}

/// 4. PDE oracle vs exact engine: fidelity and energy.
pub fn criterion_4() -> CriterionReport {
    const NAME: &str = "PDE oracle agreement (hard wall)";
    guard(4, NAME, || {
        let w = WallSchedule::linear(1.0, 0.05).map_err(|e| e.to_string())?;
        let cfg = OracleConfig { grid_points: 2048, dt: 1e-4 };
        let times = [0.5, 1.0, 2.0];
        let snaps = pde::integrate_box(1, &w, cfg, &times).map_err(|e| e.to_string())?;
        let jt = JTable::build(96).map_err(|e| e.to_string())?;
        let c0 = hardwall::initial_coefficients(1, &w, 96).map_err(|e| e.to_string())?;
        let mut worst_fid: f64 = 1.0;
        let mut worst_de: f64 = 0.0;
        for s in &snaps {
            let tau = w.scaled_time(s.t).map_err(|e| e.to_string())?;
            let st = hardwall::propagate(&c0, tau, w.hbar);
            let (l, ldot, _) = w.eval_length(s.t).map_err(|e| e.to_string())?;
            let eb = hardwall::energy_expectation(&st, l, ldot, w.hbar, &jt);
            let (eb_pde, _) = pde::observables_box(s, &w).map_err(|e| e.to_string())?;
            let rec = pde::reconstruct_box(&st, &w, s.t, cfg.grid_points).map_err(|e| e.to_string())?;
            let fid = s.fidelity(&rec);
            worst_fid = worst_fid.min(fid);
            worst_de = worst_de.max((eb_pde.energy - eb.energy).abs() / eb.energy.abs());
        }
        let ok = worst_fid >= 1.0 - 1e-6 && worst_de <= 1e-4;
        let details = format!(
            "min fidelity = 1 - {:.2e} (want >= 1 - 1e-6), max energy rel err = {worst_de:.2e} (want <= 1e-4)",
            1.0 - worst_fid
        );
        Ok(if ok {
            CriterionReport::pass(4, NAME, details)
        } else {
            CriterionReport::fail(4, NAME, details)
        })
    })
}

/// 5. Coefficient signs, S3 = 2 S2, and the C regression constant.
pub fn criterion_5() -> CriterionReport {
    const NAME: &str = "coefficient signs and structure";
    guard(5, NAME, || {
        let w = WallSchedule::linear(1.0, 0.01).map_err(|e| e.to_string())?;
        let mut all_neg = true;
        for n in [1usize, 2, 5] {
            let model = OccupationModel::zero_t(n).map_err(|e| e.to_string())?;
            let c = perturbative::coefficient_c(&model, 1.0, 1.0, 10_000)
                .map_err(|e| e.to_string())?
                .value;
            let cp = hardwall::nonadiabatic_coefficient_exact(&model, &w, 20_000)
                .map_err(|e| e.to_string())?
                .value;
            all_neg &= c < 0.0 && cp < 0.0;
        }
        let model1 = OccupationModel::zero_t(1).map_err(|e| e.to_string())?;
        let c1 = perturbative::coefficient_c(&model1, 1.0, 1.0, 10_000)
            .map_err(|e| e.to_string())?
            .value;
        let regression_ok = (c1 - (-0.848018)).abs() < 5e-7;

        let pf = perturbative::perturbative_force(&model1, &w, 1.0, 1200, EvalMode::TimeAveraged)
            .map_err(|e| e.to_string())?;
        let ratio_ok = (pf.s3 - 2.0 * pf.s2).abs() <= 1e-10 * pf.s3.abs();

        let ok = all_neg && regression_ok && ratio_ok;
        let details = format!(
            "C,C' < 0 for N in {{1,2,5}}: {all_neg}; C(N=1) = {c1:.6} (want -0.848018); |S3 - 2 S2|/|S3| = {:.2e}",
            (pf.s3 - 2.0 * pf.s2).abs() / pf.s3.abs()
        );
        Ok(if ok {
            CriterionReport::pass(5, NAME, details)
        } else {
            CriterionReport::fail(5, NAME, details)
        })
    })
}

/// 6. J-integral closed forms against quadrature plus spot values.
pub fn criterion_6() -> CriterionReport {
    const NAME: &str = "J-integral closed forms";
    guard(6, NAME, || {
        let mut worst: f64 = 0.0;
        for n in 1..=12usize {
            for l in 1..=12usize {
                let (nf, lf) = (n as f64, l as f64);
                let q1 = quad::integrate(
                    |y| 2.0 * y * (lf * PI * y).sin() * (nf * PI * y).cos(),
                    0.0,
                    1.0,
                    1e-13,
                )
                .map_err(|e| e.to_string())?;
                let q2 = quad::integrate(
                    |y| 2.0 * y * y * (lf * PI * y).sin() * (nf * PI * y).sin(),
                    0.0,
                    1.0,
                    1e-13,
                )
                .map_err(|e| e.to_string())?;
                let q3 = quad::integrate(
                    |y| 2.0 * y.powi(4) * (lf * PI * y).sin() * (nf * PI * y).sin(),
                    0.0,
                    1.0,
                    1e-13,
                )
                .map_err(|e| e.to_string())?;
                worst = worst
                    .max((q1 - jtable::j1(n, l)).abs())
                    .max((q2 - jtable::j2(n, l)).abs())
                    .max((q3 - jtable::j3(n, l)).abs());
            }
        }
        let spot = (jtable::j1(1, 1) + 1.0 / (2.0 * PI)).abs() < 1e-14
            && (jtable::j2(2, 1) + 16.0 / (9.0 * PI * PI)).abs() < 1e-14
            && (jtable::j3(1, 1) - (0.2 - 1.0 / (PI * PI) + 1.5 / PI.powi(4))).abs() < 1e-14;
        let ok = worst <= 1e-10 && spot;
        let details = format!("max |closed - quadrature| = {worst:.2e} (want <= 1e-10), spot values {spot}");
        Ok(if ok {
            CriterionReport::pass(6, NAME, details)
        } else {
            CriterionReport::fail(6, NAME, details)
        })
    })
}

/// 7. Kummer eigenproblem and the sqrt-law engine.
pub fn criterion_7() -> CriterionReport {
    const NAME: &str = "Kummer eigenproblem / sqrt-law engine";
    guard(7, NAME, || {
        let roots = sqrtlaw::find_roots(1e-3, 5).map_err(|e| e.to_string())?;
        let mut max_dev: f64 = 0.0;
        for (i, k) in roots.iter().enumerate() {
            let guess = ((i + 1) as f64 * PI).powi(2) / 2.0;
            max_dev = max_dev.max((k / guess - 1.0).abs());
        }

        // B^2 = 0 degenerate law vs the linear engine
        let w_sq = WallSchedule::sqrt_law(1.0, 2.0, 1.0).map_err(|e| e.to_string())?;
        let basis0 = KummerBasis::build(0.0, 48).map_err(|e| e.to_string())?;
        let w_lin = WallSchedule::linear(1.0, 1.0).map_err(|e| e.to_string())?;
        let jt = JTable::build(48).map_err(|e| e.to_string())?;
        let mut max_rel: f64 = 0.0;
        for t in [0.0, 0.5, 1.0] {
            let f_sq = sqrtlaw::force_at(1, &w_sq, &basis0, t).map_err(|e| e.to_string())?;
            let tr = hardwall::trajectory(1, &w_lin, 48, &[t], EvalMode::Instantaneous, &jt)
                .map_err(|e| e.to_string())?;
            let f_l = tr.samples[0].force;
            max_rel = max_rel.max((f_sq.total() - f_l.total()).abs() / f_l.total().abs());
        }

        // quadratic law at fixed hbarB = 1e-3
        let b2: f64 = 1e-6;
        let basis = KummerBasis::build(b2.sqrt(), 32).map_err(|e| e.to_string())?;
        let mut pts = Vec::new();
        for ld in [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2] {
            let b = 2.0 * ld;
            let a = (b * b - b2) / 4.0;
            let w = WallSchedule::sqrt_law(a, b, 1.0).map_err(|e| e.to_string())?;
            let f = sqrtlaw::force_at(1, &w, &basis, 0.0).map_err(|e| e.to_string())?;
            pts.push((ld, f.non_adiabatic.abs()));
        }
        let slope = log_log_slope(&pts);

        let ok = max_dev <= 1e-3 && max_rel <= 1e-6 && (slope - 2.0).abs() <= 0.05;
        let details = format!(
            "semiclassical dev = {max_dev:.2e} (<= 1e-3), B^2=0 vs linear rel = {max_rel:.2e} (<= 1e-6), slope = {slope:.4}"
        );
        Ok(if ok {
            CriterionReport::pass(7, NAME, details)
        } else {
            CriterionReport::fail(7, NAME, details)
        })
    })
}

/// 8. Soft wall: stationary energies, C_soft sign, quadratic law.
pub fn criterion_8() -> CriterionReport {
    const NAME: &str = "soft-wall energies and quadratic law";
    guard(8, NAME, || {
        let basis = HermiteBasis::build(48, 1.0).map_err(|e| e.to_string())?;
        let mut max_e_err: f64 = 0.0;
        for l_len in [1.0, 1.7] {
            let w = WallSchedule::linear(l_len, 0.0).map_err(|e| e.to_string())?;
            for level in [0usize, 1, 4] {
                let (e, _) = softwall::trajectory_point(level, &w, &basis, 0.4)
                    .map_err(|e| e.to_string())?;
                let want = (level as f64 + 0.5) / (l_len * l_len);
                max_e_err = max_e_err.max((e - want).abs());
            }
        }

        let model = OccupationModel::zero_t(1).map_err(|e| e.to_string())?;
        let w1 = WallSchedule::linear(1.0, 0.01).map_err(|e| e.to_string())?;
        let c_soft = softwall::softwall_coefficient(&model, &w1, 48);

        let mut pts = Vec::new();
        for ld in [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2] {
            let w = WallSchedule::linear(1.0, ld).map_err(|e| e.to_string())?;
            let (_, f) = softwall::trajectory_point(0, &w, &basis, 0.0).map_err(|e| e.to_string())?;
            pts.push((ld, f.non_adiabatic.abs()));
        }
        let slope = log_log_slope(&pts);

        let ok = max_e_err <= 1e-12 && c_soft < 0.0 && (slope - 2.0).abs() <= 0.05;
        let details = format!(
            "stationary |E - (l+1/2)/L^2| = {max_e_err:.2e} (<= 1e-12), C_soft = {c_soft:.4} (< 0), slope = {slope:.4}"
        );
        Ok(if ok {
            CriterionReport::pass(8, NAME, details)
        } else {
            CriterionReport::fail(8, NAME, details)
        })
    })
}

/// 9. Unitarity and structure suite.
pub fn criterion_9() -> CriterionReport {
    const NAME: &str = "unitarity / structure suite";
    guard(9, NAME, || {
        let mut notes = Vec::new();
        let mut ok = true;

        // norm conservation of the exact engine
        let w = WallSchedule::linear(1.0, 0.2).map_err(|e| e.to_string())?;
        let st = hardwall::initial_coefficients(1, &w, 64).map_err(|e| e.to_string())?;
        let norm0 = st.norm_sqr();
        let norm1 = hardwall::propagate(&st, 1.37, 1.0).norm_sqr();
        let cons = (norm0 - norm1).abs();
        ok &= 1.0 - norm0 < 1e-8 && cons < 1e-14;
        notes.push(format!("|c|^2 deficit {:.1e}, drift {cons:.1e}", 1.0 - norm0));

        // gamma antisymmetry
        let g = perturbative::GammaMatrix::build(64).map_err(|e| e.to_string())?;
        let mut g_ok = true;
        for l in 1..=64usize {
            g_ok &= g.get(l, l) == 0.0;
            for m in 1..=64usize {
                g_ok &= g.get(l, m) == -g.get(m, l);
            }
        }
        ok &= g_ok;
        notes.push(format!("gamma antisymmetry {g_ok}"));

        // rho Hermiticity and trace preservation
        let model = OccupationModel::finite_t(0.5, 20.0).map_err(|e| e.to_string())?;
        let nb = 24usize;
        let t = 0.31;
        let mut herm: f64 = 0.0;
        let mut tr_g2 = 0.0;
        for n in 1..=nb {
            for m in 1..=nb {
                let a = perturbative::g1_element(n, m, t, &w, &model).map_err(|e| e.to_string())?;
                let b = perturbative::g1_element(m, n, t, &w, &model).map_err(|e| e.to_string())?;
                herm = herm.max((a - b.conj()).norm());
            }
            tr_g2 += perturbative::g2_diagonal(n, t, &w, &model, nb)
                .map_err(|e| e.to_string())?
                .value;
        }
        ok &= herm < 1e-12 && tr_g2.abs() < 1e-10;
        notes.push(format!("rho Hermiticity {herm:.1e}, Tr g2 {tr_g2:.1e}"));

        // basis orthonormality: box, Kummer, Hermite
        let mut worst_box: f64 = 0.0;
        for n in 1..=20usize {
            for m in n..=20usize {
                let (nf, mf) = (n as f64, m as f64);
                let ip = quad::integrate(
                    |y| 2.0 * (nf * PI * y).sin() * (mf * PI * y).sin(),
                    0.0,
                    1.0,
                    1e-13,
                )
                .map_err(|e| e.to_string())?;
                let want = if n == m { 1.0 } else { 0.0 };
                worst_box = worst_box.max((ip - want).abs());
            }
        }
        ok &= worst_box < 1e-10;

        let kb = KummerBasis::build(0.1, 8).map_err(|e| e.to_string())?;
        let mut worst_kum: f64 = 0.0;
        for n in 1..=8usize {
            for m in n..=8usize {
                let want = if n == m { 1.0 } else { 0.0 };
                worst_kum = worst_kum.max((kb.overlap(n, m) - want).abs());
            }
        }
        ok &= worst_kum < 1e-8;

        let hb = 1.0f64;
        let basis = HermiteBasis::build(21, hb).map_err(|e| e.to_string())?;
        let mut worst_herm: f64 = 0.0;
        for n in 0..=20usize {
            for m in n..=20usize {
                let ip: f64 = basis
                    .nodes
                    .iter()
                    .zip(&basis.weights)
                    .map(|(&y, &wq)| {
                        let gsc = (0.5 * hb * y * y).exp();
                        wq * (hermite_y(n, y, hb).unwrap() * gsc)
                            * (hermite_y(m, y, hb).unwrap() * gsc)
                    })
                    .sum();
                let want = if n == m { 1.0 } else { 0.0 };
                worst_herm = worst_herm.max((ip - want).abs());
            }
        }
        ok &= worst_herm < 1e-10;
        notes.push(format!(
            "orthonormality: box {worst_box:.1e}, Kummer {worst_kum:.1e}, Hermite {worst_herm:.1e}"
        ));

        let details = notes.join("; ");
        Ok(if ok {
            CriterionReport::pass(9, NAME, details)
        } else {
            CriterionReport::fail(9, NAME, details)
        })
    })
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ]
}

/// Cross-route comparison reported by the CLI: the exact-route and
/// perturbative-route velocity-squared coefficients and their ratio.
pub fn coefficient_comparison(model: &OccupationModel, schedule: &WallSchedule) -> crate::Result<(f64, f64, f64)> {
    let c = perturbative::coefficient_c(model, schedule.hbar, schedule.l0, 10_000)?.value;
    let cp = hardwall::nonadiabatic_coefficient_exact(model, schedule, 20_000)?.value;
    Ok((c, cp, cp / c))
}

/// Small helper shared with tests: a box SpectralState concentrated on one
/// level.
pub fn kronecker_state(level: usize, n_max: usize) -> SpectralState {
    let coeffs = (1..=n_max)
        .map(|n| Complex64::new(if n == level { 1.0 } else { 0.0 }, 0.0))
        .collect();
    SpectralState::new(BasisKind::BoxSine, coeffs, level)
}
