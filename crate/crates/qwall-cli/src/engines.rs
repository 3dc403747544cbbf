//! Scenario execution: one trace per engine plus consistency/coefficient
//! summaries.

use anyhow::{bail, Context};
use serde_json::json;

use qwall::hardwall;
use qwall::hermite::HermiteBasis;
use qwall::jtable::JTable;
use qwall::occupation::adiabatic_force;
use qwall::pde::{self, OracleConfig};
use qwall::perturbative;
use qwall::schedule::{WallKind, WallSchedule};
use qwall::softwall;
use qwall::sqrtlaw::{self, KummerBasis};

use crate::config::{Engine, Scenario};
use crate::output::TraceRow;

pub struct EngineTrace {
    pub engine: Engine,
    pub raw_labels: (&'static str, &'static str, &'static str),
    pub rows: Vec<TraceRow>,
    /// engine-specific summary entries (route deviations etc.)
    pub summary: serde_json::Value,
}

/// Engines that apply to the configured wall when `all` is selected.
/// The soft wall models a different confinement and runs only when chosen
/// explicitly.
pub fn applicable(sc: &Scenario) -> Vec<Engine> {
    match sc.schedule.kind {
        WallKind::Fixed | WallKind::Linear => {
            vec![Engine::Exact, Engine::Perturbative, Engine::SqrtLaw, Engine::Oracle]
        }
        WallKind::SqrtLaw { .. } => vec![Engine::SqrtLaw, Engine::Oracle],
    }
}

/// The sqrt-law engine needs sqrt-law coefficients; linear/fixed walls get
/// their exact degenerate representation a = Ldot0^2, b = 2 L0 Ldot0, c = L0^2.
pub fn as_sqrtlaw(schedule: &WallSchedule) -> anyhow::Result<WallSchedule> {
    match schedule.kind {
        WallKind::SqrtLaw { .. } => Ok(*schedule),
        WallKind::Fixed | WallKind::Linear => {
            let s = WallSchedule::sqrt_law(
                schedule.ldot0 * schedule.ldot0,
                2.0 * schedule.l0 * schedule.ldot0,
                schedule.l0 * schedule.l0,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok(s.with_hbar(schedule.hbar))
        }
    }
}

pub fn run_engine(engine: Engine, sc: &Scenario) -> anyhow::Result<EngineTrace> {
    match engine {
        Engine::Exact => run_exact(sc),
        Engine::Perturbative => run_perturbative(sc),
        Engine::SqrtLaw => run_sqrtlaw(sc),
        Engine::SoftWall => run_softwall(sc),
        Engine::Oracle => run_oracle(sc),
        Engine::All => bail!("'all' is expanded by the caller"),
    }
}

fn run_exact(sc: &Scenario) -> anyhow::Result<EngineTrace> {
    let jt = JTable::build(sc.n_max).map_err(|e| anyhow::anyhow!("{e}"))?;
    let tr = hardwall::trajectory(sc.level, &sc.schedule, sc.n_max, &sc.times, sc.mode, &jt)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let rows = tr
        .samples
        .iter()
        .map(|s| TraceRow {
            t: s.t,
            l: s.l,
            ldot: s.ldot,
            energy: s.energy.energy,
            f_ad: s.force.adiabatic,
            f_nonad: s.force.non_adiabatic,
            raw: [s.energy.i0, s.energy.im_i1, s.energy.i2],
        })
        .collect();
    // route consistency at the last sample
    let last = tr.samples.last().context("empty time grid")?;
    let state = hardwall::propagate(&tr.state0, last.tau, sc.schedule.hbar);
    let (f_op, f_fd) = hardwall::force_routes(&state, last.l, last.ldot, sc.schedule.hbar, &jt);
    let dev = (f_op - f_fd).abs() / f_op.abs().max(1e-300);
    Ok(EngineTrace {
        engine: Engine::Exact,
        raw_labels: ("i0", "im_i1", "i2"),
        rows,
        summary: json!({ "route_rel_deviation": dev }),
    })
}

/// The perturbative double sums need a larger cutoff than the spectral
/// truncation; double until the worst time sample meets its tail budget.
fn perturbative_at(
    sc: &Scenario,
    schedule: &qwall::schedule::WallSchedule,
    t: f64,
    cutoff: &mut usize,
) -> anyhow::Result<perturbative::PerturbativeForce> {
    loop {
        match perturbative::perturbative_force(&sc.model, schedule, t, *cutoff, sc.mode) {
            Ok(pf) => return Ok(pf),
            Err(qwall::QwallError::Truncation(_)) if *cutoff < 16_384 => *cutoff *= 2,
            Err(e) => return Err(anyhow::anyhow!("{e}")),
        }
    }
}

fn run_perturbative(sc: &Scenario) -> anyhow::Result<EngineTrace> {
    let mut rows = Vec::with_capacity(sc.times.len());
    let mut any_outside = false;
    let mut cutoff = sc.n_max.max(128);
    for &t in &sc.times {
        let pf = perturbative_at(sc, &sc.schedule, t, &mut cutoff)?;
        any_outside |= pf.outside_window;
        let (l, ldot, _) = sc.schedule.eval_length(t).map_err(|e| anyhow::anyhow!("{e}"))?;
        // reported energy: occupation-weighted adiabatic spectrum at L(t)
        let mut energy = 0.0;
        for n in 1..=sc.n_max {
            let e = qwall::boxbasis::box_energy(n, l).map_err(|e| anyhow::anyhow!("{e}"))?;
            energy += sc.model.weight(n, e) * e;
        }
        rows.push(TraceRow {
            t,
            l,
            ldot,
            energy,
            f_ad: pf.s1,
            f_nonad: pf.s2 + pf.s3,
            raw: [pf.s1, pf.s2, pf.s3],
        });
    }
    Ok(EngineTrace {
        engine: Engine::Perturbative,
        raw_labels: ("s1", "s2", "s3"),
        rows,
        summary: json!({ "outside_window_samples": any_outside, "summation_cutoff": cutoff }),
    })
}

fn run_sqrtlaw(sc: &Scenario) -> anyhow::Result<EngineTrace> {
    let schedule = as_sqrtlaw(&sc.schedule)?;
    let b2 = schedule.b_squared();
    if b2 < 0.0 {
        bail!("validation error: sqrt-law engine needs b^2 - 4ac >= 0, got {b2}");
    }
    let basis = KummerBasis::build(schedule.hbar * b2.sqrt(), sc.n_max)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let c0 = sqrtlaw::sqrtlaw_coefficients(sc.level, &schedule, &basis)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut rows = Vec::with_capacity(sc.times.len());
    for &t in &sc.times {
        let tau = schedule.scaled_time(t).map_err(|e| anyhow::anyhow!("{e}"))?;
        let ct = sqrtlaw::propagate(&c0, &basis, tau, schedule.hbar);
        let obs = sqrtlaw::sqrtlaw_observables(&ct, &schedule, &basis, t)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let (l, ldot, _) = schedule.eval_length(t).map_err(|e| anyhow::anyhow!("{e}"))?;
        let (i0, im_i1, _) = obs.force.raw.triple();
        rows.push(TraceRow {
            t,
            l,
            ldot,
            energy: obs.energy,
            f_ad: obs.force.adiabatic,
            f_nonad: obs.force.non_adiabatic,
            raw: [i0, im_i1, obs.i2_bar],
        });
    }
    Ok(EngineTrace {
        engine: Engine::SqrtLaw,
        raw_labels: ("i0_bar", "im_i1_bar", "i2_bar"),
        rows,
        summary: json!({
            "hbar_b": basis.hbar_b,
            "k_roots_head": basis.roots.iter().take(4).copied().collect::<Vec<_>>(),
        }),
    })
}

fn run_softwall(sc: &Scenario) -> anyhow::Result<EngineTrace> {
    let basis =
        HermiteBasis::build(sc.n_max, sc.schedule.hbar).map_err(|e| anyhow::anyhow!("{e}"))?;
    let c0 = softwall::softwall_coefficients(sc.level, &sc.schedule, &basis)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut rows = Vec::with_capacity(sc.times.len());
    let mut last_dev = 0.0;
    for &t in &sc.times {
        let tau = sc.schedule.scaled_time(t).map_err(|e| anyhow::anyhow!("{e}"))?;
        let ct = softwall::propagate(&c0, tau);
        let (energy, force) = softwall::softwall_energy_force(&ct, &sc.schedule, t, &basis)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let (f_op, f_fd) = softwall::force_routes(&ct, &sc.schedule, t, &basis)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        last_dev = (f_op - f_fd).abs() / f_op.abs().max(1e-300);
        let (l, ldot, _) = sc.schedule.eval_length(t).map_err(|e| anyhow::anyhow!("{e}"))?;
        let (k0, im_k1, k2) = force.raw.triple();
        rows.push(TraceRow {
            t,
            l,
            ldot,
            energy,
            f_ad: force.adiabatic,
            f_nonad: force.non_adiabatic,
            raw: [k0, im_k1, k2],
        });
    }
    Ok(EngineTrace {
        engine: Engine::SoftWall,
        raw_labels: ("k0", "im_k1", "k2"),
        rows,
        summary: json!({ "route_rel_deviation": last_dev }),
    })
}

fn run_oracle(sc: &Scenario) -> anyhow::Result<EngineTrace> {
    let cfg = OracleConfig { grid_points: sc.oracle.grid_points, dt: sc.oracle.dt };
    let snaps = pde::integrate_box(sc.level, &sc.schedule, cfg, &sc.times)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut rows = Vec::with_capacity(snaps.len());
    for s in &snaps {
        let (eb, fb) = pde::observables_box(s, &sc.schedule).map_err(|e| anyhow::anyhow!("{e}"))?;
        let (l, ldot, _) = sc.schedule.eval_length(s.t).map_err(|e| anyhow::anyhow!("{e}"))?;
        rows.push(TraceRow {
            t: s.t,
            l,
            ldot,
            energy: eb.energy,
            f_ad: fb.adiabatic,
            f_nonad: fb.non_adiabatic,
            raw: [eb.i0, eb.im_i1, eb.i2],
        });
    }
    Ok(EngineTrace {
        engine: Engine::Oracle,
        raw_labels: ("i0", "im_i1", "i2"),
        rows,
        summary: json!({
            "grid_points": sc.oracle.grid_points,
            "dt": sc.oracle.dt,
        }),
    })
}

/// Pairwise max relative deviations of F_total and E across engine traces at
/// shared sample times.
pub fn comparison_block(traces: &[EngineTrace]) -> serde_json::Value {
    let mut pairs = Vec::new();
    for i in 0..traces.len() {
        for j in (i + 1)..traces.len() {
            let a = &traces[i];
            let b = &traces[j];
            let mut max_f: f64 = 0.0;
            let mut max_e: f64 = 0.0;
            for (ra, rb) in a.rows.iter().zip(&b.rows) {
                if (ra.t - rb.t).abs() > 1e-12 {
                    continue;
                }
                let fa = ra.f_ad + ra.f_nonad;
                let fb = rb.f_ad + rb.f_nonad;
                max_f = max_f.max((fa - fb).abs() / fa.abs().max(1e-300));
                max_e = max_e.max((ra.energy - rb.energy).abs() / ra.energy.abs().max(1e-300));
            }
            pairs.push(json!({
                "a": a.engine.tag(),
                "b": b.engine.tag(),
                "max_rel_f_total": max_f,
                "max_rel_energy": max_e,
            }));
        }
    }
    json!(pairs)
}

/// Velocity-squared coefficients of both hard-wall routes with their ratio.
pub fn coefficient_block(sc: &Scenario) -> anyhow::Result<serde_json::Value> {
    let c = perturbative::coefficient_c(&sc.model, sc.schedule.hbar, sc.schedule.l0, 10_000)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let cp = hardwall::nonadiabatic_coefficient_exact(&sc.model, &sc.schedule, 20_000)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(json!({
        "c_perturbative": c.value,
        "c_perturbative_tail_bound": c.tail_bound,
        "c_prime_exact": cp.value,
        "c_prime_tail_bound": cp.tail_bound,
        "ratio_c_prime_over_c": cp.value / c.value,
    }))
}

/// Adiabatic force at the initial length (the L(0) variant of the S1 sum).
pub fn adiabatic_at_start(sc: &Scenario) -> anyhow::Result<f64> {
    adiabatic_force(&sc.model, sc.schedule.l0, sc.n_max).map_err(|e| anyhow::anyhow!("{e}"))
}

/// One sweep evaluation: the non-adiabatic force of `engine` at velocity v
/// and time t_eval.
pub fn sweep_force(engine: Engine, sc: &Scenario, v: f64, t_eval: f64) -> anyhow::Result<f64> {
    match engine {
        Engine::Exact => {
            let w = WallSchedule::linear(sc.schedule.l0, v)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .with_hbar(sc.schedule.hbar);
            let jt = JTable::build(sc.n_max).map_err(|e| anyhow::anyhow!("{e}"))?;
            let tr = hardwall::trajectory(sc.level, &w, sc.n_max, &[t_eval], sc.mode, &jt)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok(tr.samples[0].force.non_adiabatic)
        }
        Engine::Perturbative => {
            let w = WallSchedule::linear(sc.schedule.l0, v)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .with_hbar(sc.schedule.hbar);
            let mut cutoff = sc.n_max.max(128);
            let pf = perturbative_at(sc, &w, t_eval, &mut cutoff)?;
            Ok(pf.s2 + pf.s3)
        }
        Engine::SoftWall => {
            let w = WallSchedule::linear(sc.schedule.l0, v)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .with_hbar(sc.schedule.hbar);
            let basis = HermiteBasis::build(sc.n_max, w.hbar).map_err(|e| anyhow::anyhow!("{e}"))?;
            let (_, f) = softwall::trajectory_point(sc.level, &w, &basis, t_eval)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok(f.non_adiabatic)
        }
        Engine::SqrtLaw => {
            let b2 = as_sqrtlaw(&sc.schedule)?.b_squared();
            let l0 = sc.schedule.l0;
            let b = 2.0 * l0 * v;
            if b * b < b2 {
                bail!("validation error: velocity {v} too small for B^2 = {b2} (need 4 L0^2 v^2 >= B^2)");
            }
            let a = (b * b - b2) / (4.0 * l0 * l0);
            let w = WallSchedule::sqrt_law(a, b, l0 * l0)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .with_hbar(sc.schedule.hbar);
            let basis = KummerBasis::build(w.hbar * b2.sqrt(), sc.n_max)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let c0 = sqrtlaw::sqrtlaw_coefficients(sc.level, &w, &basis)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let tau = w.scaled_time(t_eval).map_err(|e| anyhow::anyhow!("{e}"))?;
            let ct = sqrtlaw::propagate(&c0, &basis, tau, w.hbar);
            Ok(sqrtlaw::sqrtlaw_force(&ct, &w, &basis, t_eval)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .non_adiabatic)
        }
        Engine::Oracle | Engine::All => bail!("sweep supports exact|perturbative|sqrtlaw|softwall"),
    }
}

/// Reference coefficient the sweep prefactor is compared against.
pub fn sweep_reference(engine: Engine, sc: &Scenario) -> anyhow::Result<Option<(String, f64)>> {
    Ok(match engine {
        Engine::Exact => {
            let cp = hardwall::nonadiabatic_coefficient_exact(&sc.model, &sc.schedule, 20_000)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            Some(("c_prime_exact".into(), cp.value))
        }
        Engine::Perturbative => {
            let c =
                perturbative::coefficient_c(&sc.model, sc.schedule.hbar, sc.schedule.l0, 10_000)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
            Some(("c_perturbative".into(), c.value))
        }
        Engine::SoftWall => Some((
            "c_soft".into(),
            softwall::softwall_coefficient(&sc.model, &sc.schedule, sc.n_max),
        )),
        _ => None,
    })
}
