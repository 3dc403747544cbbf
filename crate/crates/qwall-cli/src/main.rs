//! qwall: scenario runner for the moving-wall quantum gas force engines.
//!
//! Subcommands: run, sweep, compare, roots, jtable, selftest. All outputs are
//! deterministic (fixed formatting, no timestamps); re-running a config
//! reproduces the files byte for byte.

mod config;
mod engines;
mod output;

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use config::{Engine, Scenario};
use output::{fmt, write_json, write_trace};

#[derive(Parser)]
#[command(name = "qwall", version, about = "Quantum gas forces on a moving cavity wall")]
struct Cli {
    /// Print the accepted configuration schema and exit.
    #[arg(long, global = true)]
    print_schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Scenario configuration file (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Output directory for CSV traces and the JSON summary.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,

    /// Override the configured engine.
    #[arg(long)]
    engine: Option<String>,

    /// Override the configured basis truncation.
    #[arg(long)]
    nmax: Option<usize>,

    /// Override the evaluation mode (instantaneous | time-averaged).
    #[arg(long)]
    mode: Option<String>,

    /// Assert seed-free determinism (always on; no randomness anywhere).
    #[arg(long)]
    seedless: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured engine(s) over the time grid.
    Run(CommonArgs),
    /// Sweep wall velocities and fit the quadratic law.
    Sweep(CommonArgs),
    /// Run every applicable engine and emit a cross-engine comparison.
    Compare(CommonArgs),
    /// Tabulate Kummer eigenvalues K_n against the semiclassical guesses.
    Roots {
        /// Comma-separated hbar*B values.
        #[arg(long, value_delimiter = ',')]
        hbarb: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Dump the J1/J2/J3 closed-form tables.
    Jtable {
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Run the acceptance checklist.
    Selftest,
}

fn main() {
    let cli = Cli::parse();
    if cli.print_schema {
        print!("{}", config::SCHEMA);
        return;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (try --help)");
        std::process::exit(2);
    };
    let code = match dispatch(command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn dispatch(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Run(args) => cmd_run(args, false),
        Command::Compare(args) => cmd_run(args, true),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Roots { hbarb, nmax, out_dir } => cmd_roots(&hbarb, nmax, &out_dir),
        Command::Jtable { nmax, out_dir } => cmd_jtable(nmax, &out_dir),
        Command::Selftest => cmd_selftest(),
    }
}

fn load_scenario(args: &CommonArgs) -> anyhow::Result<Scenario> {
    let mut cfg = config::load(&args.config)?;
    if let Some(engine) = &args.engine {
        cfg.scenario.engine = engine.clone();
    }
    if let Some(nmax) = args.nmax {
        cfg.scenario.n_max = nmax;
    }
    if let Some(mode) = &args.mode {
        cfg.scenario.mode = mode.clone();
    }
    config::validate(&cfg)
}

fn scenario_json(sc: &Scenario) -> serde_json::Value {
    json!({
        "wall": {
            "kind": format!("{:?}", sc.schedule.kind),
            "l0": sc.schedule.l0,
            "ldot0": sc.schedule.ldot0,
            "b_squared": sc.schedule.b_squared(),
            "hbar": sc.schedule.hbar,
        },
        "occupation": format!("{:?}", sc.model),
        "engine": sc.engine.tag(),
        "level": sc.level,
        "n_max": sc.n_max,
        "mode": format!("{:?}", sc.mode),
        "t_first": sc.times.first(),
        "t_last": sc.times.last(),
        "t_samples": sc.times.len(),
        "validity_window": { "lo": sc.window.0, "hi": sc.window.1, "warning": sc.window_warning },
    })
}

fn cmd_run(args: CommonArgs, compare: bool) -> anyhow::Result<i32> {
    // validate before creating any output path
    let sc = load_scenario(&args)?;
    let engine_set: Vec<Engine> = if compare || sc.engine == Engine::All {
        if sc.engine == Engine::SoftWall {
            vec![Engine::SoftWall]
        } else {
            engines::applicable(&sc)
        }
    } else {
        vec![sc.engine]
    };

    let traces: Vec<engines::EngineTrace> = engine_set
        .par_iter()
        .map(|&e| engines::run_engine(e, &sc))
        .collect::<anyhow::Result<Vec<_>>>()?;

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let mut engine_summaries = serde_json::Map::new();
    for tr in &traces {
        let path = args.out_dir.join(format!("trace_{}.csv", tr.engine.tag()));
        write_trace(&path, tr.engine.tag(), tr.raw_labels, &tr.rows)?;
        engine_summaries.insert(tr.engine.tag().to_string(), tr.summary.clone());
    }

    let mut summary = json!({
        "scenario": scenario_json(&sc),
        "engines": engine_set.iter().map(|e| e.tag()).collect::<Vec<_>>(),
        "engine_details": engine_summaries,
        "adiabatic_force_at_l0": engines::adiabatic_at_start(&sc)?,
    });
    let is_hard_wall = !matches!(sc.engine, Engine::SoftWall);
    if is_hard_wall {
        summary["coefficients"] = engines::coefficient_block(&sc)?;
    }
    if compare || sc.engine == Engine::All {
        summary["comparison"] = engines::comparison_block(&traces);
    }
    write_json(&args.out_dir.join("summary.json"), &summary)?;
    println!(
        "wrote {} trace(s) and summary.json to {}",
        traces.len(),
        args.out_dir.display()
    );
    Ok(0)
}

fn fit_log_log(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in pts {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

fn cmd_sweep(args: CommonArgs) -> anyhow::Result<i32> {
    let sc = load_scenario(&args)?;
    let engine = if sc.engine == Engine::All { Engine::Exact } else { sc.engine };
    let mut velocities = sc.sweep.velocities.clone();
    velocities.sort_by(|a, b| a.partial_cmp(b).unwrap());
    velocities.dedup();
    if velocities.len() < 4 {
        bail!("validation error: sweep needs at least 4 velocities");
    }
    if velocities.iter().any(|&v| !(v > 0.0)) {
        bail!("validation error: sweep velocities must be positive");
    }
    if velocities.last().unwrap() / velocities.first().unwrap() < 10.0 {
        bail!("validation error: sweep velocities must span at least one decade");
    }
    let t_eval = sc.sweep.t_eval;

    let forces: Vec<(f64, f64, f64)> = velocities
        .par_iter()
        .map(|&v| -> anyhow::Result<(f64, f64, f64)> {
            let fp = engines::sweep_force(engine, &sc, v, t_eval)?;
            let fm = engines::sweep_force(engine, &sc, -v, t_eval)?;
            Ok((v, fp, fm))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    for &(v, fp, fm) in &forces {
        if fp.abs() < 1e-14 || fm.abs() < 1e-14 {
            bail!(
                "degenerate-fit error: |F_nonad| below the 1e-14 floor at velocity {v} \
                 (got {fp:.3e} / {fm:.3e})"
            );
        }
    }
    let pts_p: Vec<(f64, f64)> = forces.iter().map(|&(v, fp, _)| (v, fp.abs())).collect();
    let pts_m: Vec<(f64, f64)> = forces.iter().map(|&(v, _, fm)| (v, fm.abs())).collect();
    let (slope_p, icept_p) = fit_log_log(&pts_p);
    let (slope_m, icept_m) = fit_log_log(&pts_m);
    let sign = forces[0].1.signum();
    let prefactor_p = sign * icept_p.exp();
    let prefactor_m = forces[0].2.signum() * icept_m.exp();

    std::fs::create_dir_all(&args.out_dir)?;
    {
        use std::io::Write;
        let mut f = std::fs::File::create(args.out_dir.join("sweep.csv"))?;
        writeln!(f, "ldot0,f_nonad_pos,f_nonad_neg,engine")?;
        for &(v, fp, fm) in &forces {
            writeln!(f, "{},{},{},{}", fmt(v), fmt(fp), fmt(fm), engine.tag())?;
        }
    }

    let reference = engines::sweep_reference(engine, &sc)?;
    let mut summary = json!({
        "scenario": scenario_json(&sc),
        "sweep_engine": engine.tag(),
        "t_eval": t_eval,
        "slope_pos": slope_p,
        "slope_neg": slope_m,
        "prefactor_pos": prefactor_p,
        "prefactor_neg": prefactor_m,
        "prefactor_pair_rel_diff": (prefactor_p - prefactor_m).abs() / prefactor_p.abs(),
    });
    if let Some((name, cref)) = reference {
        // F_nonad = coeff * Ldot^2 / L0 at t_eval = 0
        let fitted_coeff = prefactor_p * sc.schedule.l0;
        summary["reference"] = json!({
            "name": name,
            "value": cref,
            "fitted_coefficient": fitted_coeff,
            "fitted_over_reference": fitted_coeff / cref,
        });
    }
    write_json(&args.out_dir.join("summary.json"), &summary)?;
    println!(
        "sweep: slope = {slope_p:.6} (+Ldot), {slope_m:.6} (-Ldot); wrote {}",
        args.out_dir.join("sweep.csv").display()
    );
    Ok(0)
}

fn cmd_roots(hbarb: &[f64], nmax: usize, out_dir: &std::path::Path) -> anyhow::Result<i32> {
    if hbarb.is_empty() {
        bail!("usage error: roots needs at least one --hbarb value");
    }
    if nmax == 0 {
        bail!("usage error: nmax must be >= 1");
    }
    std::fs::create_dir_all(out_dir)?;
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for &hb in hbarb {
        for n in 1..=nmax {
            let guess = (n as f64 * std::f64::consts::PI).powi(2) / 2.0;
            match qwall::sqrtlaw::find_root(hb, n) {
                Ok(k) => rows.push((hb, n, k, guess, k / guess - 1.0)),
                Err(e) => failures.push(json!({
                    "hbar_b": hb,
                    "n": n,
                    "error": e.to_string(),
                })),
            }
        }
    }
    {
        use std::io::Write;
        let mut f = std::fs::File::create(out_dir.join("roots.csv"))?;
        writeln!(f, "hbar_b,n,k_n,semiclassical,rel_deviation")?;
        for (hb, n, k, guess, dev) in &rows {
            writeln!(f, "{},{},{},{},{}", fmt(*hb), n, fmt(*k), fmt(*guess), fmt(*dev))?;
        }
    }
    let summary = json!({
        "hbar_b_values": hbarb,
        "n_max": nmax,
        "rows_written": rows.len(),
        "failures": failures,
    });
    write_json(&out_dir.join("summary.json"), &summary)?;
    println!("wrote {} root rows to {}", rows.len(), out_dir.join("roots.csv").display());
    Ok(0)
}

fn cmd_jtable(nmax: usize, out_dir: &std::path::Path) -> anyhow::Result<i32> {
    if nmax == 0 {
        bail!("usage error: nmax must be >= 1");
    }
    std::fs::create_dir_all(out_dir)?;
    use std::io::Write;
    let mut f = std::fs::File::create(out_dir.join("jtable.csv"))?;
    writeln!(f, "n,l,j1,j2,j3")?;
    for n in 1..=nmax {
        for l in 1..=nmax {
            writeln!(
                f,
                "{},{},{},{},{}",
                n,
                l,
                fmt(qwall::jtable::j1(n, l)),
                fmt(qwall::jtable::j2(n, l)),
                fmt(qwall::jtable::j3(n, l))
            )?;
        }
    }
    write_json(
        &out_dir.join("summary.json"),
        &json!({ "n_max": nmax, "rows_written": nmax * nmax }),
    )?;
    println!("wrote {}", out_dir.join("jtable.csv").display());
    Ok(0)
}

fn cmd_selftest() -> anyhow::Result<i32> {
    let reports = qwall::acceptance::run_all();
    let mut all = true;
    for r in &reports {
        println!("{}", r.line());
        all &= r.passed;
    }
    Ok(if all { 0 } else { 1 })
}
