//! Scenario configuration: TOML schema, validation, and the construction of
//! core objects from it.

use anyhow::{bail, Context};
use serde::Deserialize;

use qwall::occupation::OccupationModel;
use qwall::schedule::WallSchedule;

/// Annotated schema dumped by `--print-schema`.
pub const SCHEMA: &str = r#"# qwall scenario configuration (TOML)

[wall]
kind = "linear"       # "fixed" | "linear" | "sqrt-law"
l0 = 1.0              # cavity length at t = 0 (fixed/linear kinds)
ldot0 = 0.02          # wall velocity at t = 0 (linear kind)
# sqrt-law kind instead uses L(t) = sqrt(a t^2 + b t + c):
# a = 1.0
# b = 2.0
# c = 1.0             # c = L0^2; Ldot(0) = b / (2 sqrt(c))
hbar = 1.0            # optional, default 1

[occupation]
mode = "zero-temperature"   # "zero-temperature" | "finite-temperature"
n_particles = 1             # zero-temperature filling 1..N
# beta = 1.0                # finite-temperature inverse temperature
# mu = 12.0                 # finite-temperature chemical potential

[scenario]
engine = "exact"      # "exact" | "perturbative" | "sqrtlaw" | "softwall" | "oracle" | "all"
level = 1             # initial eigenstate: 1-based box index; 0-based oscillator level for softwall
n_max = 64            # basis truncation
mode = "instantaneous"   # "instantaneous" | "time-averaged"
t_start = 0.0
t_end = 2.0
t_samples = 41        # >= 1; the time grid is uniform over [t_start, t_end]

[oracle]              # optional grid-integrator overrides
grid_points = 2048
dt = 1e-4

[sweep]               # used by the `sweep` subcommand
velocities = [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2]
t_eval = 0.0          # evaluation time of the swept force
"#;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub wall: WallSection,
    pub occupation: OccupationSection,
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallSection {
    pub kind: String,
    pub l0: Option<f64>,
    pub ldot0: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupationSection {
    pub mode: String,
    pub n_particles: Option<usize>,
    pub beta: Option<f64>,
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub engine: String,
    #[serde(default = "default_level")]
    pub level: usize,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default)]
    pub t_start: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_t_samples")]
    pub t_samples: usize,
}

fn default_level() -> usize {
    1
}
fn default_n_max() -> usize {
    64
}
fn default_mode() -> String {
    "instantaneous".into()
}
fn default_t_end() -> f64 {
    2.0
}
fn default_t_samples() -> usize {
    41
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

fn default_grid() -> usize {
    2048
}
fn default_dt() -> f64 {
    1e-4
}

impl Default for OracleSection {
    fn default() -> Self {
        Self { grid_points: default_grid(), dt: default_dt() }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub velocities: Vec<f64>,
    #[serde(default)]
    pub t_eval: f64,
}

/// Engine selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exact,
    Perturbative,
    SqrtLaw,
    SoftWall,
    Oracle,
    All,
}

impl Engine {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "exact" => Self::Exact,
            "perturbative" => Self::Perturbative,
            "sqrtlaw" => Self::SqrtLaw,
            "softwall" => Self::SoftWall,
            "oracle" => Self::Oracle,
            "all" => Self::All,
            other => bail!("validation error: unknown engine '{other}'"),
        })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Perturbative => "perturbative",
            Self::SqrtLaw => "sqrtlaw",
            Self::SoftWall => "softwall",
            Self::Oracle => "oracle",
            Self::All => "all",
        }
    }
}

/// Everything validated and constructed, ready for the engines.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub schedule: WallSchedule,
    pub model: OccupationModel,
    pub engine: Engine,
    pub level: usize,
    pub n_max: usize,
    pub mode: qwall::hardwall::EvalMode,
    pub times: Vec<f64>,
    pub oracle: OracleSection,
    pub sweep: SweepSection,
    /// Set when the sampled window leaves the sudden-start validity range.
    pub window_warning: bool,
    pub window: (f64, f64),
}

pub fn load(path: &std::path::Path) -> anyhow::Result<Config> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let cfg: Config = toml::from_str(&text).context("cannot parse config")?;
    Ok(cfg)
}

pub fn validate(cfg: &Config) -> anyhow::Result<Scenario> {
    let w = &cfg.wall;
    let schedule = match w.kind.as_str() {
        "fixed" => {
            let l0 = w.l0.context("validation error: fixed wall needs l0")?;
            WallSchedule::fixed(l0)
        }
        "linear" => {
            let l0 = w.l0.context("validation error: linear wall needs l0")?;
            let ld = w.ldot0.context("validation error: linear wall needs ldot0")?;
            WallSchedule::linear(l0, ld)
        }
        "sqrt-law" => {
            let a = w.a.context("validation error: sqrt-law wall needs a")?;
            let b = w.b.context("validation error: sqrt-law wall needs b")?;
            let c = w.c.context("validation error: sqrt-law wall needs c")?;
            WallSchedule::sqrt_law(a, b, c)
        }
        other => bail!("validation error: unknown wall kind '{other}'"),
    }
    .map_err(|e| anyhow::anyhow!("{e}"))?
    .with_hbar(w.hbar);
    if !(schedule.hbar > 0.0) {
        bail!("validation error: hbar must be positive");
    }

    let model = match cfg.occupation.mode.as_str() {
        "zero-temperature" => OccupationModel::zero_t(
            cfg.occupation
                .n_particles
                .context("validation error: zero-temperature occupation needs n_particles")?,
        ),
        "finite-temperature" => OccupationModel::finite_t(
            cfg.occupation
                .beta
                .context("validation error: finite-temperature occupation needs beta")?,
            cfg.occupation
                .mu
                .context("validation error: finite-temperature occupation needs mu")?,
        ),
        other => bail!("validation error: unknown occupation mode '{other}'"),
    }
    .map_err(|e| anyhow::anyhow!("{e}"))?;

    let engine = Engine::parse(&cfg.scenario.engine)?;
    let mode = match cfg.scenario.mode.as_str() {
        "instantaneous" => qwall::hardwall::EvalMode::Instantaneous,
        "time-averaged" => qwall::hardwall::EvalMode::TimeAveraged,
        other => bail!("validation error: unknown evaluation mode '{other}'"),
    };

    let sc = &cfg.scenario;
    if sc.t_end < sc.t_start {
        bail!("validation error: t_end < t_start");
    }
    if sc.t_samples == 0 {
        bail!("validation error: t_samples must be >= 1");
    }
    if sc.t_start < 0.0 {
        bail!("validation error: t_start must be >= 0 (the wall starts moving at t = 0)");
    }
    if engine != Engine::SoftWall && sc.level == 0 {
        bail!("validation error: level is a 1-based box index for this engine");
    }
    if engine != Engine::SoftWall && sc.level > sc.n_max {
        bail!("validation error: level exceeds n_max");
    }
    if engine == Engine::SoftWall && sc.level + 1 > sc.n_max {
        bail!("validation error: oscillator level exceeds n_max");
    }
    // engines must see a positive length over the whole window
    schedule
        .eval_length(sc.t_end)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    if cfg.oracle.grid_points < 16 || cfg.oracle.grid_points % 2 != 0 {
        bail!("validation error: oracle grid_points must be even and >= 16");
    }
    if !(cfg.oracle.dt > 0.0) {
        bail!("validation error: oracle dt must be positive");
    }

    let mut times: Vec<f64> = (0..sc.t_samples)
        .map(|i| {
            if sc.t_samples == 1 {
                sc.t_start
            } else {
                sc.t_start + (sc.t_end - sc.t_start) * i as f64 / (sc.t_samples - 1) as f64
            }
        })
        .collect();
    // oracle participation snaps samples onto step multiples
    if engine == Engine::Oracle || engine == Engine::All {
        for t in times.iter_mut() {
            *t = (*t / cfg.oracle.dt).round() * cfg.oracle.dt;
        }
        times.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    }

    let highest = model.highest_relevant(schedule.l0, sc.n_max);
    let window = schedule.validity_window(highest);
    let window_warning = schedule.ldot0 != 0.0
        && times
            .iter()
            .any(|&t| t > 0.0 && !(t > window.0 && t < window.1));

    Ok(Scenario {
        schedule,
        model,
        engine,
        level: sc.level,
        n_max: sc.n_max,
        mode,
        times,
        oracle: cfg.oracle.clone(),
        sweep: cfg.sweep.clone(),
        window_warning,
        window,
    })
}
