//! End-to-end reproduction runs, evaluation metrics, TOML configuration
//! and result export.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    assemble_chaplygin, chaplygin_to_state_space, max_relative_deviation, select_gravity,
    siso_system, vsr_system, DynamicsError, SegwayCoefficients, SystemModel, VsrParameters,
    PUBLISHED_SEGWAY_COEFFICIENTS,
};
use crate::irl::{
    learn, simulate, simulate_sampled, CostSpec, EpisodeConfig, ExplorationSignal, IrlError,
    LearningHistory, LearningProblem,
};
use crate::numerics::{Matrix, Vector};
use crate::smc::{
    check_saturation_conditions, default_grid, ConditionReport, SaturationFunction,
    SlidingModeConfig, SmcController, SmcError, SrbfBasis, DEFAULT_TAIL,
};
use crate::trajectory::TrajectoryLog;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Numerical(#[from] IrlError),
    #[error(transparent)]
    Model(#[from] DynamicsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl From<SmcError> for ExperimentError {
    fn from(err: SmcError) -> Self {
        match err {
            SmcError::ControlSingular { .. } => ExperimentError::Numerical(err.into()),
            other => ExperimentError::Config(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemSelector {
    Siso,
    Vsr,
    VsrFromChaplygin,
}

impl SystemSelector {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "siso" => Some(Self::Siso),
            "vsr" => Some(Self::Vsr),
            "vsr-from-chaplygin" => Some(Self::VsrFromChaplygin),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Siso => "siso",
            Self::Vsr => "vsr",
            Self::VsrFromChaplygin => "vsr-from-chaplygin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmcSection {
    /// Manifold coefficients, one row per state (n rows of m entries).
    pub c: Vec<Vec<f64>>,
    pub w: Vec<f64>,
    pub k: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSection {
    pub q: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActorSection {
    pub centers: Vec<f64>,
    pub widths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationSection {
    /// Closed-loop horizon after learning, seconds.
    pub horizon: f64,
    /// Trailing window for the chattering index, seconds.
    pub chattering_window: f64,
    /// Samples with `max |s_i|` below this count as inside the boundary layer.
    pub boundary_layer: f64,
    /// Hold the control constant over each integration step.
    pub sampled_control: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    /// Export the first state in degrees.
    pub degrees_x1: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub system: SystemSelector,
    pub smc: SmcSection,
    pub cost: CostSection,
    pub actor: ActorSection,
    pub episode: EpisodeConfig,
    pub exploration: Vec<f64>,
    pub evaluation: EvaluationSection,
    pub output: OutputSection,
    pub vsr: VsrParameters,
    /// Reserved; the pipeline is deterministic.
    pub seed: u64,
}

fn diag_rows(d: &[f64]) -> Vec<Vec<f64>> {
    (0..d.len())
        .map(|i| {
            (0..d.len())
                .map(|j| if i == j { d[i] } else { 0.0 })
                .collect()
        })
        .collect()
}

impl ExperimentConfig {
    /// SISO servo defaults.
    pub fn example1() -> Self {
        Self {
            name: "example1".into(),
            system: SystemSelector::Siso,
            smc: SmcSection {
                c: vec![vec![15.0], vec![1.0]],
                w: vec![10.0],
                k: vec![10.0],
            },
            cost: CostSection {
                q: diag_rows(&[10.0, 10.0]),
                r: diag_rows(&[1.0]),
            },
            actor: ActorSection {
                centers: vec![0.01, 0.03, 0.05, 0.1, 0.2, 0.5, 1.0],
                widths: vec![1.0; 7],
            },
            episode: EpisodeConfig {
                sample_interval: 0.01,
                samples: 200,
                initial_state: vec![2.0, 5.0],
                regularization: 0.01,
                tolerance: 1e-6,
                max_iterations: 10,
                integrator_substeps: 100,
            },
            exploration: vec![0.1],
            evaluation: EvaluationSection {
                horizon: 2.0,
                chattering_window: 1.0,
                boundary_layer: 0.1,
                sampled_control: true,
            },
            output: OutputSection {
                dir: String::new(),
                degrees_x1: false,
            },
            vsr: VsrParameters::default(),
            seed: 0,
        }
    }

    /// Two-wheeled robot (Segway mode) defaults.
    pub fn example2() -> Self {
        Self {
            name: "example2".into(),
            system: SystemSelector::Vsr,
            smc: SmcSection {
                c: vec![
                    vec![80.0, 1.0],
                    vec![3.0, 6.0],
                    vec![2.0, 2.0],
                    vec![-3.0, 3.0],
                    vec![3.0, -3.0],
                ],
                w: vec![5.0, 5.0],
                k: vec![50.0, 50.0],
            },
            cost: CostSection {
                q: diag_rows(&[1.0; 5]),
                r: diag_rows(&[1.0; 2]),
            },
            actor: ActorSection {
                centers: vec![0.01, 0.02, 0.03, 0.04, 0.05, 0.1, 0.2, 0.3],
                widths: vec![1.0; 8],
            },
            episode: EpisodeConfig {
                sample_interval: 0.01,
                samples: 300,
                initial_state: vec![0.1, 0.0, 0.0, 0.0, 0.0],
                regularization: 0.001,
                tolerance: 1e-6,
                max_iterations: 12,
                integrator_substeps: 100,
            },
            exploration: vec![0.01, 0.01],
            evaluation: EvaluationSection {
                horizon: 3.0,
                chattering_window: 1.0,
                boundary_layer: 0.1,
                sampled_control: true,
            },
            output: OutputSection {
                dir: String::new(),
                degrees_x1: false,
            },
            vsr: VsrParameters::default(),
            seed: 0,
        }
    }

    pub fn defaults_for(system: SystemSelector) -> Self {
        match system {
            SystemSelector::Siso => Self::example1(),
            SystemSelector::Vsr => Self::example2(),
            SystemSelector::VsrFromChaplygin => Self {
                system,
                ..Self::example2()
            },
        }
    }

    /// Layers an optional TOML file and `key.path=value` overrides on top
    /// of `base`, then validates.
    pub fn load(
        base: Self,
        file: Option<&Path>,
        overrides: &[String],
    ) -> Result<Self, ExperimentError> {
        let mut tree =
            toml::Table::try_from(&base).map_err(|e| ExperimentError::Config(e.to_string()))?;
        if let Some(path) = file {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            let layer: toml::Table =
                text.parse()
                    .map_err(|e: toml::de::Error| ExperimentError::Parse {
                        path: path.to_path_buf(),
                        message: e.to_string(),
                    })?;
            merge(&mut tree, layer);
        }
        for ov in overrides {
            apply_override(&mut tree, ov)?;
        }
        let cfg: Self = toml::Value::Table(tree)
            .try_into()
            .map_err(|e: toml::de::Error| ExperimentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn model(&self) -> Result<SystemModel, ExperimentError> {
        Ok(match self.system {
            SystemSelector::Siso => siso_system(),
            SystemSelector::Vsr => vsr_system(),
            SystemSelector::VsrFromChaplygin => {
                chaplygin_to_state_space(&assemble_chaplygin(&self.vsr)?)?
            }
        })
    }

    pub fn sliding_config(&self) -> Result<SlidingModeConfig, ExperimentError> {
        let c = rows_to_matrix(&self.smc.c, "smc.c")?;
        Ok(SlidingModeConfig::new(
            c,
            Vector::from_row_slice(&self.smc.w),
            Vector::from_row_slice(&self.smc.k),
        )?)
    }

    pub fn cost_spec(&self) -> Result<CostSpec, ExperimentError> {
        CostSpec::new(
            rows_to_matrix(&self.cost.q, "cost.q")?,
            rows_to_matrix(&self.cost.r, "cost.r")?,
        )
        .map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn basis(&self) -> Result<SrbfBasis, ExperimentError> {
        Ok(SrbfBasis::new(
            self.actor.centers.clone(),
            self.actor.widths.clone(),
        )?)
    }

    pub fn exploration_signal(&self) -> Result<ExplorationSignal, ExperimentError> {
        ExplorationSignal::new(self.exploration.clone())
            .map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let model = self.model()?;
        let (n, m) = (model.state_dim(), model.input_dim());
        let smc = self.sliding_config()?;
        if smc.state_dim() != n || smc.channels() != m {
            return Err(ExperimentError::Config(format!(
                "smc.c is {}×{} but {} has n = {n}, m = {m}",
                smc.state_dim(),
                smc.channels(),
                self.system.name()
            )));
        }
        let cost = self.cost_spec()?;
        if cost.q().nrows() != n || cost.r().nrows() != m {
            return Err(ExperimentError::Config(format!(
                "cost matrices must be {n}×{n} and {m}×{m}"
            )));
        }
        self.basis()?;
        if self.exploration.len() != m {
            return Err(ExperimentError::Config(format!(
                "exploration needs {m} amplitudes"
            )));
        }
        if !self.exploration.iter().any(|a| *a != 0.0) {
            return Err(ExperimentError::Config(
                "exploration must have a nonzero amplitude".into(),
            ));
        }
        self.exploration_signal()?;
        self.episode
            .validate()
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        if self.episode.initial_state.len() != n {
            return Err(ExperimentError::Config(format!(
                "episode.initial_state needs {n} entries"
            )));
        }
        let ev = &self.evaluation;
        if !(ev.horizon > 0.0) || !(ev.chattering_window > 0.0) || !(ev.boundary_layer >= 0.0) {
            return Err(ExperimentError::Config(
                "evaluation horizon and window must be positive".into(),
            ));
        }
        if ev.chattering_window > ev.horizon {
            return Err(ExperimentError::Config(
                "chattering window exceeds the evaluation horizon".into(),
            ));
        }
        crate::numerics::step_count(0.0, ev.horizon, self.episode.step())
            .map_err(|e| ExperimentError::Config(format!("evaluation horizon: {e}")))?;
        self.vsr.validate()?;
        Ok(())
    }
}

fn rows_to_matrix(rows: &[Vec<f64>], name: &str) -> Result<Matrix, ExperimentError> {
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(ExperimentError::Config(format!(
            "{name} must be a nonempty rectangular matrix"
        )));
    }
    Ok(Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn merge(base: &mut toml::Table, layer: toml::Table) {
    for (key, value) in layer {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(dst)), toml::Value::Table(src)) => merge(dst, src),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

fn apply_override(tree: &mut toml::Table, spec: &str) -> Result<(), ExperimentError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| ExperimentError::Config(format!("override `{spec}` is not key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(ExperimentError::Config(format!(
            "override `{spec}` has an empty key"
        )));
    }
    let value = parse_value(raw.trim());
    let (last, parents) = keys.split_last().expect("nonempty path");
    let mut node = tree;
    for key in parents {
        node = match node.get_mut(*key) {
            Some(toml::Value::Table(t)) => t,
            _ => {
                return Err(ExperimentError::Config(format!(
                    "override `{spec}`: no section `{key}`"
                )))
            }
        };
    }
    if !node.contains_key(*last) {
        return Err(ExperimentError::Config(format!(
            "override `{spec}`: unknown key `{last}`"
        )));
    }
    // Integers given for float fields stay valid after deserialization.
    let value = match (node.get(*last), value) {
        (Some(toml::Value::Float(_)), toml::Value::Integer(i)) => toml::Value::Float(i as f64),
        (_, v) => v,
    };
    node.insert(last.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Sign reversals and total variation over a trailing window.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ChatteringIndex {
    pub sign_reversals: usize,
    pub total_variation: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("empty trace")]
    Empty,
    #[error("window {window} exceeds trace duration {duration}")]
    Window { window: f64, duration: f64 },
    #[error("{0}")]
    Shape(String),
}

/// Chattering of a single channel: zero crossings of the deviation from
/// its mean over the final `window` seconds, and `Σ|u_{k+1} − u_k|` there.
pub fn channel_chattering(
    times: &[f64],
    values: &[f64],
    window: f64,
) -> Result<ChatteringIndex, MetricError> {
    if times.is_empty() || values.is_empty() {
        return Err(MetricError::Empty);
    }
    if times.len() != values.len() {
        return Err(MetricError::Shape(format!(
            "{} times for {} values",
            times.len(),
            values.len()
        )));
    }
    let end = *times.last().expect("nonempty");
    let duration = end - times[0];
    if window > duration + 1e-9 {
        return Err(MetricError::Window { window, duration });
    }
    let start = times.partition_point(|&t| t < end - window - 1e-9);
    let tail = &values[start..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let mut reversals = 0;
    let mut last_sign = 0.0;
    for v in tail {
        let dev = v - mean;
        let sign = if dev > 0.0 {
            1.0
        } else if dev < 0.0 {
            -1.0
        } else {
            0.0
        };
        if sign != 0.0 {
            if last_sign != 0.0 && sign != last_sign {
                reversals += 1;
            }
            last_sign = sign;
        }
    }
    let total_variation = tail.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok(ChatteringIndex {
        sign_reversals: reversals,
        total_variation,
    })
}

/// Per-channel chattering of a multi-input trace.
pub fn chattering_per_channel(
    times: &[f64],
    inputs: &[Vector],
    window: f64,
) -> Result<Vec<ChatteringIndex>, MetricError> {
    let m = inputs.first().ok_or(MetricError::Empty)?.len();
    (0..m)
        .map(|i| {
            let channel: Vec<f64> = inputs.iter().map(|u| u[i]).collect();
            channel_chattering(times, &channel, window)
        })
        .collect()
}

/// Worst channel: largest reversal count and largest total variation.
pub fn chattering_metric(
    times: &[f64],
    inputs: &[Vector],
    window: f64,
) -> Result<ChatteringIndex, MetricError> {
    let per = chattering_per_channel(times, inputs, window)?;
    Ok(ChatteringIndex {
        sign_reversals: per.iter().map(|c| c.sign_reversals).max().unwrap_or(0),
        total_variation: per.iter().map(|c| c.total_variation).fold(0.0, f64::max),
    })
}

/// Trapezoidal integral of the logged running cost.
pub fn total_cost(log: &TrajectoryLog) -> f64 {
    trapezoid(&log.times, &log.cost)
}

pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub total_cost: f64,
    pub chattering: Vec<ChatteringIndex>,
    /// Extremes of `SᵀṠ` over samples outside the boundary layer.
    pub lyapunov_min: Option<f64>,
    pub lyapunov_max: Option<f64>,
    pub final_state_norm: f64,
    pub conditions: ConditionReport,
}

impl MetricsReport {
    pub fn max_reversals(&self) -> usize {
        self.chattering
            .iter()
            .map(|c| c.sign_reversals)
            .max()
            .unwrap_or(0)
    }
}

pub fn evaluate_log(
    ctrl: &SmcController,
    log: &TrajectoryLog,
    eval: &EvaluationSection,
) -> Result<MetricsReport, ExperimentError> {
    let chattering = chattering_per_channel(&log.times, &log.inputs, eval.chattering_window)
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    let mut lyap: Option<(f64, f64)> = None;
    for (x, s) in log.states.iter().zip(&log.sliding) {
        if s.amax() > eval.boundary_layer {
            let v = ctrl.lyapunov_derivative(x)?;
            lyap = Some(match lyap {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        }
    }
    Ok(MetricsReport {
        total_cost: total_cost(log),
        chattering,
        lyapunov_min: lyap.map(|l| l.0),
        lyapunov_max: lyap.map(|l| l.1),
        final_state_norm: log.final_state().map_or(0.0, |x| x.norm()),
        conditions: check_saturation_conditions(ctrl.saturation(), &default_grid(), DEFAULT_TAIL),
    })
}

/// Assembled-versus-published Segway model comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaplyginComparison {
    pub g0: f64,
    pub assembled: [f64; 7],
    pub published: [f64; 7],
    pub max_relative_deviation: f64,
    /// Max state deviation between the two closed loops over 2 s.
    pub trajectory_deviation: f64,
}

/// Assembles the Segway equations, choosing `g0` automatically when not given.
pub fn verify_chaplygin(
    params: &VsrParameters,
    g0: Option<f64>,
) -> Result<ChaplyginComparison, ExperimentError> {
    let g0 = match g0 {
        Some(g) => g,
        None => select_gravity(params)?,
    };
    let cm = assemble_chaplygin(&params.with_gravity(g0))?;
    let assembled = cm.segway_coefficients()?.distinct();
    Ok(ChaplyginComparison {
        g0,
        assembled,
        published: PUBLISHED_SEGWAY_COEFFICIENTS,
        max_relative_deviation: max_relative_deviation(&assembled),
        trajectory_deviation: f64::NAN,
    })
}

/// Max state deviation of the assembled and published models under the
/// same saturation over `duration` seconds from `z`.
pub fn model_trajectory_deviation(
    cfg: &ExperimentConfig,
    g0: f64,
    sat: &SaturationFunction,
    duration: f64,
) -> Result<f64, ExperimentError> {
    let assembled = SegwayCoefficients::to_system(
        assemble_chaplygin(&cfg.vsr.with_gravity(g0))?.segway_coefficients()?,
        "vsr-from-chaplygin",
    );
    let published = vsr_system();
    let cost = cfg.cost_spec()?;
    let z = cfg.episode.initial();
    let off = ExplorationSignal::off(2);
    let mut logs = Vec::new();
    for model in [assembled, published] {
        let ctrl = SmcController::new(model, cfg.sliding_config()?, sat.clone())?;
        logs.push(closed_loop(cfg, &ctrl, &cost, &off, &z, duration)?);
    }
    Ok(logs[0]
        .states
        .iter()
        .zip(&logs[1].states)
        .map(|(a, b)| (a - b).amax())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    pub learned: SaturationFunction,
    pub history: LearningHistory,
    pub before: TrajectoryLog,
    pub after: TrajectoryLog,
    pub baseline: TrajectoryLog,
    pub metrics_before: MetricsReport,
    pub metrics_after: MetricsReport,
    pub metrics_baseline: MetricsReport,
    pub chaplygin: Option<ChaplyginComparison>,
}

impl ExperimentOutcome {
    pub fn theta_a(&self) -> &[f64] {
        self.learned.actor_weights().unwrap_or(&[])
    }

    pub fn theta_c(&self) -> &[f64] {
        self.history.last().map_or(&[], |r| &r.theta_c)
    }
}

/// Closed loop without exploration from the configured initial state.
pub fn evaluation_run(
    cfg: &ExperimentConfig,
    sat: SaturationFunction,
) -> Result<(SmcController, TrajectoryLog), ExperimentError> {
    let model = cfg.model()?;
    let m = model.input_dim();
    let ctrl = SmcController::new(model, cfg.sliding_config()?, sat)?;
    let log = closed_loop(
        cfg,
        &ctrl,
        &cfg.cost_spec()?,
        &ExplorationSignal::off(m),
        &cfg.episode.initial(),
        cfg.evaluation.horizon,
    )?;
    Ok((ctrl, log))
}

fn closed_loop(
    cfg: &ExperimentConfig,
    ctrl: &SmcController,
    cost: &CostSpec,
    expl: &ExplorationSignal,
    z: &Vector,
    duration: f64,
) -> Result<TrajectoryLog, ExperimentError> {
    let step = cfg.episode.step();
    Ok(if cfg.evaluation.sampled_control {
        simulate_sampled(ctrl, cost, expl, z, duration, step)?
    } else {
        simulate(ctrl, cost, expl, z, duration, step)?
    })
}

/// Trains, then evaluates the signum, tanh and learned controllers.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome, ExperimentError> {
    cfg.validate()?;
    let model = cfg.model()?;
    let smc = cfg.sliding_config()?;
    let basis = cfg.basis()?;
    let cost = cfg.cost_spec()?;
    let expl = cfg.exploration_signal()?;
    let (learned, history) = learn(&LearningProblem {
        model: &model,
        smc: &smc,
        basis: &basis,
        cost: &cost,
        exploration: &expl,
        episode: &cfg.episode,
    })?;

    let (ctrl_before, before) = evaluation_run(cfg, SaturationFunction::Signum)?;
    let (ctrl_after, after) = evaluation_run(cfg, learned.clone())?;
    let (ctrl_base, baseline) = evaluation_run(cfg, SaturationFunction::Tanh)?;
    let metrics_before = evaluate_log(&ctrl_before, &before, &cfg.evaluation)?;
    let metrics_after = evaluate_log(&ctrl_after, &after, &cfg.evaluation)?;
    let metrics_baseline = evaluate_log(&ctrl_base, &baseline, &cfg.evaluation)?;

    let chaplygin = if cfg.system == SystemSelector::Siso {
        None
    } else {
        let mut cmp = verify_chaplygin(&cfg.vsr, None)?;
        cmp.trajectory_deviation = model_trajectory_deviation(cfg, cmp.g0, &learned, 2.0)?;
        Some(cmp)
    };

    Ok(ExperimentOutcome {
        config: cfg.clone(),
        learned,
        history,
        before,
        after,
        baseline,
        metrics_before,
        metrics_after,
        metrics_baseline,
        chaplygin,
    })
}

/// Example 1 with `overrides` applied to its defaults.
pub fn run_example1(overrides: &[String]) -> Result<ExperimentOutcome, ExperimentError> {
    run_experiment(&ExperimentConfig::load(
        ExperimentConfig::example1(),
        None,
        overrides,
    )?)
}

/// Example 2 with `overrides` applied to its defaults.
pub fn run_example2(overrides: &[String]) -> Result<ExperimentOutcome, ExperimentError> {
    run_experiment(&ExperimentConfig::load(
        ExperimentConfig::example2(),
        None,
        overrides,
    )?)
}

/// Round-trip 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trajectory_header(n: usize, m: usize) -> Vec<String> {
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.extend((1..=m).map(|i| format!("u{i}")));
    header.extend((1..=m).map(|i| format!("s{i}")));
    header.push("r".into());
    header
}

pub fn write_trajectory(
    path: &Path,
    log: &TrajectoryLog,
    degrees_x1: bool,
) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(trajectory_header(log.state_dim(), log.input_dim()))
        .map_err(|e| csv_err(path, e))?;
    for k in 0..log.len() {
        let mut row = vec![fmt_f64(log.times[k])];
        for (i, x) in log.states[k].iter().enumerate() {
            let v = if i == 0 && degrees_x1 {
                x.to_degrees()
            } else {
                *x
            };
            row.push(fmt_f64(v));
        }
        row.extend(log.inputs[k].iter().map(|v| fmt_f64(*v)));
        row.extend(log.sliding[k].iter().map(|v| fmt_f64(*v)));
        row.push(fmt_f64(log.cost[k]));
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

fn csv_err(path: &Path, e: csv::Error) -> ExperimentError {
    ExperimentError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Trajectory columns read back from a CSV export.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    pub times: Vec<f64>,
    pub inputs: Vec<Vector>,
    pub cost: Vec<f64>,
}

pub fn read_trajectory(path: &Path) -> Result<TrajectoryTable, ExperimentError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let parse_err = |message: String| ExperimentError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let t_col = col("t").ok_or_else(|| parse_err("missing column t".into()))?;
    let r_col = col("r").ok_or_else(|| parse_err("missing column r".into()))?;
    let u_cols: Vec<usize> = (1..).map_while(|i| col(&format!("u{i}"))).collect();
    if u_cols.is_empty() {
        return Err(parse_err("no input columns".into()));
    }
    let mut table = TrajectoryTable {
        times: Vec::new(),
        inputs: Vec::new(),
        cost: Vec::new(),
    };
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let get = |c: usize| -> Result<f64, ExperimentError> {
            rec.get(c)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| parse_err(format!("row {}: bad value in column {c}", line + 2)))
        };
        table.times.push(get(t_col)?);
        table.cost.push(get(r_col)?);
        let u: Result<Vec<f64>, _> = u_cols.iter().map(|&c| get(c)).collect();
        table.inputs.push(Vector::from_vec(u?));
    }
    Ok(table)
}

pub fn history_header(critic: usize, actor: usize) -> Vec<String> {
    let mut header: Vec<String> = [
        "iteration",
        "episode_cost",
        "policy_change",
        "residual_rms",
        "rank",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((1..=critic).map(|i| format!("theta_c{i}")));
    header.extend((1..=actor).map(|i| format!("theta_a{i}")));
    header
}

pub fn write_history(
    path: &Path,
    history: &LearningHistory,
    critic: usize,
    actor: usize,
) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(history_header(critic, actor))
        .map_err(|e| csv_err(path, e))?;
    for r in &history.records {
        let mut row = vec![
            r.iteration.to_string(),
            fmt_f64(r.episode_cost),
            fmt_f64(r.policy_change),
            fmt_f64(r.residual_rms),
            r.rank.to_string(),
        ];
        row.extend(r.theta_c.iter().chain(&r.theta_a).map(|v| fmt_f64(*v)));
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

/// Learned controller file, loadable without retraining.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub system: SystemSelector,
    pub saturation: SaturationFunction,
    pub theta_c: Vec<f64>,
}

impl WeightsFile {
    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let w: Self = toml::from_str(&text).map_err(|e| ExperimentError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        w.saturation.validate()?;
        Ok(w)
    }

    pub fn save(&self, path: &Path) -> Result<(), ExperimentError> {
        let text = toml::to_string(self).map_err(|e| ExperimentError::Config(e.to_string()))?;
        fs::write(path, text).map_err(io_err(path))
    }
}

fn push_kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}={value}");
}

fn push_metrics(out: &mut String, prefix: &str, m: &MetricsReport) {
    push_kv(out, &format!("{prefix}.total_cost"), fmt_f64(m.total_cost));
    push_kv(
        out,
        &format!("{prefix}.final_state_norm"),
        fmt_f64(m.final_state_norm),
    );
    for (i, c) in m.chattering.iter().enumerate() {
        push_kv(
            out,
            &format!("{prefix}.u{}.sign_reversals", i + 1),
            c.sign_reversals,
        );
        push_kv(
            out,
            &format!("{prefix}.u{}.total_variation", i + 1),
            fmt_f64(c.total_variation),
        );
    }
    let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), fmt_f64);
    push_kv(out, &format!("{prefix}.lyapunov_min"), opt(m.lyapunov_min));
    push_kv(out, &format!("{prefix}.lyapunov_max"), opt(m.lyapunov_max));
    let c = &m.conditions;
    push_kv(out, &format!("{prefix}.condition_a"), c.sign_agreement);
    push_kv(out, &format!("{prefix}.condition_b"), c.zero_at_origin);
    push_kv(out, &format!("{prefix}.condition_c"), c.tail_limit);
    push_kv(out, &format!("{prefix}.condition_d"), c.odd);
    push_kv(out, &format!("{prefix}.condition_e"), c.bounded);
}

pub fn metrics_text(outcome: &ExperimentOutcome) -> String {
    let mut out = String::new();
    push_kv(&mut out, "experiment", &outcome.config.name);
    push_kv(&mut out, "system", outcome.config.system.name());
    push_kv(&mut out, "iterations", outcome.history.len());
    push_kv(&mut out, "converged", outcome.history.converged);
    for (i, v) in outcome.theta_a().iter().enumerate() {
        push_kv(&mut out, &format!("theta_a{}", i + 1), fmt_f64(*v));
    }
    push_metrics(&mut out, "signum", &outcome.metrics_before);
    push_metrics(&mut out, "tanh", &outcome.metrics_baseline);
    push_metrics(&mut out, "learned", &outcome.metrics_after);
    if let Some(cmp) = &outcome.chaplygin {
        push_kv(&mut out, "chaplygin.g0", cmp.g0);
        for (i, (a, p)) in cmp.assembled.iter().zip(&cmp.published).enumerate() {
            push_kv(
                &mut out,
                &format!("chaplygin.coefficient{}.assembled", i + 1),
                fmt_f64(*a),
            );
            push_kv(
                &mut out,
                &format!("chaplygin.coefficient{}.delta", i + 1),
                fmt_f64(a - p),
            );
        }
        push_kv(
            &mut out,
            "chaplygin.max_relative_deviation",
            fmt_f64(cmp.max_relative_deviation),
        );
        push_kv(
            &mut out,
            "chaplygin.trajectory_deviation",
            fmt_f64(cmp.trajectory_deviation),
        );
    }
    out
}

/// Gnuplot script regenerating the saturation, weight, cost and
/// trajectory figures from the exported CSV files.
pub fn plot_script(outcome: &ExperimentOutcome) -> String {
    let cfg = &outcome.config;
    let n = cfg.episode.initial_state.len();
    let m = cfg.exploration.len();
    let p = cfg.actor.centers.len();
    let nc = n * n;
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot -p plot.gp");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s);
    let _ = writeln!(s, "# learned saturation against sgn and tanh");
    let _ = writeln!(s, "set output 'saturation.png'");
    let terms: Vec<String> = outcome
        .theta_a()
        .iter()
        .zip(cfg.actor.centers.iter().zip(&cfg.actor.widths))
        .map(|(t, (r, g))| {
            format!("({t:.16e})*(exp(-({g})*(x-({r}))**2)-exp(-({g})*(x+({r}))**2))")
        })
        .collect();
    let learned = if terms.is_empty() {
        "tanh(x)".to_string()
    } else {
        format!("tanh(x)+{}", terms.join("+"))
    };
    let _ = writeln!(s, "set xrange [-3:3]");
    let _ = writeln!(
        s,
        "plot sgn(x) title 'sgn', tanh(x) title 'tanh', {learned} title 'learned'"
    );
    let _ = writeln!(s, "unset xrange");
    let _ = writeln!(s);
    let _ = writeln!(s, "# actor weights per iteration");
    let _ = writeln!(s, "set output 'weights.png'");
    let cols: Vec<String> = (0..p)
        .map(|j| format!("'history.csv' using 1:{} with linespoints", 6 + nc + j))
        .collect();
    let _ = writeln!(s, "plot {}", cols.join(", "));
    let _ = writeln!(s);
    let _ = writeln!(s, "# episode cost per iteration");
    let _ = writeln!(s, "set output 'cost.png'");
    let _ = writeln!(s, "plot 'history.csv' using 1:2 with linespoints");
    for i in 1..=n {
        let _ = writeln!(s);
        let _ = writeln!(s, "set output 'x{i}.png'");
        let _ = writeln!(
            s,
            "plot 'trajectory_before.csv' using 1:{} with lines title 'before', 'trajectory_after.csv' using 1:{} with lines dt 2 title 'after'",
            1 + i,
            1 + i
        );
    }
    for i in 1..=m {
        let _ = writeln!(s);
        let _ = writeln!(s, "set output 'u{i}.png'");
        let _ = writeln!(
            s,
            "plot 'trajectory_before.csv' using 1:{} with lines title 'before', 'trajectory_after.csv' using 1:{} with lines dt 2 title 'after'",
            1 + n + i,
            1 + n + i
        );
    }
    s
}

/// Writes trajectories, history, metrics, weights and the plot script.
pub fn export_results(
    dir: &Path,
    outcome: &ExperimentOutcome,
) -> Result<Vec<PathBuf>, ExperimentError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let cfg = &outcome.config;
    let degrees = cfg.output.degrees_x1 && cfg.system != SystemSelector::Siso;
    let n = cfg.episode.initial_state.len();
    let mut files = Vec::new();

    for (name, log) in [
        ("trajectory_before.csv", &outcome.before),
        ("trajectory_after.csv", &outcome.after),
        ("trajectory_tanh.csv", &outcome.baseline),
    ] {
        let path = dir.join(name);
        write_trajectory(&path, log, degrees)?;
        files.push(path);
    }

    let path = dir.join("history.csv");
    write_history(&path, &outcome.history, n * n, cfg.actor.centers.len())?;
    files.push(path);

    let path = dir.join("metrics.txt");
    fs::write(&path, metrics_text(outcome)).map_err(io_err(&path))?;
    files.push(path);

    let path = dir.join("learned.toml");
    WeightsFile {
        system: cfg.system,
        saturation: outcome.learned.clone(),
        theta_c: outcome.theta_c().to_vec(),
    }
    .save(&path)?;
    files.push(path);

    let path = dir.join("config.toml");
    fs::write(&path, cfg.to_toml()).map_err(io_err(&path))?;
    files.push(path);

    let path = dir.join("plot.gp");
    fs::write(&path, plot_script(outcome)).map_err(io_err(&path))?;
    files.push(path);
    Ok(files)
}
