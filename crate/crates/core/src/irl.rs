//! Integral Q-learning of the switching-term saturation.
//!
//! Each iteration runs one exploratory episode under the current
//! controller, stacks the interval equations
//!
//! ```text
//! θ_cᵀ[ψ(x(t+T)) − ψ(x(t))] + 2θ_aᵀ∫Φ(S)Gᵀe dτ
//!     = −∫ 2eᵀG tanh(S) + Q(x) + uᵀRu + 2u_p1ᵀRe dτ,      G = R(Cᵀg)⁻¹K
//! ```
//!
//! and solves them with ridge-regularized batch least squares. The
//! equivalent/reaching part `u_p1` is never updated; only the saturation
//! `tanh(s) + Φᵀ(s)θ_a` changes between iterations.

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::SystemModel;
use crate::numerics::{
    check_rank, numerical_rank, rk4_integrate_observed, solve_regularized, AugmentedState, Matrix,
    NumericsError, Vector,
};
use crate::smc::{
    check_saturation_conditions, default_grid, ConditionReport, SaturationFunction,
    SlidingModeConfig, SmcController, SmcError, SrbfBasis, DEFAULT_TAIL,
};
use crate::trajectory::TrajectoryLog;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IrlError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Control(#[from] SmcError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("inconsistent regression rows: {0}")]
    Rows(String),
}

/// Running cost `xᵀQx + uᵀRu`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSpec {
    q: Matrix,
    r: Matrix,
}

impl CostSpec {
    pub fn new(q: Matrix, r: Matrix) -> Result<Self, IrlError> {
        check_symmetric(&q, "Q")?;
        check_symmetric(&r, "R")?;
        let q_min = q.clone().symmetric_eigen().eigenvalues.min();
        let r_min = r.clone().symmetric_eigen().eigenvalues.min();
        if q_min < -1e-12 * q.norm().max(1.0) {
            return Err(IrlError::Config(format!(
                "Q must be positive semidefinite (min eigenvalue {q_min})"
            )));
        }
        if !(r_min > 0.0) {
            return Err(IrlError::Config(format!(
                "R must be positive definite (min eigenvalue {r_min})"
            )));
        }
        Ok(Self { q, r })
    }

    pub fn diagonal(q: &[f64], r: &[f64]) -> Result<Self, IrlError> {
        Self::new(
            Matrix::from_diagonal(&Vector::from_row_slice(q)),
            Matrix::from_diagonal(&Vector::from_row_slice(r)),
        )
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn state_cost(&self, x: &Vector) -> f64 {
        x.dot(&(&self.q * x))
    }

    pub fn input_cost(&self, u: &Vector) -> f64 {
        u.dot(&(&self.r * u))
    }

    pub fn running(&self, x: &Vector, u: &Vector) -> f64 {
        self.state_cost(x) + self.input_cost(u)
    }
}

fn check_symmetric(a: &Matrix, name: &str) -> Result<(), IrlError> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(IrlError::Config(format!(
            "{name} must be a nonempty square matrix"
        )));
    }
    if a.iter().any(|v| !v.is_finite())
        || (a - a.transpose()).abs().max() > 1e-12 * a.norm().max(1.0)
    {
        return Err(IrlError::Config(format!(
            "{name} must be finite and symmetric"
        )));
    }
    Ok(())
}

/// Probing input `e_i(τ) = a_i sin(τ)`, τ measured from episode start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorationSignal {
    pub amplitude: Vec<f64>,
}

impl ExplorationSignal {
    pub fn new(amplitude: Vec<f64>) -> Result<Self, IrlError> {
        if amplitude.iter().any(|a| !a.is_finite()) {
            return Err(IrlError::Config(
                "exploration amplitude must be finite".into(),
            ));
        }
        Ok(Self { amplitude })
    }

    pub fn off(m: usize) -> Self {
        Self {
            amplitude: vec![0.0; m],
        }
    }

    pub fn is_active(&self) -> bool {
        self.amplitude.iter().any(|a| *a != 0.0)
    }

    pub fn eval(&self, tau: f64) -> Vector {
        let s = tau.sin();
        Vector::from_iterator(self.amplitude.len(), self.amplitude.iter().map(|a| a * s))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpisodeConfig {
    /// Sampling interval `T`, seconds.
    pub sample_interval: f64,
    /// Intervals per episode `N`.
    pub samples: usize,
    pub initial_state: Vec<f64>,
    pub regularization: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// RK4 steps per sampling interval.
    pub integrator_substeps: usize,
}

impl EpisodeConfig {
    pub fn validate(&self) -> Result<(), IrlError> {
        if !(self.sample_interval > 0.0) || !self.sample_interval.is_finite() {
            return Err(IrlError::Config("sample_interval must be positive".into()));
        }
        if self.samples < 1 {
            return Err(IrlError::Config("samples must be at least 1".into()));
        }
        if !(self.regularization >= 0.0) || !self.regularization.is_finite() {
            return Err(IrlError::Config(
                "regularization must be nonnegative".into(),
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(IrlError::Config("tolerance must be positive".into()));
        }
        if self.max_iterations < 1 {
            return Err(IrlError::Config("max_iterations must be at least 1".into()));
        }
        if self.integrator_substeps < 1 {
            return Err(IrlError::Config(
                "integrator_substeps must be at least 1".into(),
            ));
        }
        if self.initial_state.iter().any(|v| !v.is_finite()) {
            return Err(IrlError::Config("initial_state must be finite".into()));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        self.sample_interval / self.integrator_substeps as f64
    }

    pub fn horizon(&self) -> f64 {
        self.sample_interval * self.samples as f64
    }

    pub fn initial(&self) -> Vector {
        Vector::from_row_slice(&self.initial_state)
    }
}

/// One interval equation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub dpsi: Vector,
    pub actor_integral: Vector,
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSystem {
    pub psi: Matrix,
    pub xi: Vector,
    critic_dim: usize,
}

impl RegressionSystem {
    pub fn critic_dim(&self) -> usize {
        self.critic_dim
    }

    pub fn actor_dim(&self) -> usize {
        self.psi.ncols() - self.critic_dim
    }

    pub fn rows(&self) -> usize {
        self.psi.nrows()
    }

    /// `‖ΨΘ − Ξ‖ / √N`.
    pub fn residual_rms(&self, w: &WeightVector) -> f64 {
        let theta = w.stacked();
        (&self.psi * theta - &self.xi).norm() / (self.rows() as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub theta_c: Vec<f64>,
    pub theta_a: Vec<f64>,
}

impl WeightVector {
    pub fn stacked(&self) -> Vector {
        Vector::from_iterator(
            self.theta_c.len() + self.theta_a.len(),
            self.theta_c.iter().chain(&self.theta_a).cloned(),
        )
    }
}

/// `ψ(x) = x ⊗ x` in row-major order.
pub fn critic_basis(x: &Vector) -> Vector {
    let n = x.len();
    Vector::from_fn(n * n, |k, _| x[k / n] * x[k % n])
}

/// `V̂(x) = θ_cᵀψ(x)`.
pub fn value_estimate(theta_c: &[f64], x: &Vector) -> f64 {
    assert_eq!(
        theta_c.len(),
        x.len() * x.len(),
        "critic weights do not match state dimension"
    );
    critic_basis(x)
        .iter()
        .zip(theta_c)
        .map(|(a, b)| a * b)
        .sum()
}

// Accumulator layout: [actor integrals (p) | ξ | episode cost].
struct Layout {
    p: usize,
}

impl Layout {
    fn len(&self) -> usize {
        self.p + 2
    }
    fn xi(&self) -> usize {
        self.p
    }
    fn cost(&self) -> usize {
        self.p + 1
    }
}

struct Episode {
    rows: Vec<SampleRow>,
    log: TrajectoryLog,
    cost: f64,
}

fn check_dims(
    ctrl: &SmcController,
    cost: &CostSpec,
    expl: &ExplorationSignal,
    z: &Vector,
) -> Result<(), IrlError> {
    let model = ctrl.model();
    let (n, m) = (model.state_dim(), model.input_dim());
    if cost.q().nrows() != n || cost.r().nrows() != m {
        return Err(IrlError::Config(format!(
            "cost is {}×{} / {}×{} but the model has n = {n}, m = {m}",
            cost.q().nrows(),
            cost.q().ncols(),
            cost.r().nrows(),
            cost.r().ncols()
        )));
    }
    if expl.amplitude.len() != m {
        return Err(IrlError::Config(format!(
            "exploration has {} channels, model has {m}",
            expl.amplitude.len()
        )));
    }
    if z.len() != n {
        return Err(IrlError::Config(format!(
            "initial state has {} entries, model has {n}",
            z.len()
        )));
    }
    Ok(())
}

fn run_episode(
    ctrl: &SmcController,
    basis: &SrbfBasis,
    cost: &CostSpec,
    expl: &ExplorationSignal,
    z: &Vector,
    interval: f64,
    samples: usize,
    substeps: usize,
) -> Result<Episode, IrlError> {
    check_dims(ctrl, cost, expl, z)?;
    let model: &SystemModel = ctrl.model();
    let k_mat = ctrl.config().k_matrix();
    let layout = Layout { p: basis.len() };
    let h = interval / substeps as f64;

    let deriv = |tau: f64, y: &AugmentedState| -> Result<AugmentedState, IrlError> {
        let x = &y.base;
        let parts = ctrl.control_parts(x)?;
        let u = parts.total();
        let e = expl.eval(tau);
        let xdot = model.derivative(x, &(&u + &e));

        let g_mat = cost.r() * &parts.ctg_inv * &k_mat;
        let gt_e = g_mat.tr_mul(&e);
        let phi = basis.eval_channels(&parts.sliding);
        let mut acc = Vector::zeros(layout.len());
        acc.rows_mut(0, layout.p).copy_from(&(phi * &gt_e * 2.0));
        let tanh_s = parts.sliding.map(f64::tanh);
        let running = cost.running(x, &u);
        acc[layout.xi()] =
            -2.0 * gt_e.dot(&tanh_s) - (running + 2.0 * parts.u_p1.dot(&(cost.r() * &e)));
        acc[layout.cost()] = running;
        Ok(AugmentedState::new(xdot, acc))
    };

    let mut log = TrajectoryLog::default();
    let mut record = |t: f64, x: &Vector| -> Result<(), IrlError> {
        let parts = ctrl.control_parts(x)?;
        let u = parts.total();
        let r = cost.running(x, &u);
        log.push(t, x.clone(), u, expl.eval(t), parts.sliding, r);
        Ok(())
    };
    record(0.0, z)?;

    let mut rows = Vec::with_capacity(samples);
    let mut state = AugmentedState::with_zeroed(z.clone(), layout.len());
    let mut total = 0.0;
    let mut pending: Option<IrlError> = None;
    for j in 0..samples {
        let t0 = j as f64 * interval;
        let t1 = (j + 1) as f64 * interval;
        let start = state.base.clone();
        state.reset_accumulators();
        state = rk4_integrate_observed(deriv, &state, t0, t1, h, |t, y| {
            if pending.is_none() {
                if let Err(err) = record(t, &y.base) {
                    pending = Some(err);
                }
            }
        })?;
        if let Some(err) = pending.take() {
            return Err(err);
        }
        let acc = &state.accumulators;
        rows.push(SampleRow {
            dpsi: critic_basis(&state.base) - critic_basis(&start),
            actor_integral: acc.rows(0, layout.p).into_owned(),
            xi: acc[layout.xi()],
        });
        total += acc[layout.cost()];
    }
    Ok(Episode {
        rows,
        log,
        cost: total,
    })
}

/// Runs one exploratory episode from `ec.initial_state` under `ctrl` and
/// returns the interval equations with the sampled trajectory.
pub fn collect_episode(
    ctrl: &SmcController,
    basis: &SrbfBasis,
    cost: &CostSpec,
    expl: &ExplorationSignal,
    ec: &EpisodeConfig,
) -> Result<(Vec<SampleRow>, TrajectoryLog), IrlError> {
    ec.validate()?;
    let ep = run_episode(
        ctrl,
        basis,
        cost,
        expl,
        &ec.initial(),
        ec.sample_interval,
        ec.samples,
        ec.integrator_substeps,
    )?;
    Ok((ep.rows, ep.log))
}

/// Closed-loop simulation over `[0, duration]` with sampling step `step`.
pub fn simulate(
    ctrl: &SmcController,
    cost: &CostSpec,
    expl: &ExplorationSignal,
    z: &Vector,
    duration: f64,
    step: f64,
) -> Result<TrajectoryLog, IrlError> {
    // One accumulator-free "interval" per output step; the basis is unused.
    let samples = crate::numerics::step_count(0.0, duration, step)?;
    let dummy = SrbfBasis::uniform(vec![1.0], 1.0)?;
    Ok(run_episode(ctrl, &dummy, cost, expl, z, step, samples, 1)?.log)
}

/// Like [`simulate`], but the control is computed once per step and held
/// over it, as a digital controller would apply it. A discontinuous law
/// then chatters at the step rate instead of settling into a spurious
/// RK4 equilibrium next to the manifold.
pub fn simulate_sampled(
    ctrl: &SmcController,
    cost: &CostSpec,
    expl: &ExplorationSignal,
    z: &Vector,
    duration: f64,
    step: f64,
) -> Result<TrajectoryLog, IrlError> {
    check_dims(ctrl, cost, expl, z)?;
    let steps = crate::numerics::step_count(0.0, duration, step)?;
    let model = ctrl.model();
    let mut log = TrajectoryLog::default();
    let mut x = z.clone();
    for k in 0..=steps {
        let t = k as f64 * step;
        let parts = ctrl.control_parts(&x)?;
        let u = parts.total();
        log.push(
            t,
            x.clone(),
            u.clone(),
            expl.eval(t),
            parts.sliding,
            cost.running(&x, &u),
        );
        if k == steps {
            break;
        }
        let deriv = |tau: f64, y: &AugmentedState| -> Result<AugmentedState, IrlError> {
            Ok(AugmentedState::new(
                model.derivative(&y.base, &(&u + expl.eval(tau))),
                Vector::zeros(0),
            ))
        };
        x = crate::numerics::rk4_integrate(
            deriv,
            &AugmentedState::with_zeroed(x, 0),
            t,
            t + step,
            step,
        )?
        .base;
    }
    Ok(log)
}

/// Stacks interval rows into `(Ψ, Ξ)`.
pub fn assemble_regression(rows: &[SampleRow]) -> Result<RegressionSystem, IrlError> {
    let first = rows
        .first()
        .ok_or_else(|| IrlError::Rows("no rows".into()))?;
    let (nc, na) = (first.dpsi.len(), first.actor_integral.len());
    let mut psi = Matrix::zeros(rows.len(), nc + na);
    let mut xi = Vector::zeros(rows.len());
    for (j, row) in rows.iter().enumerate() {
        if row.dpsi.len() != nc || row.actor_integral.len() != na {
            return Err(IrlError::Rows(format!(
                "row {j} has shape ({}, {}), expected ({nc}, {na})",
                row.dpsi.len(),
                row.actor_integral.len()
            )));
        }
        if !row.xi.is_finite()
            || row
                .dpsi
                .iter()
                .chain(row.actor_integral.iter())
                .any(|v| !v.is_finite())
        {
            return Err(IrlError::Rows(format!("row {j} is not finite")));
        }
        for (c, v) in row.dpsi.iter().chain(row.actor_integral.iter()).enumerate() {
            psi[(j, c)] = *v;
        }
        xi[j] = row.xi;
    }
    Ok(RegressionSystem {
        psi,
        xi,
        critic_dim: nc,
    })
}

/// `Θ̂ = (ΨᵀΨ + λI)⁻¹ΨᵀΞ` split into critic and actor weights.
pub fn policy_iteration_step(rs: &RegressionSystem, lambda: f64) -> Result<WeightVector, IrlError> {
    let theta = solve_regularized(&rs.psi, &rs.xi, lambda)?;
    let (c, a) = theta.as_slice().split_at(rs.critic_dim);
    Ok(WeightVector {
        theta_c: c.to_vec(),
        theta_a: a.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub theta_c: Vec<f64>,
    pub theta_a: Vec<f64>,
    /// Episode integral of `Q(x) + uᵀRu` (exploration excluded from `u`).
    pub episode_cost: f64,
    /// Grid sup of `|sat_{i+1} − sat_i|`.
    pub policy_change: f64,
    pub residual_rms: f64,
    pub rank: usize,
    pub full_rank: bool,
    pub conditions: ConditionReport,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LearningHistory {
    pub records: Vec<IterationRecord>,
    pub converged: bool,
}

impl LearningHistory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.episode_cost).collect()
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }
}

/// Everything `learn` needs besides the plant.
#[derive(Debug, Clone)]
pub struct LearningProblem<'a> {
    pub model: &'a SystemModel,
    pub smc: &'a SlidingModeConfig,
    pub basis: &'a SrbfBasis,
    pub cost: &'a CostSpec,
    pub exploration: &'a ExplorationSignal,
    pub episode: &'a EpisodeConfig,
}

/// Policy iteration starting from the signum controller.
pub fn learn(
    problem: &LearningProblem<'_>,
) -> Result<(SaturationFunction, LearningHistory), IrlError> {
    let ec = problem.episode;
    ec.validate()?;
    let grid = default_grid();
    let mut ctrl = SmcController::new(
        problem.model.clone(),
        problem.smc.clone(),
        SaturationFunction::Signum,
    )?;
    let mut history = LearningHistory::default();
    let z = ec.initial();
    let unknowns = problem.model.state_dim().pow(2) + problem.basis.len();

    for iteration in 0..ec.max_iterations {
        let ep = run_episode(
            &ctrl,
            problem.basis,
            problem.cost,
            problem.exploration,
            &z,
            ec.sample_interval,
            ec.samples,
            ec.integrator_substeps,
        )?;
        let rs = assemble_regression(&ep.rows)?;
        let full_rank = check_rank(&rs.psi, unknowns);
        if !full_rank {
            if ec.regularization == 0.0 {
                return Err(NumericsError::Singular(format!(
                    "iteration {iteration}: regression rank {} below {unknowns}",
                    numerical_rank(&rs.psi)
                ))
                .into());
            }
            warn!(
                "iteration {iteration}: regression rank {} below {unknowns}; relying on regularization",
                numerical_rank(&rs.psi)
            );
        }
        let weights = policy_iteration_step(&rs, ec.regularization)?;
        let next = SaturationFunction::learned(problem.basis.clone(), weights.theta_a.clone())?;
        let change = grid
            .iter()
            .map(|&s| (next.eval_scalar(s) - ctrl.saturation().eval_scalar(s)).abs())
            .fold(0.0, f64::max);
        history.records.push(IterationRecord {
            iteration,
            residual_rms: rs.residual_rms(&weights),
            theta_c: weights.theta_c,
            theta_a: weights.theta_a,
            episode_cost: ep.cost,
            policy_change: change,
            rank: numerical_rank(&rs.psi),
            full_rank,
            conditions: check_saturation_conditions(&next, &grid, DEFAULT_TAIL),
        });
        ctrl = ctrl.with_saturation(next)?;
        if change < ec.tolerance {
            history.converged = true;
            break;
        }
    }
    Ok((ctrl.saturation().clone(), history))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_basis() {
        assert_eq!(
            critic_basis(&Vector::from_vec(vec![1.0, 2.0])).as_slice(),
            &[1.0, 2.0, 2.0, 4.0]
        );
        assert_eq!(critic_basis(&Vector::zeros(3)), Vector::zeros(9));
        assert_eq!(
            critic_basis(&Vector::from_vec(vec![2.0, 5.0])).as_slice(),
            &[4.0, 10.0, 10.0, 25.0]
        );
    }

    #[test]
    fn value_of_quadratic_form() {
        let p = [2.0, 0.5, 0.5, 3.0];
        let x = Vector::from_vec(vec![1.5, -0.7]);
        let direct = 2.0 * 1.5 * 1.5 + 2.0 * 0.5 * 1.5 * -0.7 + 3.0 * 0.49;
        assert!((value_estimate(&p, &x) - direct).abs() < 1e-14);
        assert_eq!(value_estimate(&p, &Vector::zeros(2)), 0.0);
    }

    #[test]
    fn cost_spec_validation() {
        assert!(CostSpec::diagonal(&[1.0, 0.0], &[1.0]).is_ok());
        assert!(CostSpec::diagonal(&[1.0, -1.0], &[1.0]).is_err());
        assert!(CostSpec::diagonal(&[1.0], &[0.0]).is_err());
        let asym = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(CostSpec::new(asym, Matrix::identity(1, 1)).is_err());
    }

    #[test]
    fn single_row_regression_shape() {
        let row = SampleRow {
            dpsi: Vector::from_vec(vec![1.0, 2.0, 3.0, 4.0]),
            actor_integral: Vector::from_vec(vec![0.5; 3]),
            xi: -1.0,
        };
        let rs = assemble_regression(&[row]).unwrap();
        assert_eq!(rs.psi.shape(), (1, 7));
        assert_eq!(rs.critic_dim(), 4);
        assert_eq!(rs.actor_dim(), 3);
    }

    #[test]
    fn mismatched_rows_are_rejected() {
        let a = SampleRow {
            dpsi: Vector::zeros(4),
            actor_integral: Vector::zeros(2),
            xi: 0.0,
        };
        let b = SampleRow {
            dpsi: Vector::zeros(4),
            actor_integral: Vector::zeros(3),
            xi: 0.0,
        };
        assert!(matches!(
            assemble_regression(&[a, b]),
            Err(IrlError::Rows(_))
        ));
        assert!(matches!(assemble_regression(&[]), Err(IrlError::Rows(_))));
    }

    #[test]
    fn episode_config_validation() {
        let ec = EpisodeConfig {
            sample_interval: 0.01,
            samples: 10,
            initial_state: vec![1.0, 0.0],
            regularization: 0.0,
            tolerance: 1e-6,
            max_iterations: 1,
            integrator_substeps: 10,
        };
        assert!(ec.validate().is_ok());
        assert!((ec.step() - 0.001).abs() < 1e-18);
        for bad in [
            EpisodeConfig {
                sample_interval: 0.0,
                ..ec.clone()
            },
            EpisodeConfig {
                samples: 0,
                ..ec.clone()
            },
            EpisodeConfig {
                regularization: -1.0,
                ..ec.clone()
            },
            EpisodeConfig {
                tolerance: 0.0,
                ..ec.clone()
            },
            EpisodeConfig {
                max_iterations: 0,
                ..ec.clone()
            },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn exploration_signal() {
        let e = ExplorationSignal::new(vec![0.1, 0.0]).unwrap();
        assert!(e.is_active());
        assert!((e.eval(std::f64::consts::FRAC_PI_2)[0] - 0.1).abs() < 1e-15);
        assert!(!ExplorationSignal::off(2).is_active());
    }
}
