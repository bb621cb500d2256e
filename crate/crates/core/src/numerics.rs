//! Dense linear algebra helpers, fixed-step RK4 with accumulator channels,
//! and the (regularized) batch least-squares solvers.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("integration diverged at t = {time}")]
    Diverged { time: f64 },
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular regression: {0}")]
    Singular(String),
}

/// State vector extended with running integrals.
///
/// The first `base.len()` entries evolve the plant; the accumulators hold
/// integrals of caller-supplied integrands and are reset by the caller at
/// each sampling boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedState {
    pub base: Vector,
    pub accumulators: Vector,
}

impl AugmentedState {
    pub fn new(base: Vector, accumulators: Vector) -> Self {
        Self { base, accumulators }
    }

    /// Base state with `q` zeroed accumulators.
    pub fn with_zeroed(base: Vector, q: usize) -> Self {
        Self {
            base,
            accumulators: Vector::zeros(q),
        }
    }

    pub fn reset_accumulators(&mut self) {
        self.accumulators.fill(0.0);
    }

    fn is_finite(&self) -> bool {
        self.base
            .iter()
            .chain(self.accumulators.iter())
            .all(|v| v.is_finite())
    }

    fn check_shape(&self, other: &AugmentedState) -> Result<(), NumericsError> {
        if self.base.len() != other.base.len()
            || self.accumulators.len() != other.accumulators.len()
        {
            return Err(NumericsError::Dimension(format!(
                "derivative shape ({}, {}) does not match state shape ({}, {})",
                other.base.len(),
                other.accumulators.len(),
                self.base.len(),
                self.accumulators.len()
            )));
        }
        Ok(())
    }

    fn axpy(&self, h: f64, d: &AugmentedState) -> AugmentedState {
        AugmentedState {
            base: &self.base + &d.base * h,
            accumulators: &self.accumulators + &d.accumulators * h,
        }
    }
}

/// Number of fixed steps of size `h` covering `[t0, t1]`.
pub fn step_count(t0: f64, t1: f64, h: f64) -> Result<usize, NumericsError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(NumericsError::InvalidStep(format!(
            "step must be positive, got {h}"
        )));
    }
    let span = t1 - t0;
    if !(span > 0.0) {
        return Err(NumericsError::InvalidStep(format!(
            "empty interval [{t0}, {t1}]"
        )));
    }
    let steps = (span / h).round();
    if steps < 1.0 || (steps * h - span).abs() > 1e-9 * span {
        return Err(NumericsError::InvalidStep(format!(
            "interval length {span} is not an integer multiple of h = {h}"
        )));
    }
    Ok(steps as usize)
}

/// One classical RK4 step.
pub fn rk4_step<F, E>(
    deriv: &mut F,
    t: f64,
    y: &AugmentedState,
    h: f64,
) -> Result<AugmentedState, E>
where
    F: FnMut(f64, &AugmentedState) -> Result<AugmentedState, E>,
    E: From<NumericsError>,
{
    let k1 = eval_checked(deriv, t, y)?;
    let k2 = eval_checked(deriv, t + 0.5 * h, &y.axpy(0.5 * h, &k1))?;
    let k3 = eval_checked(deriv, t + 0.5 * h, &y.axpy(0.5 * h, &k2))?;
    let k4 = eval_checked(deriv, t + h, &y.axpy(h, &k3))?;

    let base = &y.base + (k1.base + (k2.base + k3.base) * 2.0 + k4.base) * (h / 6.0);
    let accumulators = &y.accumulators
        + (k1.accumulators + (k2.accumulators + k3.accumulators) * 2.0 + k4.accumulators)
            * (h / 6.0);
    Ok(AugmentedState { base, accumulators })
}

fn eval_checked<F, E>(deriv: &mut F, t: f64, y: &AugmentedState) -> Result<AugmentedState, E>
where
    F: FnMut(f64, &AugmentedState) -> Result<AugmentedState, E>,
    E: From<NumericsError>,
{
    let d = deriv(t, y)?;
    y.check_shape(&d)?;
    if !d.is_finite() {
        return Err(NumericsError::Diverged { time: t }.into());
    }
    Ok(d)
}

/// Integrates from `t0` to `t1` with fixed step `h`, calling `observer`
/// after every step with the step end time and state.
pub fn rk4_integrate_observed<F, O, E>(
    mut deriv: F,
    x0: &AugmentedState,
    t0: f64,
    t1: f64,
    h: f64,
    mut observer: O,
) -> Result<AugmentedState, E>
where
    F: FnMut(f64, &AugmentedState) -> Result<AugmentedState, E>,
    O: FnMut(f64, &AugmentedState),
    E: From<NumericsError>,
{
    let steps = step_count(t0, t1, h)?;
    let mut y = x0.clone();
    for k in 0..steps {
        // Times are regenerated from the step index so long runs do not drift.
        let t = t0 + k as f64 * h;
        y = rk4_step(&mut deriv, t, &y, h)?;
        let t_next = t0 + (k + 1) as f64 * h;
        if !y.is_finite() {
            return Err(NumericsError::Diverged { time: t_next }.into());
        }
        observer(t_next, &y);
    }
    Ok(y)
}

/// Classical fourth-order Runge–Kutta solution at `t1`.
pub fn rk4_integrate<F, E>(
    deriv: F,
    x0: &AugmentedState,
    t0: f64,
    t1: f64,
    h: f64,
) -> Result<AugmentedState, E>
where
    F: FnMut(f64, &AugmentedState) -> Result<AugmentedState, E>,
    E: From<NumericsError>,
{
    rk4_integrate_observed(deriv, x0, t0, t1, h, |_, _| {})
}

/// Numerical rank test: `true` iff rank(Ψ) ≥ `required`.
///
/// Singular values below `max(N, L) · ε · σ_max` count as zero.
pub fn check_rank(psi: &Matrix, required: usize) -> bool {
    numerical_rank(psi) >= required
}

pub fn numerical_rank(psi: &Matrix) -> usize {
    if psi.nrows() == 0 || psi.ncols() == 0 {
        return 0;
    }
    let sv = psi.singular_values();
    let sigma_max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    let tol = psi.nrows().max(psi.ncols()) as f64 * f64::EPSILON * sigma_max;
    sv.iter().filter(|&&s| s > tol).count()
}

fn check_system(psi: &Matrix, xi: &Vector) -> Result<(), NumericsError> {
    if psi.nrows() != xi.len() {
        return Err(NumericsError::Dimension(format!(
            "design matrix has {} rows but target has {} entries",
            psi.nrows(),
            xi.len()
        )));
    }
    if psi.ncols() == 0 {
        return Err(NumericsError::Dimension(
            "design matrix has no columns".into(),
        ));
    }
    Ok(())
}

/// Batch least squares `(ΨᵀΨ)⁻¹ΨᵀΞ`.
pub fn solve_bls(psi: &Matrix, xi: &Vector) -> Result<Vector, NumericsError> {
    check_system(psi, xi)?;
    let (n, l) = psi.shape();
    if n < l {
        return Err(NumericsError::Singular(format!(
            "underdetermined system: {n} rows < {l} unknowns"
        )));
    }
    if !check_rank(psi, l) {
        return Err(NumericsError::Singular(format!(
            "numerical rank {} below {l}",
            numerical_rank(psi)
        )));
    }
    solve_normal(psi, xi, 0.0)
}

/// ℓ2-regularized batch least squares `(ΨᵀΨ + λI)⁻¹ΨᵀΞ`.
pub fn solve_regularized(psi: &Matrix, xi: &Vector, lambda: f64) -> Result<Vector, NumericsError> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(NumericsError::Dimension(format!(
            "regularization must be a finite nonnegative number, got {lambda}"
        )));
    }
    if lambda == 0.0 {
        return solve_bls(psi, xi);
    }
    check_system(psi, xi)?;
    solve_normal(psi, xi, lambda)
}

fn solve_normal(psi: &Matrix, xi: &Vector, lambda: f64) -> Result<Vector, NumericsError> {
    let l = psi.ncols();
    let mut normal = psi.transpose() * psi;
    for i in 0..l {
        normal[(i, i)] += lambda;
    }
    let rhs = psi.transpose() * xi;
    let chol = normal
        .cholesky()
        .ok_or_else(|| NumericsError::Singular("normal matrix is not positive definite".into()))?;
    let theta = chol.solve(&rhs);
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::Singular("solution is not finite".into()));
    }
    Ok(theta)
}
