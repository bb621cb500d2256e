//! Linear sliding manifolds, the exponential reaching law and the
//! saturation-function family used in the switching term.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::SystemModel;
use crate::numerics::{Matrix, Vector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmcError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("Cᵀg(x) is singular at x = {x:?}")]
    ControlSingular { x: Vec<f64> },
}

/// `sgn` with `sgn(0) = 0`.
pub fn signum(s: f64) -> f64 {
    if s > 0.0 {
        1.0
    } else if s < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Manifold `S = Cᵀx` and reaching-law gains `W`, `K` (diagonals).
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingModeConfig {
    c: Matrix,
    w: Vector,
    k: Vector,
}

impl SlidingModeConfig {
    pub fn new(c: Matrix, w: Vector, k: Vector) -> Result<Self, SmcError> {
        let m = c.ncols();
        if m == 0 || c.nrows() == 0 {
            return Err(SmcError::Config("C must be a nonempty n×m matrix".into()));
        }
        if w.len() != m || k.len() != m {
            return Err(SmcError::Dimension(format!(
                "C has {m} columns but W has {} and K has {} diagonal entries",
                w.len(),
                k.len()
            )));
        }
        if w.iter()
            .chain(k.iter())
            .any(|v| !(*v > 0.0) || !v.is_finite())
        {
            return Err(SmcError::Config(
                "W and K diagonals must be strictly positive".into(),
            ));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(SmcError::Config("C must be finite".into()));
        }
        Ok(Self { c, w, k })
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn w(&self) -> &Vector {
        &self.w
    }

    pub fn k(&self) -> &Vector {
        &self.k
    }

    pub fn state_dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn channels(&self) -> usize {
        self.c.ncols()
    }

    pub fn k_matrix(&self) -> Matrix {
        Matrix::from_diagonal(&self.k)
    }
}

/// `S = Cᵀx`.
pub fn sliding_value(cfg: &SlidingModeConfig, x: &Vector) -> Result<Vector, SmcError> {
    if x.len() != cfg.state_dim() {
        return Err(SmcError::Dimension(format!(
            "state has {} entries, manifold expects {}",
            x.len(),
            cfg.state_dim()
        )));
    }
    Ok(cfg.c.tr_mul(x))
}

/// Odd radial basis `φ_j(s) = exp(-γ_j (s - r_j)²) - exp(-γ_j (s + r_j)²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SrbfBasis {
    centers: Vec<f64>,
    widths: Vec<f64>,
}

impl SrbfBasis {
    pub fn new(centers: Vec<f64>, widths: Vec<f64>) -> Result<Self, SmcError> {
        let basis = Self { centers, widths };
        basis.validate()?;
        Ok(basis)
    }

    /// Same width for every neuron.
    pub fn uniform(centers: Vec<f64>, width: f64) -> Result<Self, SmcError> {
        let widths = vec![width; centers.len()];
        Self::new(centers, widths)
    }

    pub fn validate(&self) -> Result<(), SmcError> {
        if self.centers.is_empty() {
            return Err(SmcError::Config(
                "SRBF basis needs at least one neuron".into(),
            ));
        }
        if self.centers.len() != self.widths.len() {
            return Err(SmcError::Dimension(format!(
                "{} centers but {} widths",
                self.centers.len(),
                self.widths.len()
            )));
        }
        if self.centers.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(SmcError::Config("SRBF centers must be positive".into()));
        }
        if self.centers.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SmcError::Config(
                "SRBF centers must be strictly increasing".into(),
            ));
        }
        if self.widths.iter().any(|g| !(*g > 0.0) || !g.is_finite()) {
            return Err(SmcError::Config("SRBF widths must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn eval(&self, s: f64) -> Vector {
        Vector::from_iterator(self.len(), self.iter_at(s))
    }

    fn iter_at(&self, s: f64) -> impl Iterator<Item = f64> + '_ {
        self.centers
            .iter()
            .zip(&self.widths)
            .map(move |(&r, &g)| (-g * (s - r) * (s - r)).exp() - (-g * (s + r) * (s + r)).exp())
    }

    /// `Σ_j θ_j φ_j(s)`.
    pub fn weighted(&self, theta: &[f64], s: f64) -> f64 {
        self.iter_at(s).zip(theta).map(|(phi, t)| phi * t).sum()
    }

    /// p×m matrix whose column i is `Φᵀ(s_i)`.
    pub fn eval_channels(&self, s: &Vector) -> Matrix {
        let mut out = Matrix::zeros(self.len(), s.len());
        for (i, &si) in s.iter().enumerate() {
            for (j, phi) in self.iter_at(si).enumerate() {
                out[(j, i)] = phi;
            }
        }
        out
    }
}

pub fn srbf_eval(basis: &SrbfBasis, s: f64) -> Vector {
    basis.eval(s)
}

/// Odd, bounded surrogate for `sgn` in the switching term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SaturationFunction {
    Signum,
    Pwl {
        delta: f64,
    },
    Tanh,
    /// `tanh(s) + Φᵀ(s)θ_a`, one weight vector shared by every channel.
    LearnedSrbf {
        basis: SrbfBasis,
        theta: Vec<f64>,
    },
}

impl SaturationFunction {
    pub fn learned(basis: SrbfBasis, theta: Vec<f64>) -> Result<Self, SmcError> {
        let sat = SaturationFunction::LearnedSrbf { basis, theta };
        sat.validate()?;
        Ok(sat)
    }

    pub fn validate(&self) -> Result<(), SmcError> {
        match self {
            SaturationFunction::Pwl { delta } if !(*delta > 0.0) || !delta.is_finite() => {
                Err(SmcError::Config(format!(
                    "boundary layer width must be positive, got {delta}"
                )))
            }
            SaturationFunction::LearnedSrbf { basis, theta } => {
                basis.validate()?;
                if theta.len() != basis.len() {
                    return Err(SmcError::Dimension(format!(
                        "{} actor weights for {} neurons",
                        theta.len(),
                        basis.len()
                    )));
                }
                if theta.iter().any(|t| !t.is_finite()) {
                    return Err(SmcError::Config("actor weights must be finite".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval_scalar(&self, s: f64) -> f64 {
        match self {
            SaturationFunction::Signum => signum(s),
            SaturationFunction::Pwl { delta } => {
                if s > *delta {
                    1.0
                } else if s < -*delta {
                    -1.0
                } else {
                    s / delta
                }
            }
            SaturationFunction::Tanh => s.tanh(),
            SaturationFunction::LearnedSrbf { basis, theta } => s.tanh() + basis.weighted(theta, s),
        }
    }

    pub fn eval(&self, s: &Vector) -> Vector {
        s.map(|si| self.eval_scalar(si))
    }

    pub fn actor_weights(&self) -> Option<&[f64]> {
        match self {
            SaturationFunction::LearnedSrbf { theta, .. } => Some(theta),
            _ => None,
        }
    }
}

pub fn eval_saturation(sat: &SaturationFunction, s: &Vector) -> Vector {
    sat.eval(s)
}

/// Default evaluation grid: 601 uniform points on `[-3, 3]`.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(-3.0, 3.0, 601)
}

pub const DEFAULT_TAIL: f64 = 50.0;

pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    let step = (hi - lo) / (points - 1) as f64;
    // Built from both ends so the grid is symmetric when lo = -hi.
    (0..points)
        .map(|i| {
            if 2 * i < points - 1 {
                lo + i as f64 * step
            } else {
                hi - (points - 1 - i) as f64 * step
            }
        })
        .map(|v| if v.abs() < 1e-15 { 0.0 } else { v })
        .collect()
}

/// Outcome of conditions (a)–(e) on a sampled saturation function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// `sat(s)·sgn(s) > 0` away from zero.
    pub sign_agreement: bool,
    /// `sat(0) = 0`.
    pub zero_at_origin: bool,
    /// `|sat(±tail) ∓ 1| < 0.01`.
    pub tail_limit: bool,
    /// `max |sat(s) + sat(-s)| < 1e-12`.
    pub odd: bool,
    /// `max |sat(s)| ≤ 1 + 1e-9` on the grid.
    pub bounded: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.sign_agreement && self.zero_at_origin && self.tail_limit && self.odd && self.bounded
    }

    pub fn structural(&self) -> bool {
        self.sign_agreement && self.zero_at_origin && self.tail_limit && self.odd
    }
}

pub fn check_saturation_conditions(
    sat: &SaturationFunction,
    grid: &[f64],
    tail: f64,
) -> ConditionReport {
    let sign_agreement = grid
        .iter()
        .filter(|&&s| s != 0.0)
        .all(|&s| sat.eval_scalar(s) * signum(s) > 0.0);
    let zero_at_origin = sat.eval_scalar(0.0) == 0.0;
    let tail_limit =
        (sat.eval_scalar(tail) - 1.0).abs() < 0.01 && (sat.eval_scalar(-tail) + 1.0).abs() < 0.01;
    let odd = grid
        .iter()
        .map(|&s| (sat.eval_scalar(s) + sat.eval_scalar(-s)).abs())
        .fold(0.0, f64::max)
        < 1e-12;
    let bounded = grid
        .iter()
        .map(|&s| sat.eval_scalar(s).abs())
        .fold(0.0, f64::max)
        <= 1.0 + 1e-9;
    ConditionReport {
        sign_agreement,
        zero_at_origin,
        tail_limit,
        odd,
        bounded,
    }
}

/// Equivalent-plus-reaching part and switching part of the control.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlParts {
    pub u_p1: Vector,
    pub u_p2: Vector,
    pub sliding: Vector,
    /// `(Cᵀg(x))⁻¹`, reused by callers that need `G = R(Cᵀg)⁻¹K`.
    pub ctg_inv: Matrix,
}

impl ControlParts {
    pub fn total(&self) -> Vector {
        &self.u_p1 + &self.u_p2
    }
}

/// Sliding-mode controller bound to a plant.
#[derive(Debug, Clone)]
pub struct SmcController {
    model: SystemModel,
    cfg: SlidingModeConfig,
    sat: SaturationFunction,
}

impl SmcController {
    pub fn new(
        model: SystemModel,
        cfg: SlidingModeConfig,
        sat: SaturationFunction,
    ) -> Result<Self, SmcError> {
        if cfg.state_dim() != model.state_dim() || cfg.channels() != model.input_dim() {
            return Err(SmcError::Dimension(format!(
                "C is {}×{} but the model has n = {}, m = {}",
                cfg.state_dim(),
                cfg.channels(),
                model.state_dim(),
                model.input_dim()
            )));
        }
        sat.validate()?;
        let ctrl = Self { model, cfg, sat };
        // Cᵀg must be invertible; probe the origin and the unit directions.
        let n = ctrl.model.state_dim();
        let mut probes = vec![Vector::zeros(n)];
        for i in 0..n {
            for sign in [0.1, -0.1] {
                let mut x = Vector::zeros(n);
                x[i] = sign;
                probes.push(x);
            }
        }
        for x in &probes {
            ctrl.ctg_inverse(x)?;
        }
        Ok(ctrl)
    }

    pub fn model(&self) -> &SystemModel {
        &self.model
    }

    pub fn config(&self) -> &SlidingModeConfig {
        &self.cfg
    }

    pub fn saturation(&self) -> &SaturationFunction {
        &self.sat
    }

    /// Same plant and manifold with a different saturation.
    pub fn with_saturation(&self, sat: SaturationFunction) -> Result<Self, SmcError> {
        sat.validate()?;
        Ok(Self {
            model: self.model.clone(),
            cfg: self.cfg.clone(),
            sat,
        })
    }

    fn ctg_inverse(&self, x: &Vector) -> Result<Matrix, SmcError> {
        let ctg = self.cfg.c.tr_mul(&self.model.input_map(x));
        let singular = || SmcError::ControlSingular {
            x: x.iter().cloned().collect(),
        };
        let inv = ctg.clone().try_inverse().ok_or_else(singular)?;
        // Reject numerically singular matrices as well as exact ones.
        let cond = ctg.norm() * inv.norm();
        if !cond.is_finite() || cond > 1e12 {
            return Err(singular());
        }
        Ok(inv)
    }

    pub fn control_parts(&self, x: &Vector) -> Result<ControlParts, SmcError> {
        let s = sliding_value(&self.cfg, x)?;
        let ctg_inv = self.ctg_inverse(x)?;
        let ctf = self.cfg.c.tr_mul(&self.model.drift(x));
        let reach = ctf + self.cfg.w.component_mul(&s);
        let u_p1 = -(&ctg_inv * reach);
        let u_p2 = -(&ctg_inv * self.cfg.k.component_mul(&self.sat.eval(&s)));
        Ok(ControlParts {
            u_p1,
            u_p2,
            sliding: s,
            ctg_inv,
        })
    }

    pub fn control(&self, x: &Vector) -> Result<Vector, SmcError> {
        Ok(self.control_parts(x)?.total())
    }

    /// `SᵀṠ` along the closed loop `ẋ = f + g u`.
    pub fn lyapunov_derivative(&self, x: &Vector) -> Result<f64, SmcError> {
        let parts = self.control_parts(x)?;
        let xdot = self.model.derivative(x, &parts.total());
        let sdot = self.cfg.c.tr_mul(&xdot);
        Ok(parts.sliding.dot(&sdot))
    }
}

pub fn control_parts(ctrl: &SmcController, x: &Vector) -> Result<ControlParts, SmcError> {
    ctrl.control_parts(x)
}

pub fn lyapunov_derivative(ctrl: &SmcController, x: &Vector) -> Result<f64, SmcError> {
    ctrl.lyapunov_derivative(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{siso_system, vsr_system};

    fn example1_cfg() -> SlidingModeConfig {
        SlidingModeConfig::new(
            Matrix::from_column_slice(2, 1, &[15.0, 1.0]),
            Vector::from_element(1, 10.0),
            Vector::from_element(1, 10.0),
        )
        .unwrap()
    }

    fn example2_cfg() -> SlidingModeConfig {
        SlidingModeConfig::new(
            Matrix::from_column_slice(5, 2, &[80.0, 3.0, 2.0, -3.0, 3.0, 1.0, 6.0, 2.0, 3.0, -3.0]),
            Vector::from_element(2, 5.0),
            Vector::from_element(2, 50.0),
        )
        .unwrap()
    }

    #[test]
    fn sliding_values() {
        let s = sliding_value(&example1_cfg(), &Vector::from_vec(vec![2.0, 5.0])).unwrap();
        assert_eq!(s.as_slice(), &[35.0]);
        let s = sliding_value(&example1_cfg(), &Vector::zeros(2)).unwrap();
        assert_eq!(s.as_slice(), &[0.0]);
        let mut x = Vector::zeros(5);
        x[0] = 0.1;
        let s = sliding_value(&example2_cfg(), &x).unwrap();
        assert!((s[0] - 8.0).abs() < 1e-12 && (s[1] - 0.1).abs() < 1e-12);
        assert!(matches!(
            sliding_value(&example1_cfg(), &Vector::zeros(3)),
            Err(SmcError::Dimension(_))
        ));
    }

    #[test]
    fn srbf_peak_and_zero() {
        let b = SrbfBasis::uniform(vec![2.0], 1.0).unwrap();
        assert_eq!(b.eval(0.0)[0], 0.0);
        assert!((b.eval(2.0)[0] - (1.0 - (-16.0f64).exp())).abs() < 1e-15);
        assert!((b.eval(2.0)[0] - 0.99999989).abs() < 1e-8);
    }

    #[test]
    fn srbf_basis_validation() {
        assert!(SrbfBasis::uniform(vec![0.1, 0.05], 1.0).is_err());
        assert!(SrbfBasis::uniform(vec![0.0, 0.05], 1.0).is_err());
        assert!(SrbfBasis::new(vec![0.1, 0.2], vec![1.0]).is_err());
        assert!(SrbfBasis::uniform(vec![0.1, 0.2], -1.0).is_err());
    }

    #[test]
    fn builtin_saturations() {
        let s = Vector::from_vec(vec![-3.0, 0.0, 0.5]);
        assert_eq!(
            SaturationFunction::Signum.eval(&s).as_slice(),
            &[-1.0, 0.0, 1.0]
        );
        let pwl = SaturationFunction::Pwl { delta: 2.0 };
        assert_eq!(pwl.eval_scalar(1.0), 0.5);
        assert_eq!(pwl.eval_scalar(3.0), 1.0);
        assert_eq!(pwl.eval_scalar(-3.0), -1.0);
        assert!(SaturationFunction::Pwl { delta: 0.0 }.validate().is_err());
    }

    #[test]
    fn learned_srbf_direct_formula() {
        let centers = vec![0.01, 0.03, 0.05, 0.1, 0.2, 0.5, 1.0];
        let theta = vec![
            -0.0050, -0.0150, -0.0250, -0.0498, -0.0981, -0.2203, -0.2933,
        ];
        let basis = SrbfBasis::uniform(centers.clone(), 1.0).unwrap();
        let sat = SaturationFunction::learned(basis, theta.clone()).unwrap();
        let expected: f64 = 1.0f64.tanh()
            + centers
                .iter()
                .zip(&theta)
                .map(|(r, t)| {
                    t * ((-(1.0 - r) * (1.0 - r) as f64).exp()
                        - (-(1.0 + r) * (1.0 + r) as f64).exp())
                })
                .sum::<f64>();
        assert!((sat.eval_scalar(1.0) - expected).abs() < 1e-14);
        assert!(SaturationFunction::learned(
            SrbfBasis::uniform(centers, 1.0).unwrap(),
            vec![0.0; 3]
        )
        .is_err());
    }

    #[test]
    fn shared_weights_across_channels() {
        let basis = SrbfBasis::uniform(vec![0.1, 0.3], 1.0).unwrap();
        let sat = SaturationFunction::learned(basis, vec![0.2, -0.1]).unwrap();
        let out = sat.eval(&Vector::from_vec(vec![0.4, 0.4, -0.4]));
        assert_eq!(out[0], out[1]);
        assert_eq!(out[0], -out[2]);
    }

    #[test]
    fn zero_weights_reduce_to_tanh() {
        let basis = SrbfBasis::uniform(vec![0.01, 0.2, 1.0], 1.0).unwrap();
        let sat = SaturationFunction::learned(basis, vec![0.0; 3]).unwrap();
        for s in uniform_grid(-4.0, 4.0, 81) {
            assert_eq!(sat.eval_scalar(s), s.tanh());
        }
    }

    #[test]
    fn condition_reports() {
        let grid = default_grid();
        assert!(check_saturation_conditions(&SaturationFunction::Tanh, &grid, DEFAULT_TAIL).all());
        assert!(
            check_saturation_conditions(&SaturationFunction::Signum, &grid, DEFAULT_TAIL).all()
        );
        assert!(check_saturation_conditions(
            &SaturationFunction::Pwl { delta: 0.5 },
            &grid,
            DEFAULT_TAIL
        )
        .all());
        let basis = SrbfBasis::uniform(vec![0.01, 0.03, 0.05, 0.1, 0.2, 0.5, 1.0], 1.0).unwrap();
        // Peak |sat| on the grid is 1.7869 at s = ±1.18 (numpy oracle).
        let mut theta = vec![0.0; 7];
        theta[6] = 1.0;
        let rep = check_saturation_conditions(
            &SaturationFunction::learned(basis, theta).unwrap(),
            &grid,
            DEFAULT_TAIL,
        );
        assert!(!rep.bounded);
        assert!(rep.odd && rep.zero_at_origin && rep.tail_limit);
    }

    #[test]
    fn grid_is_symmetric() {
        let g = default_grid();
        assert_eq!(g.len(), 601);
        assert_eq!(g[300], 0.0);
        for i in 0..601 {
            assert_eq!(g[i], -g[600 - i]);
        }
    }

    #[test]
    fn example1_control_parts_by_hand() {
        let ctrl =
            SmcController::new(siso_system(), example1_cfg(), SaturationFunction::Signum).unwrap();
        let parts = ctrl
            .control_parts(&Vector::from_vec(vec![2.0, 5.0]))
            .unwrap();
        // Cᵀf = 15·5 + 1·(−125) = −50, S = 35.
        let up1 = -(1.0 / 133.0) * (-50.0 + 10.0 * 35.0);
        let up2 = -(1.0 / 133.0) * 10.0;
        assert!((parts.u_p1[0] - up1).abs() < 1e-14);
        assert!((parts.u_p2[0] - up2).abs() < 1e-14);
        assert_eq!(parts.sliding[0], 35.0);
    }

    #[test]
    fn split_law_matches_single_expression() {
        let ctrl =
            SmcController::new(vsr_system(), example2_cfg(), SaturationFunction::Signum).unwrap();
        let x = Vector::from_vec(vec![0.03, -0.1, 0.2, 0.05, -0.3]);
        let parts = ctrl.control_parts(&x).unwrap();
        let s = &parts.sliding;
        let model = ctrl.model();
        let ctg = example2_cfg().c().tr_mul(&model.input_map(&x));
        let inner = example2_cfg().c().tr_mul(&model.drift(&x))
            + Vector::from_element(2, 5.0).component_mul(s)
            + Vector::from_element(2, 50.0).component_mul(&s.map(signum));
        let single = -(ctg.try_inverse().unwrap() * inner);
        assert!((parts.total() - single).abs().max() < 1e-12);
    }

    #[test]
    fn zero_state_gives_zero_control() {
        for sat in [
            SaturationFunction::Signum,
            SaturationFunction::Tanh,
            SaturationFunction::Pwl { delta: 1.0 },
        ] {
            let ctrl = SmcController::new(siso_system(), example1_cfg(), sat).unwrap();
            assert_eq!(ctrl.control(&Vector::zeros(2)).unwrap()[0], 0.0);
            assert_eq!(ctrl.lyapunov_derivative(&Vector::zeros(2)).unwrap(), 0.0);
        }
    }

    #[test]
    fn signum_and_tanh_agree_far_from_manifold() {
        let sgn =
            SmcController::new(siso_system(), example1_cfg(), SaturationFunction::Signum).unwrap();
        let tanh = sgn.with_saturation(SaturationFunction::Tanh).unwrap();
        for x in [[2.0, 5.0], [-1.0, -0.5], [0.8, 0.0]] {
            let x = Vector::from_row_slice(&x);
            let s = sliding_value(sgn.config(), &x).unwrap()[0];
            assert!(s.abs() > 10.0);
            assert!(
                (sgn.control(&x).unwrap() - tanh.control(&x).unwrap())
                    .abs()
                    .max()
                    < 1e-8
            );
        }
    }

    #[test]
    fn lyapunov_closed_form_example1() {
        let ctrl =
            SmcController::new(siso_system(), example1_cfg(), SaturationFunction::Signum).unwrap();
        let v = ctrl
            .lyapunov_derivative(&Vector::from_vec(vec![2.0, 5.0]))
            .unwrap();
        assert!((v + 12600.0).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(matches!(
            SmcController::new(vsr_system(), example1_cfg(), SaturationFunction::Signum),
            Err(SmcError::Dimension(_))
        ));
    }

    #[test]
    fn singular_ctg_is_an_error() {
        // C orthogonal to B = [0, 133]ᵀ makes Cᵀg = 0.
        let cfg = SlidingModeConfig::new(
            Matrix::from_column_slice(2, 1, &[1.0, 0.0]),
            Vector::from_element(1, 1.0),
            Vector::from_element(1, 1.0),
        )
        .unwrap();
        assert!(matches!(
            SmcController::new(siso_system(), cfg, SaturationFunction::Signum),
            Err(SmcError::ControlSingular { .. })
        ));
    }

    #[test]
    fn gains_must_be_positive() {
        assert!(SlidingModeConfig::new(
            Matrix::from_column_slice(2, 1, &[15.0, 1.0]),
            Vector::from_element(1, 0.0),
            Vector::from_element(1, 10.0),
        )
        .is_err());
    }
}
