//! Input-affine plant models `ẋ = f(x) + g(x)u` and the two benchmark
//! systems: a second-order SISO servo and the two-wheeled robot balancing
//! in Segway mode.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix4, Matrix4x2, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{Matrix, Vector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid parameter {name} = {value}: must be strictly positive")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("model assembly failed: {0}")]
    Assembly(String),
}

type DriftFn = dyn Fn(&Vector) -> Vector + Send + Sync;
type InputMapFn = dyn Fn(&Vector) -> Matrix + Send + Sync;

/// Continuous-time input-affine system. Immutable once built.
#[derive(Clone)]
pub struct SystemModel {
    pub name: String,
    n: usize,
    m: usize,
    drift: Arc<DriftFn>,
    input_map: Arc<InputMapFn>,
    pub state_units: Vec<String>,
    pub input_units: Vec<String>,
}

impl fmt::Debug for SystemModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemModel")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("m", &self.m)
            .finish_non_exhaustive()
    }
}

impl SystemModel {
    pub fn new<F, G>(name: impl Into<String>, n: usize, m: usize, drift: F, input_map: G) -> Self
    where
        F: Fn(&Vector) -> Vector + Send + Sync + 'static,
        G: Fn(&Vector) -> Matrix + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            n,
            m,
            drift: Arc::new(drift),
            input_map: Arc::new(input_map),
            state_units: vec![String::new(); n],
            input_units: vec![String::new(); m],
        }
    }

    pub fn with_units(mut self, state_units: &[&str], input_units: &[&str]) -> Self {
        self.state_units = state_units.iter().map(|s| s.to_string()).collect();
        self.input_units = input_units.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn state_dim(&self) -> usize {
        self.n
    }

    pub fn input_dim(&self) -> usize {
        self.m
    }

    pub fn drift(&self, x: &Vector) -> Vector {
        (self.drift)(x)
    }

    pub fn input_map(&self, x: &Vector) -> Matrix {
        (self.input_map)(x)
    }

    /// `f(x) + g(x)u`.
    pub fn derivative(&self, x: &Vector, u: &Vector) -> Vector {
        self.drift(x) + self.input_map(x) * u
    }
}

/// Linear servo `ẋ = Ax + Bu`, `A = [[0, 1], [0, -25]]`, `B = [0, 133]ᵀ`.
pub fn siso_system() -> SystemModel {
    let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, -25.0]);
    let b = Matrix::from_column_slice(2, 1, &[0.0, 133.0]);
    SystemModel::new("siso", 2, 1, move |x| &a * x, move |_| b.clone())
        .with_units(&["rad", "rad/s"], &["V"])
}

/// Physical parameters of the two-wheeled robot. `h` and `l` are the half
/// height offset and half wheel separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VsrParameters {
    pub j1x: f64,
    pub j1y: f64,
    pub j1z: f64,
    pub j2x: f64,
    pub j2y: f64,
    pub j2z: f64,
    pub j3x: f64,
    pub j3y: f64,
    pub j3z: f64,
    pub r: f64,
    pub h: f64,
    pub l: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub g0: f64,
}

/// Gravity values tried when matching the published Segway coefficients.
pub const GRAVITY_CANDIDATES: [f64; 2] = [9.8, 9.81];

impl Default for VsrParameters {
    fn default() -> Self {
        Self {
            j1x: 1.18,
            j1y: 0.06,
            j1z: 1.21,
            j2x: 0.014,
            j2y: 0.017,
            j2z: 0.0046,
            j3x: 0.03,
            j3y: 0.05,
            j3z: 0.02,
            r: 0.17,
            h: 0.36 / 2.0,
            l: 0.68 / 2.0,
            m1: 23.14,
            m2: 0.5,
            m3: 3.8,
            g0: 9.8,
        }
    }
}

impl VsrParameters {
    pub fn with_gravity(mut self, g0: f64) -> Self {
        self.g0 = g0;
        self
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let fields = [
            ("j1x", self.j1x),
            ("j1y", self.j1y),
            ("j1z", self.j1z),
            ("j2x", self.j2x),
            ("j2y", self.j2y),
            ("j2z", self.j2z),
            ("j3x", self.j3x),
            ("j3y", self.j3y),
            ("j3z", self.j3z),
            ("r", self.r),
            ("h", self.h),
            ("l", self.l),
            ("m1", self.m1),
            ("m2", self.m2),
            ("m3", self.m3),
            ("g0", self.g0),
        ];
        for (name, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(DynamicsError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }
}

/// Segway-mode Chaplygin equations written as
/// `M q̈ = b_grav sin(q1) + B_tau [τ3, τ4]ᵀ` over `q = [pitch, yaw, left wheel, right wheel]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaplyginModel {
    pub mass: Matrix4<f64>,
    pub b_grav: Vector4<f64>,
    pub b_tau: Matrix4x2<f64>,
}

pub fn assemble_chaplygin(p: &VsrParameters) -> Result<ChaplyginModel, DynamicsError> {
    p.validate()?;
    let VsrParameters {
        j1y,
        j1z,
        j2y,
        j2z,
        j3y,
        j3z,
        r,
        h,
        l,
        m1,
        m2,
        m3,
        g0,
        ..
    } = *p;
    let r2 = r * r;
    let wheel_mass = m1 + 2.0 * m2 + 2.0 * m3;

    let pitch = j1y
        + 2.0 * (j2y + j3y + h * h * (2.0 * m1 + m2) + 2.0 * h * (m1 + m2) * r)
        + wheel_mass * r2;
    let pitch_yaw = l * m1 * (2.0 * h + r);
    let pitch_wheel = 0.5 * (2.0 * j3y + 2.0 * h * (m1 + m2) * r + wheel_mass * r2);
    let yaw = j1z + 2.0 * j2z + 2.0 * j3z + l * l * m1;
    let yaw_wheel = 0.5 * l * m1 * r;
    let wheel = j3y + (0.25 * m1 + m2 + m3) * r2;
    let wheel_cross = 0.25 * m1 * r2;

    #[rustfmt::skip]
    let mass = Matrix4::new(
        pitch,       pitch_yaw, pitch_wheel, pitch_wheel,
        pitch_yaw,   yaw,       yaw_wheel,   yaw_wheel,
        pitch_wheel, yaw_wheel, wheel,       wheel_cross,
        pitch_wheel, yaw_wheel, wheel_cross, wheel,
    );
    let b_grav = Vector4::new(2.0 * g0 * h * (m1 + m2), 0.0, 0.0, 0.0);
    #[rustfmt::skip]
    let b_tau = Matrix4x2::new(
        0.0, 0.0,
        0.0, 0.0,
        1.0, 0.0,
        0.0, 1.0,
    );
    Ok(ChaplyginModel {
        mass,
        b_grav,
        b_tau,
    })
}

/// Accelerations `M⁻¹ b_grav` and `M⁻¹ B_tau` precomputed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegwayCoefficients {
    pub gravity: Vector4<f64>,
    pub input: Matrix4x2<f64>,
}

impl SegwayCoefficients {
    /// The seven distinct published numbers, in the order
    /// `[sin→ẋ2, u→ẋ2, sin→ẋ3, u→ẋ3, sin→ẋ4, u1→ẋ4, u2→ẋ4]`.
    pub fn distinct(&self) -> [f64; 7] {
        [
            self.gravity[0],
            self.input[(0, 0)],
            self.gravity[1],
            self.input[(1, 0)],
            self.gravity[2],
            self.input[(2, 0)],
            self.input[(2, 1)],
        ]
    }

    /// Extracts coefficients from any model with the Segway state layout.
    pub fn from_model(model: &SystemModel) -> Self {
        let mut x = Vector::zeros(5);
        x[0] = std::f64::consts::FRAC_PI_2;
        let f = model.drift(&x);
        let g = model.input_map(&Vector::zeros(5));
        Self {
            gravity: Vector4::new(f[1], f[2], f[3], f[4]),
            input: Matrix4x2::from_fn(|i, j| g[(i + 1, j)]),
        }
    }

    pub fn to_system(self, name: &str) -> SystemModel {
        let SegwayCoefficients { gravity, input } = self;
        let g_mat = Matrix::from_fn(5, 2, |i, j| if i == 0 { 0.0 } else { input[(i - 1, j)] });
        SystemModel::new(
            name,
            5,
            2,
            move |x| {
                let s = x[0].sin();
                Vector::from_vec(vec![
                    x[1],
                    gravity[0] * s,
                    gravity[1] * s,
                    gravity[2] * s,
                    gravity[3] * s,
                ])
            },
            move |_| g_mat.clone(),
        )
        .with_units(
            &["rad", "rad/s", "rad/s", "rad/s", "rad/s"],
            &["N·m", "N·m"],
        )
    }
}

/// Published Segway-mode coefficients in the same order as
/// [`SegwayCoefficients::distinct`].
pub const PUBLISHED_SEGWAY_COEFFICIENTS: [f64; 7] = [
    145.1697, -1.1790, -36.2317, 0.7819, -55.5691, 4.3571, -0.2575,
];

impl ChaplyginModel {
    pub fn segway_coefficients(&self) -> Result<SegwayCoefficients, DynamicsError> {
        let inv = self
            .mass
            .try_inverse()
            .ok_or_else(|| DynamicsError::Assembly("generalized mass matrix is singular".into()))?;
        Ok(SegwayCoefficients {
            gravity: inv * self.b_grav,
            input: inv * self.b_tau,
        })
    }
}

/// State space over `x = [q1, q̇1, q̇2, q̇3, q̇4]`, `u = [τ3, τ4]`.
pub fn chaplygin_to_state_space(cm: &ChaplyginModel) -> Result<SystemModel, DynamicsError> {
    Ok(cm.segway_coefficients()?.to_system("vsr-from-chaplygin"))
}

/// Segway model with the literal published coefficients.
pub fn vsr_system() -> SystemModel {
    let [sg2, u2, sg3, u3, sg4, own, cross] = PUBLISHED_SEGWAY_COEFFICIENTS;
    SegwayCoefficients {
        gravity: Vector4::new(sg2, sg3, sg4, sg4),
        input: Matrix4x2::new(u2, u2, u3, u3, own, cross, cross, own),
    }
    .to_system("vsr")
}

/// Largest relative deviation of a coefficient set from the published one.
pub fn max_relative_deviation(coeffs: &[f64; 7]) -> f64 {
    coeffs
        .iter()
        .zip(PUBLISHED_SEGWAY_COEFFICIENTS.iter())
        .map(|(c, p)| ((c - p) / p).abs())
        .fold(0.0, f64::max)
}

/// Picks the gravity candidate whose assembled pitch coefficient lies
/// closest to the published one.
pub fn select_gravity(p: &VsrParameters) -> Result<f64, DynamicsError> {
    let mut best = (f64::INFINITY, GRAVITY_CANDIDATES[0]);
    for g0 in GRAVITY_CANDIDATES {
        let coeffs = assemble_chaplygin(&p.with_gravity(g0))?.segway_coefficients()?;
        let err = (coeffs.gravity[0] - PUBLISHED_SEGWAY_COEFFICIENTS[0]).abs();
        if err < best.0 {
            best = (err, g0);
        }
    }
    Ok(best.1)
}
