//! Sliding-mode control with saturation functions learned by integral
//! reinforcement learning.
//!
//! Modules, bottom-up:
//! - [`numerics`]: RK4 with accumulator channels and ridge least squares.
//! - [`dynamics`]: input-affine plants, including the two-wheeled robot.
//! - [`smc`]: sliding manifolds, control laws and saturation functions.
//! - [`irl`]: episode collection, regression assembly and policy iteration.
//! - [`experiments`]: the two benchmark runs, metrics, config and export.

pub mod dynamics;
pub mod experiments;
pub mod irl;
pub mod numerics;
pub mod smc;
pub mod trajectory;
