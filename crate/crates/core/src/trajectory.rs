//! Sampled closed-loop trajectories.

use crate::numerics::Vector;

/// Uniformly sampled record of a simulation. Sample `k` is taken at
/// `times[k]`; `inputs` excludes exploration, which is logged separately.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryLog {
    pub times: Vec<f64>,
    pub states: Vec<Vector>,
    pub inputs: Vec<Vector>,
    pub exploration: Vec<Vector>,
    pub sliding: Vec<Vector>,
    pub cost: Vec<f64>,
}

impl TrajectoryLog {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn push(&mut self, t: f64, x: Vector, u: Vector, e: Vector, s: Vector, r: f64) {
        self.times.push(t);
        self.states.push(x);
        self.inputs.push(u);
        self.exploration.push(e);
        self.sliding.push(s);
        self.cost.push(r);
    }

    pub fn state_dim(&self) -> usize {
        self.states.first().map_or(0, |x| x.len())
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.first().map_or(0, |u| u.len())
    }

    pub fn final_state(&self) -> Option<&Vector> {
        self.states.last()
    }

    pub fn duration(&self) -> f64 {
        match (self.times.first(), self.times.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// Samples of one input channel.
    pub fn input_channel(&self, i: usize) -> Vec<f64> {
        self.inputs.iter().map(|u| u[i]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.times
            .iter()
            .chain(self.cost.iter())
            .all(|v| v.is_finite())
            && self
                .states
                .iter()
                .chain(&self.inputs)
                .chain(&self.exploration)
                .chain(&self.sliding)
                .all(|v| v.iter().all(|x| x.is_finite()))
    }
}
