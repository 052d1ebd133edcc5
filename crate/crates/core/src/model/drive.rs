
#[allow(unused_imports)]
use num_traits::Float;
use crate::linalg::{CMatrix, SparseOp};

/// `2 A cos(w t + phase) O` inside `[t_start, t_stop)`, zero outside.
///
/// A static term of energy `E` is a drive with `w = 0`, `phase = 0` and
/// amplitude `E / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DriveTerm {
    pub operator: SparseOp,
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
    pub window: (f64, f64),
}

impl DriveTerm {
    pub fn new(operator: &CMatrix, amplitude: f64, omega: f64, phase: f64, window: (f64, f64)) -> Self {
        Self {
            operator: operator.to_sparse(),
            amplitude,
            omega,
            phase,
            window,
        }
    }

    /// Constant `energy * O` over the window.
    pub fn constant(operator: &CMatrix, energy: f64, window: (f64, f64)) -> Self {
        Self::new(operator, 0.5 * energy, 0.0, 0.0, window)
    }

    /// Scalar prefactor multiplying the operator at time `t`.
    pub fn coefficient(&self, t: f64) -> f64 {
        if t < self.window.0 || t >= self.window.1 {
            0.0
        } else {
            2.0 * self.amplitude * (self.omega * t + self.phase).cos()
        }
    }

    /// Same drive over a different window.
    pub fn with_window(mut self, window: (f64, f64)) -> Self {
        self.window = window;
        self
    }

    /// The largest angular rate the drive introduces.
    pub fn rate(&self) -> f64 {
        self.omega.abs().max(2.0 * self.amplitude.abs())
    }
}
