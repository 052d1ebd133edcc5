#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;


use super::{C64, ONE, ZERO};

/// Pure state amplitudes in a fixed product basis.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn from_amplitudes(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    pub fn from_real(amps: &[f64]) -> Self {
        Self::from_amplitudes(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// The `index`-th computational basis state.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(C64::new(1.0 / n, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_amplitudes(self.amps.iter().map(|a| a * s).collect())
    }

    pub fn add(&self, other: &StateVector) -> Self {
        Self::from_amplitudes(self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &StateVector) -> Self {
        Self::from_amplitudes(self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect())
    }

    /// `|<self|other>|^2`, the overlap fidelity of two pure states.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Population of each basis state.
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn kron(&self, other: &StateVector) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }

    /// Multiplies by the unit phase that makes the largest-modulus amplitude
    /// real and positive.
    pub fn canonical_phase(&self) -> Self {
        let lead = self
            .amps
            .iter()
            .copied()
            .fold(ZERO, |best, a| if a.norm() > best.norm() + 1e-12 { a } else { best });
        if lead == ZERO {
            return self.clone();
        }
        self.scale(lead.conj() / lead.norm())
    }
}
