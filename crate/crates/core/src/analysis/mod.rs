//! Monte-Carlo estimators over noise ensembles: channel reconstruction,
//! average gate fidelities and dephasing times.

mod channel;
mod dephasing;

pub use channel::{
    fidelity_fc, fidelity_fc_literal, fidelity_fx, pauli_basis, reconstruct_channel, ChannelEstimate, FidelityReport,
};
pub use dephasing::{
    dephasing_time, spread_dephasing_rate, DephasingMethod, DephasingOptions, DephasingResult, DephasingTarget,
    EffectiveTerms,
};

use alloc::format;
use alloc::vec::Vec;

use crate::model::NoiseCoupling;
use crate::noise::{sample_channels, ChannelId, NoiseSpectrum, NoiseTrajectory};
use crate::{seed, Error, Result};

/// Minimum ensemble size.
pub const MIN_TRAJECTORIES: usize = 100;

/// A seeded noise ensemble.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleConfig {
    pub n_trajectories: usize,
    pub base_seed: u64,
    pub spectrum: NoiseSpectrum,
    pub channels: Vec<ChannelId>,
}

impl EnsembleConfig {
    pub fn new(n_trajectories: usize, base_seed: u64, spectrum: NoiseSpectrum, channels: Vec<ChannelId>) -> Result<Self> {
        let e = Self {
            n_trajectories,
            base_seed,
            spectrum,
            channels,
        };
        e.validate()?;
        Ok(e)
    }

    /// `x` and `z` channels on each of the first `n_qubits` sites.
    pub fn xz_channels(n_qubits: usize) -> Vec<ChannelId> {
        (0..n_qubits).flat_map(|q| [ChannelId::x(q), ChannelId::z(q)]).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trajectories < MIN_TRAJECTORIES {
            return Err(Error::TooFewTrajectories {
                got: self.n_trajectories,
                need: MIN_TRAJECTORIES,
            });
        }
        self.spectrum.validate()?;
        for (i, c) in self.channels.iter().enumerate() {
            if self.channels[..i].contains(c) {
                return Err(Error::DuplicateChannel(format!("{c}")));
            }
        }
        Ok(())
    }

    pub fn trajectory_seed(&self, k: usize) -> u64 {
        seed::trajectory_seed(self.base_seed, k as u64)
    }

    /// Noise of trajectory `k` on every configured channel.
    pub fn sample(&self, k: usize) -> Result<Vec<NoiseTrajectory>> {
        sample_channels(&self.spectrum, &self.channels, self.trajectory_seed(k))
    }

    /// Noise of trajectory `k` as a register coupling.
    pub fn coupling(&self, k: usize, n_qubits: usize) -> Result<NoiseCoupling> {
        NoiseCoupling::new(self.sample(k)?, n_qubits)
    }
}

/// Fixed-size blocks for streaming reductions; the block size does not
/// depend on the executor, so sums are reproducible.
pub(crate) const BLOCK: usize = 32;

/// Sample mean and standard error of the mean.
pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = crate::linalg::pairwise_sum_f64(xs) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = crate::linalg::pairwise_sum_f64(&dev) / (n - 1) as f64;
    (mean, num_traits::Float::sqrt(var / n as f64))
}
