use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{pauli_operator, CMatrix, PauliLabel, SparseOp};
use crate::noise::{ChannelId, NoiseTrajectory};
use crate::{Error, Result};

/// `V_n(t) = sum_aj dV_aj(t) sigma_aj` on an `n_qubits` register; a
/// channel's qubit index is its register site.
#[derive(Clone, Debug)]
pub struct NoiseCoupling {
    n_qubits: usize,
    terms: Vec<(NoiseTrajectory, SparseOp)>,
}

impl NoiseCoupling {
    pub fn new(trajectories: Vec<NoiseTrajectory>, n_qubits: usize) -> Result<Self> {
        let mut terms: Vec<(NoiseTrajectory, SparseOp)> = Vec::with_capacity(trajectories.len());
        for t in trajectories {
            let c = t.channel();
            if terms.iter().any(|(u, _)| u.channel() == c) {
                return Err(Error::DuplicateChannel(format!("{c}")));
            }
            let op = pauli_operator(PauliLabel::new(c.axis, c.qubit), n_qubits)?;
            terms.push((t, op.to_sparse()));
        }
        Ok(Self { n_qubits, terms })
    }

    /// No noise at all.
    pub fn none(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[(NoiseTrajectory, SparseOp)] {
        &self.terms
    }

    pub fn channels(&self) -> impl Iterator<Item = ChannelId> + '_ {
        self.terms.iter().map(|(t, _)| t.channel())
    }

    /// Trajectory of a channel, if present.
    pub fn trajectory(&self, channel: ChannelId) -> Option<&NoiseTrajectory> {
        self.terms.iter().find(|(t, _)| t.channel() == channel).map(|(t, _)| t)
    }

    /// Instantaneous value of a channel (zero when absent).
    pub fn value(&self, channel: ChannelId, t: f64) -> f64 {
        self.trajectory(channel).map_or(0.0, |tr| tr.value(t))
    }

    /// `V_n(t)` as a dense matrix.
    pub fn operator_at(&self, t: f64) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (tr, op) in &self.terms {
            op.add_real_scaled_into(tr.value(t), &mut m);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Axis;

    #[test]
    fn zero_trajectories_give_zero_operator() {
        let c = NoiseCoupling::new(
            alloc::vec![NoiseTrajectory::zero(ChannelId::x(0)), NoiseTrajectory::zero(ChannelId::z(1))],
            2,
        )
        .unwrap();
        assert_eq!(c.operator_at(0.3), CMatrix::zeros(4, 4));
    }

    #[test]
    fn constant_channel() {
        let tr = NoiseTrajectory::from_tones(ChannelId::x(0), [(0.0, 0.25, 0.0)]);
        let c = NoiseCoupling::new(alloc::vec![tr], 2).unwrap();
        let expected = pauli_operator(PauliLabel::new(Axis::X, 0), 2).unwrap().scale_real(0.25);
        assert_eq!(c.operator_at(1.0), expected);
    }

    #[test]
    fn duplicates_and_bad_sites_rejected() {
        let a = NoiseTrajectory::zero(ChannelId::z(0));
        assert!(matches!(
            NoiseCoupling::new(alloc::vec![a.clone(), a], 2),
            Err(Error::DuplicateChannel(_))
        ));
        assert!(matches!(
            NoiseCoupling::new(alloc::vec![NoiseTrajectory::zero(ChannelId::z(2))], 2),
            Err(Error::SiteOutOfRange { .. })
        ));
    }
}
