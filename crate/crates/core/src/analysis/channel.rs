use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{mean_and_se, EnsembleConfig};
use crate::dynamics::GateSetup;
use crate::linalg::{eigendecompose_hermitian, pairwise_sum, Axis, CMatrix, Eigen};
#[cfg(test)]
use crate::linalg::C64;
use crate::model::NoiseCoupling;
use crate::parallel::Executor;
use crate::{Error, Result};

/// Pauli basis of a `d`-dim space (`d` = 2 or 4): `I, X, Y, Z`, or
/// `Sigma_i x Omega_j` at index `4 i + j`.
pub fn pauli_basis(d: usize) -> Result<Vec<CMatrix>> {
    match d {
        2 => Ok(Axis::ALL.iter().map(|a| a.matrix()).collect()),
        4 => Ok(Axis::ALL
            .iter()
            .flat_map(|a| Axis::ALL.iter().map(move |b| a.matrix().kron(&b.matrix())))
            .collect()),
        _ => Err(Error::DimensionMismatch(alloc::format!(
            "channel dimension {d}, expected 2 or 4"
        ))),
    }
}

/// A quantum channel on the encoded subspace, stored as its action on the
/// Pauli basis.
#[derive(Clone, Debug)]
pub struct ChannelEstimate {
    d: usize,
    images: Vec<CMatrix>,
    /// Per-trajectory projected maps `M_k`, so that
    /// `epsilon(rho) = mean_k M_k rho M_k^dag`.
    samples: Vec<CMatrix>,
}

impl ChannelEstimate {
    /// Channel given directly by its Pauli-basis images.
    pub fn from_images(d: usize, images: Vec<CMatrix>) -> Result<Self> {
        let n = pauli_basis(d)?.len();
        if images.len() != n || images.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::DimensionMismatch(alloc::format!(
                "need {n} images of size {d}x{d}"
            )));
        }
        Ok(Self {
            d,
            images,
            samples: Vec::new(),
        })
    }

    /// Ensemble average of `rho -> M_k rho M_k^dag`.
    ///
    /// Each basis element `B` is split into its eigenprojectors, each pure
    /// state `v` is pushed through every `M_k`, and `epsilon(B)` is rebuilt as
    /// `sum lambda mean_k (M_k v)(M_k v)^dag`.
    pub fn from_maps(d: usize, maps: Vec<CMatrix>) -> Result<Self> {
        let basis = pauli_basis(d)?;
        if maps.is_empty() {
            return Err(Error::TooFewTrajectories { got: 0, need: 1 });
        }
        if maps.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::DimensionMismatch("projected map size".into()));
        }
        let decomps: Vec<Eigen> = basis.iter().map(eigendecompose_hermitian).collect::<Result<_>>()?;
        let n = maps.len();
        let images = decomps
            .iter()
            .map(|e| {
                let sum = pairwise_sum(n, &|k| pure_state_image(e, &maps[k]), &|a: CMatrix, b: CMatrix| &a + &b)
                    .expect("nonempty ensemble");
                sum.scale_real(1.0 / n as f64)
            })
            .collect();
        Ok(Self {
            d,
            images,
            samples: maps,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `epsilon(B)` for the Pauli basis, in [`pauli_basis`] order.
    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn samples(&self) -> &[CMatrix] {
        &self.samples
    }

    /// `epsilon(A)` for any operator, by linearity.
    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        let basis = pauli_basis(self.d)?;
        let mut out = CMatrix::zeros(self.d, self.d);
        for (b, img) in basis.iter().zip(&self.images) {
            let c = (b * a).trace() / self.d as f64;
            out.add_scaled(c, img);
        }
        Ok(out)
    }

    /// `1 - Tr epsilon(I) / d`.
    pub fn trace_defect(&self) -> f64 {
        1.0 - self.images[0].trace().re / self.d as f64
    }

    /// `max |epsilon(B)^dag - epsilon(B)|` over the Hermitian basis.
    pub fn hermiticity_defect(&self) -> f64 {
        self.images.iter().map(|m| m.hermitian_asymmetry()).fold(0.0, f64::max)
    }
}

fn pure_state_image(e: &Eigen, m: &CMatrix) -> CMatrix {
    let d = m.rows();
    let mut out = CMatrix::zeros(d, d);
    for (k, &lambda) in e.values.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let w = m.apply(&e.vector(k));
        let a = w.amplitudes();
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += a[i] * a[j].conj() * lambda;
            }
        }
    }
    out
}

/// Runs the gate over the ensemble (or once, noiselessly, for `None`) and
/// reconstructs the channel on its subspace.
pub fn reconstruct_channel<E: Executor>(
    gate: &GateSetup,
    ensemble: Option<&EnsembleConfig>,
    exec: &E,
) -> Result<ChannelEstimate> {
    let d = gate.subspace_dim();
    let maps: Vec<CMatrix> = match ensemble {
        None => alloc::vec![gate.run(&NoiseCoupling::none(gate.n_qubits))?.map],
        Some(ens) => {
            ens.validate()?;
            let runs = exec.map_indexed(ens.n_trajectories, |k| -> Result<CMatrix> {
                let noise = ens.coupling(k, gate.n_qubits)?;
                Ok(gate.run(&noise)?.map)
            });
            runs.into_iter().collect::<Result<_>>()?
        }
    };
    ChannelEstimate::from_maps(d, maps)
}

/// A fidelity with its Monte-Carlo standard error.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FidelityReport {
    pub value: f64,
    pub standard_error: f64,
    pub n_samples: usize,
    pub metadata: BTreeMap<String, String>,
}

impl FidelityReport {
    pub fn with_meta(mut self, key: &str, value: impl core::fmt::Display) -> Self {
        self.metadata.insert(key.into(), alloc::format!("{value}"));
        self
    }
}

/// `sum_B w_B Re Tr(U B U^dag eps(B))` over the selected basis elements.
fn overlap_sum(u: &CMatrix, basis: &[CMatrix], images: &[CMatrix], select: &[usize]) -> f64 {
    let ud = u.dagger();
    select
        .iter()
        .map(|&i| {
            let target = &(u * &basis[i]) * &ud;
            (&target * &images[i]).trace().re
        })
        .sum()
}

fn report(
    channel: &ChannelEstimate,
    u: &CMatrix,
    select: &[usize],
    offset: f64,
    weight: f64,
) -> Result<FidelityReport> {
    let d = channel.d;
    if u.rows() != d || u.cols() != d {
        return Err(Error::DimensionMismatch("target unitary size".into()));
    }
    let basis = pauli_basis(d)?;
    let value = offset + weight * overlap_sum(u, &basis, &channel.images, select);
    let per_sample: Vec<f64> = channel
        .samples
        .iter()
        .map(|m| {
            let md = m.dagger();
            let imgs: Vec<CMatrix> = basis.iter().map(|b| &(m * b) * &md).collect();
            offset + weight * overlap_sum(u, &basis, &imgs, select)
        })
        .collect();
    let (_, se) = mean_and_se(&per_sample);
    Ok(FidelityReport {
        value,
        standard_error: if per_sample.is_empty() { 0.0 } else { se },
        n_samples: per_sample.len(),
        metadata: BTreeMap::new(),
    })
}

/// `F_X = 1/2 + (1/12) sum_{i=1..3} Tr(U S_i U^dag eps(S_i))`.
pub fn fidelity_fx(channel: &ChannelEstimate, u: &CMatrix) -> Result<FidelityReport> {
    if channel.d != 2 {
        return Err(Error::DimensionMismatch("F_X needs a single encoded qubit".into()));
    }
    report(channel, u, &[1, 2, 3], 0.5, 1.0 / 12.0)
}

/// `F_C = 1/5 + (1/80) sum_{i,j=0..3} Tr(U (S_i x O_j) U^dag eps(S_i x O_j))`,
/// identity terms included, so a perfect gate scores 1.
pub fn fidelity_fc(channel: &ChannelEstimate, u: &CMatrix) -> Result<FidelityReport> {
    if channel.d != 4 {
        return Err(Error::DimensionMismatch("F_C needs two encoded qubits".into()));
    }
    let all: Vec<usize> = (0..16).collect();
    report(channel, u, &all, 0.2, 1.0 / 80.0)
}

/// The nine-term variant with `i, j` restricted to `1..3`; a perfect gate
/// scores `0.65`.
pub fn fidelity_fc_literal(channel: &ChannelEstimate, u: &CMatrix) -> Result<FidelityReport> {
    if channel.d != 4 {
        return Err(Error::DimensionMismatch("F_C needs two encoded qubits".into()));
    }
    let sel: Vec<usize> = (1..4).flat_map(|i| (1..4).map(move |j| 4 * i + j)).collect();
    report(channel, u, &sel, 0.2, 1.0 / 80.0)
}
