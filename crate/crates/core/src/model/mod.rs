//! Hamiltonians and operator families: the coupled pair and its encoded
//! qubit, the two-encoded-qubit register, parameter-spread variants, the
//! flux-noise mapping and the resonant qubit-resonator system.

mod coupling;
mod drive;
mod jc;
mod pair;

pub use coupling::NoiseCoupling;
pub use drive::DriveTerm;
pub use jc::{jc_doublets, jc_hamiltonian, Doublet, JaynesCummingsSpec, JcOperators};
pub use pair::{
    effective_coefficient, effective_encoded_hamiltonian, pair_hamiltonian, EncodedSubspace, PairEigenbasis,
    UqdpPairSpec,
};

use alloc::vec::Vec;

use crate::linalg::{pauli_product, Axis, CMatrix, PauliLabel, StateVector};
use crate::Result;

/// Flux qubit noise mapping `dV = r1 E_J df`, with `df` in units of the flux
/// quantum.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FluxMapping {
    pub e_j: f64,
    pub r1: f64,
}

impl FluxMapping {
    pub fn energy_noise(&self, flux_noise: f64) -> f64 {
        self.r1 * self.e_j * flux_noise
    }

    pub fn flux_noise(&self, energy_noise: f64) -> f64 {
        energy_noise / (self.r1 * self.e_j)
    }

    /// Flux-noise amplitude (in flux quanta) for an energy-noise amplitude
    /// `A`, i.e. `S_f(w) = flux_amplitude^2 / w`.
    pub fn flux_amplitude(&self, amplitude: f64) -> f64 {
        self.flux_noise(amplitude)
    }
}

/// Register sites of the two encoded qubits: `sigma_1, sigma_2, tau_1, tau_2`.
pub const SIGMA_1: usize = 0;
pub const SIGMA_2: usize = 1;
pub const TAU_1: usize = 2;
pub const TAU_2: usize = 3;

/// Two encoded qubits `sigma` and `tau` on a four-qubit register, coupled by
/// a modulated `2 lambda_c cos(w t) sz2 tz1` and an optional static parasitic
/// `E_cc sx2 tx1`.
#[derive(Clone, Debug)]
pub struct TwoQubitSystem {
    pub sigma: EncodedSubspace,
    pub tau: EncodedSubspace,
    pub lambda_c: f64,
    pub e_cc: f64,
    /// Coupling modulation frequency; by default the difference of the two
    /// encoded splittings.
    pub drive_omega: f64,
    h_static: CMatrix,
    coupling: CMatrix,
    parasitic: CMatrix,
}

impl TwoQubitSystem {
    pub fn new(sigma: &UqdpPairSpec, tau: &UqdpPairSpec, lambda_c: f64, e_cc: f64) -> Result<Self> {
        let sigma = EncodedSubspace::new(sigma)?;
        let tau = EncodedSubspace::new(tau)?;
        let drive_omega = sigma.splitting() - tau.splitting();
        let h_s = pair_hamiltonian(sigma.spec());
        let h_t = pair_hamiltonian(tau.spec());
        let h_static = &h_s.kron(&CMatrix::identity(4)) + &CMatrix::identity(4).kron(&h_t);
        let two = |a: Axis| -> Result<CMatrix> {
            pauli_product(&[PauliLabel::new(a, SIGMA_2), PauliLabel::new(a, TAU_1)], 4)
        };
        Ok(Self {
            sigma,
            tau,
            lambda_c,
            e_cc,
            drive_omega: drive_omega.abs(),
            h_static,
            coupling: two(Axis::Z)?,
            parasitic: two(Axis::X)?,
        })
    }

    pub fn with_drive_omega(mut self, omega: f64) -> Self {
        self.drive_omega = omega;
        self
    }

    /// `H0(sigma) x I + I x H0(tau)`.
    pub fn h_static(&self) -> &CMatrix {
        &self.h_static
    }

    /// `sz2 tz1`.
    pub fn coupling_operator(&self) -> &CMatrix {
        &self.coupling
    }

    /// `sx2 tx1`.
    pub fn parasitic_operator(&self) -> &CMatrix {
        &self.parasitic
    }

    /// Encoded basis `|a b>` for `a, b` in `{3, 4}`, ordered as the logical
    /// `|00>, |01>, |10>, |11>`.
    pub fn basis(&self) -> Vec<StateVector> {
        let mut out = Vec::with_capacity(4);
        for a in self.sigma.basis() {
            for b in self.tau.basis() {
                out.push(a.kron(&b));
            }
        }
        out
    }

    pub fn energies(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(4);
        for a in self.sigma.energies() {
            for b in self.tau.energies() {
                out.push(a + b);
            }
        }
        out
    }

    /// The coupling drive and parasitic term over `window`.
    pub fn drives(&self, window: (f64, f64)) -> Vec<DriveTerm> {
        let mut d = Vec::new();
        if self.lambda_c != 0.0 {
            d.push(DriveTerm::new(&self.coupling, self.lambda_c, self.drive_omega, 0.0, window));
        }
        if self.e_cc != 0.0 {
            d.push(DriveTerm::constant(&self.parasitic, self.e_cc, window));
        }
        d
    }
}
