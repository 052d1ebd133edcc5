//! Simulation core for encoded qubits protected by a universal degeneracy
//! point: two coupled qubits whose `{|3>, |4>}` eigenpair sees arbitrary
//! low-frequency noise only through off-diagonal matrix elements.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! operating system (threads, files, clocks, FFT-based diagnostics) lives in
//! the `uqdp` companion crate.
//!
//! Units: `hbar = 1`. Energies are angular frequencies in rad/s and times are
//! in seconds.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices, states, Pauli algebra, Hermitian
//!   eigensolver and subspace projection.
//! * [`noise`]: seeded 1/f trajectories on a hybrid frequency grid.
//! * [`model`]: the coupled-qubit pair, its encoded subspace, the two
//!   encoded-qubit system, parameter-spread variants and the Jaynes-Cummings
//!   qubit-resonator system.
//! * [`dynamics`]: fixed-step RK4 propagation and gate/preparation schedules.
//! * [`analysis`]: Monte-Carlo dephasing times, channel reconstruction and
//!   average gate fidelities.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod analysis;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod model;
pub mod noise;
pub mod parallel;
pub mod seed;

pub use error::{Error, Result};
pub use linalg::{C64, CMatrix, StateVector};

/// 2π, spelled out once.
pub const TAU: f64 = core::f64::consts::TAU;

/// Converts an ordinary frequency in GHz to an angular frequency in rad/s.
pub fn ghz(f: f64) -> f64 {
    TAU * f * 1e9
}

/// Converts an ordinary frequency in MHz to an angular frequency in rad/s.
pub fn mhz(f: f64) -> f64 {
    TAU * f * 1e6
}

/// Converts an ordinary frequency in Hz to an angular frequency in rad/s.
pub fn hz(f: f64) -> f64 {
    TAU * f
}
