use core::fmt;

use super::{CMatrix, C64, I, ONE, ZERO};
use crate::{Error, Result};

/// Single-qubit Pauli axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::I, Axis::X, Axis::Y, Axis::Z];

    /// The 2x2 matrix, with `sigma_z = diag(+1, -1)`.
    pub fn matrix(self) -> CMatrix {
        let m = C64::new(-1.0, 0.0);
        let data = match self {
            Axis::I => [ONE, ZERO, ZERO, ONE],
            Axis::X => [ZERO, ONE, ONE, ZERO],
            Axis::Y => [ZERO, -I, I, ZERO],
            Axis::Z => [ONE, ZERO, ZERO, m],
        };
        CMatrix::from_row_major(2, 2, data.to_vec())
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::I => "i",
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        f.write_str(s)
    }
}

/// A Pauli matrix acting on one site of a qubit register (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliLabel {
    pub axis: Axis,
    pub site: usize,
}

impl PauliLabel {
    pub fn new(axis: Axis, site: usize) -> Self {
        Self { axis, site }
    }
}

/// `I x ... x sigma_axis x ... x I` on an `n_qubits` register.
pub fn pauli_operator(label: PauliLabel, n_qubits: usize) -> Result<CMatrix> {
    pauli_product(&[label], n_qubits)
}

/// Product of Pauli labels on distinct sites.
pub fn pauli_product(labels: &[PauliLabel], n_qubits: usize) -> Result<CMatrix> {
    let mut axes = [Axis::I; 64];
    if n_qubits > 6 {
        return Err(Error::InvalidParameter(alloc::format!(
            "{n_qubits} qubits exceeds the 64-dimensional limit"
        )));
    }
    for l in labels {
        if l.site >= n_qubits {
            return Err(Error::SiteOutOfRange {
                site: l.site,
                n_qubits,
            });
        }
        if axes[l.site] != Axis::I {
            return Err(Error::InvalidParameter(alloc::format!(
                "site {} appears twice in a pauli product",
                l.site
            )));
        }
        axes[l.site] = l.axis;
    }
    let mut m = CMatrix::identity(1);
    for axis in &axes[..n_qubits] {
        m = m.kron(&axis.matrix());
    }
    Ok(m)
}
