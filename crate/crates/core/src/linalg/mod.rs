//! Dense complex linear algebra for Hilbert spaces of dimension up to ~64.
//!
//! Basis convention: `sigma_z |up> = +|up>`, with `|up>` stored at index 0.
//! Multi-qubit product states are ordered with site 0 as the most
//! significant bit, so two qubits enumerate as `|uu>, |ud>, |du>, |dd>`.

mod eigen;
mod matrix;
mod pauli;
mod state;

pub use eigen::{eigendecompose_hermitian, Eigen};
pub use matrix::{CMatrix, SparseOp};
pub use pauli::{pauli_operator, pauli_product, Axis, PauliLabel};
pub use state::StateVector;

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Complex double.
pub type C64 = num_complex::Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Matrix elements `<b_i| op |b_j>` of `op` in the given orthonormal basis.
pub fn project(op: &CMatrix, basis: &[StateVector]) -> Result<CMatrix> {
    if !op.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, expected square",
            op.rows(),
            op.cols()
        )));
    }
    if let Some(b) = basis.iter().find(|b| b.dim() != op.rows()) {
        return Err(Error::DimensionMismatch(format!(
            "basis vector of dim {} against {}-dim operator",
            b.dim(),
            op.rows()
        )));
    }
    let images: Vec<StateVector> = basis.iter().map(|b| op.apply(b)).collect();
    let k = basis.len();
    Ok(CMatrix::from_fn(k, k, |i, j| basis[i].inner(&images[j])))
}

/// Stacks states as the columns of a `dim x k` matrix.
pub fn columns(states: &[StateVector]) -> CMatrix {
    let dim = states.first().map_or(0, StateVector::dim);
    CMatrix::from_fn(dim, states.len(), |i, j| states[j].amplitudes()[i])
}

/// Pairwise (cascade) summation over `len` terms produced by `term`.
///
/// The split points depend only on `len`, so the rounding is independent of
/// how the terms were computed or scheduled.
pub fn pairwise_sum<T, F, A>(len: usize, term: &F, add: &A) -> Option<T>
where
    F: Fn(usize) -> T,
    A: Fn(T, T) -> T,
{
    fn rec<T, F, A>(lo: usize, hi: usize, term: &F, add: &A) -> T
    where
        F: Fn(usize) -> T,
        A: Fn(T, T) -> T,
    {
        if hi - lo == 1 {
            return term(lo);
        }
        let mid = lo + (hi - lo) / 2;
        let left = rec(lo, mid, term, add);
        let right = rec(mid, hi, term, add);
        add(left, right)
    }
    if len == 0 {
        None
    } else {
        Some(rec(0, len, term, add))
    }
}

/// Pairwise sum of a slice of reals.
pub fn pairwise_sum_f64(values: &[f64]) -> f64 {
    pairwise_sum(values.len(), &|i| values[i], &|a, b| a + b).unwrap_or(0.0)
}
