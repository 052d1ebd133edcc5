//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use super::{CMatrix, StateVector, C64, ZERO};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;
const HERMITIAN_TOL: f64 = 1e-12;
const DEGENERACY_TOL: f64 = 1e-9;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> StateVector {
        self.vectors.column(k)
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let v = &self.vectors;
        let fl: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum()
        })
    }

    /// `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.map(|l| C64::new(0.0, -l * t).exp())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| C64::new(l, 0.0))
    }
}

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvectors inside a degenerate cluster (gap below `1e-9 * |H|`) are
/// re-orthonormalized; only the cluster's span is meaningful there.
pub fn eigendecompose_hermitian(h: &CMatrix) -> Result<Eigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(alloc::format!(
            "eigendecomposition of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let scale = h.max_abs();
    let asym = h.hermitian_asymmetry();
    if asym > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) && asym > 0.0 {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let n = h.rows();
    // Symmetrize so the rotations act on an exactly Hermitian array.
    let mut a = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(h[(i, i)].re, 0.0)
        } else {
            (h[(i, j)] + h[(j, i)].conj()) * 0.5
        }
    });
    let mut v = CMatrix::identity(n);

    let frob = a.frobenius_norm();
    let target = (f64::EPSILON * frob).powi(2) * 0.25;
    let mut converged = n < 2 || frob == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_sq(&a) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    reorthonormalize_clusters(&values, &mut vectors, DEGENERACY_TOL * scale);
    Ok(Eigen { values, vectors })
}

fn off_diagonal_sq(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// One Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip entries already below the diagonal's resolution.
    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag; // e^{i phi}
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = D R with D = diag(1, e^{-i phi}), R = [[c, s], [-s, c]].
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase.conj() * (-s);
    let g_qq = phase.conj() * c;

    let n = a.rows();
    // A <- A G (columns p, q)
    for r in 0..n {
        let ap = a[(r, p)];
        let aq = a[(r, q)];
        a[(r, p)] = ap * g_pp + aq * g_qp;
        a[(r, q)] = ap * g_pq + aq * g_qq;
    }
    // A <- G^dagger A (rows p, q)
    for col in 0..n {
        let ap = a[(p, col)];
        let aq = a[(q, col)];
        a[(p, col)] = g_pp.conj() * ap + g_qp.conj() * aq;
        a[(q, col)] = g_pq.conj() * ap + g_qq.conj() * aq;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for r in 0..n {
        let vp = v[(r, p)];
        let vq = v[(r, q)];
        v[(r, p)] = vp * g_pp + vq * g_qp;
        v[(r, q)] = vp * g_pq + vq * g_qq;
    }
}

fn reorthonormalize_clusters(values: &[f64], vectors: &mut CMatrix, gap: f64) {
    let n = values.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= gap {
            end += 1;
        }
        if end - start > 1 {
            for k in start..end {
                let mut col = vectors.column(k);
                for prev in start..k {
                    let b = vectors.column(prev);
                    let c = b.inner(&col);
                    col = col.sub(&b.scale(c));
                }
                vectors.set_column(k, &col.normalized());
            }
        }
        start = end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_operator, Axis, PauliLabel};

    #[test]
    fn diagonal_input_sorts_ascending() {
        let e = eigendecompose_hermitian(&CMatrix::diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, [1.0, 2.0, 3.0]);
    }

    #[test]
    fn sigma_x_spectrum_and_vectors() {
        let x = pauli_operator(PauliLabel::new(Axis::X, 0), 1).unwrap();
        let e = eigendecompose_hermitian(&x).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let minus = StateVector::from_real(&[r, -r]);
        let plus = StateVector::from_real(&[r, r]);
        assert!((e.vector(0).inner(&minus).norm() - 1.0).abs() < 1e-14);
        assert!((e.vector(1).inner(&plus).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            eigendecompose_hermitian(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn degenerate_cluster_stays_orthonormal() {
        let h = CMatrix::diagonal(&[1.0, 1.0, 1.0, -2.0]);
        let e = eigendecompose_hermitian(&h).unwrap();
        assert!(e.vectors.unitarity_defect() < 1e-14);
        assert!((&e.reconstruct() - &h).max_abs() < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let e = eigendecompose_hermitian(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.values, [0.0, 0.0, 0.0]);
        assert_eq!(e.vectors, CMatrix::identity(3));
    }
}
