use proptest::prelude::*;
use uqdp_core::linalg::{eigendecompose_hermitian, pauli_operator, pauli_product, Axis, PauliLabel};
use uqdp_core::{CMatrix, C64};

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let m = CMatrix::from_fn(n, n, |i, j| C64::new(v[i * n + j].0, v[i * n + j].1));
        let mut h = m.clone() + &m.dagger();
        h = h.scale_real(0.5);
        h
    })
}

fn sized_hermitian() -> impl Strategy<Value = CMatrix> {
    (1usize..=16).prop_flat_map(hermitian)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigendecomposition_reconstructs(h in sized_hermitian()) {
        let e = eigendecompose_hermitian(&h).unwrap();
        let scale = 1.0 + h.max_abs();
        prop_assert!((e.reconstruct() - &h).max_abs() < 1e-12 * scale * h.rows() as f64);
        prop_assert!(e.vectors.unitarity_defect() < 1e-12 * h.rows() as f64);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn degenerate_spectra_stay_orthonormal(n in 2usize..8, k in 1usize..4, seed in 0u64..1000) {
        // a projector-like matrix with an exactly repeated eigenvalue
        let k = k.min(n);
        let d: Vec<f64> = (0..n).map(|i| if i < k { 1.0 } else { (seed % 7) as f64 * 0.1 - 0.3 }).collect();
        let h = CMatrix::diagonal(&d);
        let e = eigendecompose_hermitian(&h).unwrap();
        prop_assert!(e.vectors.unitarity_defect() < 1e-12);
        prop_assert!((e.reconstruct() - &h).max_abs() < 1e-12);
    }

    #[test]
    fn propagator_is_unitary(h in hermitian(4), t in -10.0f64..10.0) {
        let e = eigendecompose_hermitian(&h).unwrap();
        let u = e.propagator(t);
        prop_assert!(u.unitarity_defect() < 1e-12);
        let back = &e.propagator(-t) * &u;
        prop_assert!((back - &CMatrix::identity(4)).max_abs() < 1e-12);
    }

    #[test]
    fn pauli_strings_square_to_identity(
        n in 1usize..5,
        axes in prop::collection::vec(0usize..4, 4),
    ) {
        let all = [Axis::I, Axis::X, Axis::Y, Axis::Z];
        let labels: Vec<PauliLabel> = (0..n).map(|s| PauliLabel::new(all[axes[s]], s)).collect();
        let p = pauli_product(&labels, n).unwrap();
        prop_assert!(p.is_hermitian(0.0));
        let sq = &p * &p;
        prop_assert!((sq - &CMatrix::identity(1 << n)).max_abs() == 0.0);
    }
}

#[test]
fn site_zero_is_most_significant() {
    // sz on site 0 of two qubits: diag(1, 1, -1, -1)
    let z0 = pauli_operator(PauliLabel::new(Axis::Z, 0), 2).unwrap();
    assert_eq!(z0, CMatrix::diagonal(&[1.0, 1.0, -1.0, -1.0]));
    let z1 = pauli_operator(PauliLabel::new(Axis::Z, 1), 2).unwrap();
    assert_eq!(z1, CMatrix::diagonal(&[1.0, -1.0, 1.0, -1.0]));
    assert!(pauli_operator(PauliLabel::new(Axis::X, 2), 2).is_err());
}

#[test]
fn pauli_commutation() {
    let x = Axis::X.matrix();
    let y = Axis::Y.matrix();
    let z = Axis::Z.matrix();
    let two_iz = z.scale(C64::new(0.0, 2.0));
    assert!((x.commutator(&y) - &two_iz).max_abs() < 1e-15);
}

#[test]
fn non_hermitian_input_is_rejected() {
    let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    assert!(eigendecompose_hermitian(&m).is_err());
}
