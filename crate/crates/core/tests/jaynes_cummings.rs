use uqdp_core::linalg::{eigendecompose_hermitian, project, StateVector};
use uqdp_core::model::{jc_doublets, jc_hamiltonian, JaynesCummingsSpec, JcOperators};
use uqdp_core::C64;

const J: f64 = 0.05;

fn spec() -> JaynesCummingsSpec {
    JaynesCummingsSpec::resonant(1.0, J, 6)
}

/// `<m a| op |n b>` over every pair of doublet states.
fn elements(op: &uqdp_core::CMatrix) -> Vec<(usize, usize, usize, usize, C64)> {
    let ds = jc_doublets(&spec()).unwrap();
    let mut out = Vec::new();
    for dm in &ds {
        for dn in &ds {
            for a in 0..2 {
                for b in 0..2 {
                    let v = dm.states[a].inner(&op.apply(&dn.states[b]));
                    out.push((dm.n, a, dn.n, b, v));
                }
            }
        }
    }
    out
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[test]
fn doublets_are_eigenstates() {
    let s = spec();
    let h = jc_hamiltonian(&s).unwrap();
    for d in jc_doublets(&s).unwrap() {
        for (st, e) in d.states.iter().zip(d.energies) {
            let r = h.apply(st).sub(&st.scale(C64::new(e, 0.0)));
            assert!(r.norm() < 1e-12, "doublet {} residual {}", d.n, r.norm());
        }
        assert!((d.splitting() - 2.0 * J * (d.n as f64).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn lowest_doublet_splits_by_two_j() {
    let d = &jc_doublets(&spec()).unwrap()[0];
    assert_eq!(d.n, 1);
    assert!((d.splitting() - 2.0 * J).abs() < 1e-12);
    // and sits at w0 / 2 +- J
    assert!((d.energies[0] - (1.0 + J)).abs() < 1e-12);
    assert!((d.energies[1] - (1.0 - J)).abs() < 1e-12);
}

#[test]
fn spectrum_contains_every_doublet() {
    let s = spec();
    let eig = eigendecompose_hermitian(&jc_hamiltonian(&s).unwrap()).unwrap();
    for d in jc_doublets(&s).unwrap() {
        for e in d.energies {
            assert!(eig.values.iter().any(|v| (v - e).abs() < 1e-12), "missing {e}");
        }
    }
}

#[test]
fn sigma_z_acts_inside_each_doublet() {
    let ops = JcOperators::new(&spec());
    for (m, a, n, b, v) in elements(&ops.sigma_z) {
        let want = if m == n { (-1.0 + sign(a + b)) / 2.0 } else { 0.0 };
        assert!((v - C64::new(want, 0.0)).norm() < 1e-12, "<{m}{a}|sz|{n}{b}> = {v}");
    }
}

#[test]
fn sigma_plus_connects_adjacent_doublets() {
    let ops = JcOperators::new(&spec());
    for (m, a, n, _b, v) in elements(&ops.sigma_plus) {
        let want = if m == n + 1 { sign(a) / 2.0 } else { 0.0 };
        assert!((v - C64::new(want, 0.0)).norm() < 1e-12, "<{m}{a}|s+|{n}> = {v}");
    }
}

#[test]
fn creation_connects_adjacent_doublets() {
    let ops = JcOperators::new(&spec());
    for (m, a, n, b, v) in elements(&ops.a_dag) {
        let nf = n as f64;
        let want = if m == n + 1 {
            ((nf + 1.0).sqrt() + sign(a + b) * nf.sqrt()) / 2.0
        } else {
            0.0
        };
        // the top doublet's image leaves the truncated space
        if n == spec().n_max {
            continue;
        }
        assert!((v - C64::new(want, 0.0)).norm() < 1e-12, "<{m}{a}|a+|{n}{b}> = {v}");
    }
}

#[test]
fn conjugates_mirror() {
    let ops = JcOperators::new(&spec());
    assert_eq!(ops.sigma_minus, ops.sigma_plus.dagger());
    assert_eq!(ops.a, ops.a_dag.dagger());
}

#[test]
fn noise_in_a_doublet_is_off_diagonal() {
    let ops = JcOperators::new(&spec());
    for d in jc_doublets(&spec()).unwrap() {
        let b: Vec<StateVector> = d.basis();
        for op in [&ops.sigma_x, &ops.sigma_z, &(&ops.a + &ops.a_dag)] {
            let p = project(op, &b).unwrap();
            assert!(p[(0, 0)].norm() < 1e-12 && p[(1, 1)].norm() < 1e-12);
        }
    }
}

#[test]
fn small_cutoff_and_detuning_are_rejected() {
    assert!(jc_hamiltonian(&JaynesCummingsSpec::resonant(1.0, J, 3)).is_err());
    let off = JaynesCummingsSpec {
        omega0: 2.5,
        ..spec()
    };
    assert!(jc_doublets(&off).is_err());
    assert!(jc_hamiltonian(&off).is_ok());
}
