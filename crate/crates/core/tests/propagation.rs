use std::f64::consts::{FRAC_PI_2, PI};

use uqdp_core::dynamics::{
    calibrate_uc, gate_uc, gate_ux, gate_uz, prepare_encoded_state, propagate, readout_rotation, unitary_fidelity,
    Frame, GateOptions, Initial, Schedule, StepRule,
};
use uqdp_core::linalg::{columns, pauli_operator, Axis, PauliLabel};
use uqdp_core::model::{DriveTerm, EncodedSubspace, NoiseCoupling, TwoQubitSystem, UqdpPairSpec};
use uqdp_core::{ghz, CMatrix, Error, StateVector, C64};

fn reference_pair() -> UqdpPairSpec {
    UqdpPairSpec::xx(ghz(5.0), 0.4 * ghz(5.0))
}

fn opts() -> GateOptions {
    GateOptions::default()
}

#[test]
fn constant_field_gives_analytic_phase() {
    let e_z = 3.0;
    let h = Axis::Z.matrix().scale_real(e_z);
    let t = 2.0;
    let mut s = Schedule::new();
    s.push(t, vec![]);
    let r = propagate(&h, &s, &NoiseCoupling::none(1), &Initial::State(StateVector::basis(2, 0))).unwrap();
    let want = C64::from_polar(1.0, -e_z * t);
    let got = r.final_state().amplitudes()[0];
    assert!((got - want).norm_sqr() < 1e-10, "{got} vs {want}");
    assert!(r.accepted());
}

#[test]
fn resonant_rabi_flip() {
    let lambda = 1.5;
    let sx = Axis::X.matrix();
    let mut s = Schedule::new();
    s.push(FRAC_PI_2 / lambda, vec![DriveTerm::constant(&sx, lambda, (0.0, 0.0))]);
    let r = propagate(
        &CMatrix::zeros(2, 2),
        &s,
        &NoiseCoupling::none(1),
        &Initial::State(StateVector::basis(2, 0)),
    )
    .unwrap();
    assert!(r.final_state().overlap(&StateVector::basis(2, 1)) > 1.0 - 1e-8);
}

/// Full propagator of the noiseless `U_X(pi)` schedule with `n` steps.
fn ux_propagator(n: usize) -> CMatrix {
    let g = gate_ux(&reference_pair(), PI, ghz(0.3), &opts()).unwrap();
    let s = g.schedule.clone().with_steps(StepRule::PerSegment(n));
    propagate(&g.h_static, &s, &NoiseCoupling::none(2), &Initial::Identity).unwrap().columns
}

#[test]
fn rk4_is_fourth_order() {
    let u: Vec<CMatrix> = [1000, 2000, 4000].iter().map(|&n| ux_propagator(n)).collect();
    let coarse = (u[0].clone() - &u[1]).max_abs();
    let fine = (u[1].clone() - &u[2]).max_abs();
    let order = (coarse / fine).log2();
    assert!((order - 4.0).abs() < 0.3, "order {order}");
}

#[test]
fn noiseless_propagators_are_unitary() {
    let g = gate_ux(&reference_pair(), PI, ghz(0.3), &opts()).unwrap();
    let r = propagate(&g.h_static, &g.schedule, &NoiseCoupling::none(2), &Initial::Identity).unwrap();
    assert!(r.columns.unitarity_defect() < 1e-8);
    assert!(r.norm_drift < 1e-8);
}

#[test]
fn steps_above_the_limit_are_refused() {
    let g = gate_ux(&reference_pair(), PI, ghz(0.3), &opts()).unwrap();
    let s = g.schedule.clone().with_steps(StepRule::Fraction(1.0 / 20.0));
    let e = propagate(&g.h_static, &s, &NoiseCoupling::none(2), &Initial::Identity).unwrap_err();
    assert!(matches!(e, Error::StepTooLarge { .. }));
    let plan = g.schedule.plan(&g.h_static).unwrap();
    assert!(plan.iter().all(|p| p.dt <= p.limit));
}

#[test]
fn frames_agree_for_a_slow_drive() {
    let spec = reference_pair();
    let lambda = 0.1 * spec.e_mx;
    let lab = gate_ux(&spec, PI, lambda, &opts()).unwrap();
    let int = gate_ux(
        &spec,
        PI,
        lambda,
        &GateOptions {
            frame: Frame::Interaction,
            ..opts()
        },
    )
    .unwrap();
    let a = lab.run_noiseless().unwrap().map;
    let b = int.run_noiseless().unwrap().map;
    assert!(unitary_fidelity(&a, &b) > 1.0 - 1e-6);
}

#[test]
fn identical_inputs_are_bitwise_identical() {
    let g = gate_ux(&reference_pair(), PI, ghz(0.3), &opts()).unwrap();
    assert_eq!(g.run_noiseless().unwrap().map, g.run_noiseless().unwrap().map);
}

#[test]
fn ux_reaches_its_target() {
    let g = gate_ux(&reference_pair(), PI, ghz(0.3), &opts()).unwrap();
    assert!((g.duration() - 0.8333e-9).abs() < 1e-13);
    let run = g.run_noiseless().unwrap();
    assert!(unitary_fidelity(&g.target, &run.map) > 0.999);
    assert!(run.leakage.iter().all(|l| *l < 1e-3), "{:?}", run.leakage);
    assert!(g.warnings.is_empty());
}

#[test]
fn zero_angle_gates_are_identity() {
    let ux = gate_ux(&reference_pair(), 0.0, ghz(0.3), &opts()).unwrap();
    assert!(ux.schedule.is_empty());
    assert_eq!(ux.target, CMatrix::identity(2));
    let uz = gate_uz(&reference_pair(), 0.0, 0.02 * ghz(5.0), &opts()).unwrap();
    assert!(uz.schedule.is_empty());
}

#[test]
fn strong_drive_warns() {
    let g = gate_ux(&reference_pair(), PI, 0.4 * ghz(5.0), &opts()).unwrap();
    assert!(g.warnings.iter().any(|w| w.contains("rotating-wave")));
}

#[test]
fn uz_reaches_its_target() {
    let g = gate_uz(&reference_pair(), FRAC_PI_2, 0.02 * ghz(5.0), &opts()).unwrap();
    let run = g.run_noiseless().unwrap();
    assert!(unitary_fidelity(&g.target, &run.map) > 0.999);
    // the generator is block diagonal, so the map commutes with Z
    let z = Axis::Z.matrix();
    let comm = &(&run.map * &z) - &(&z * &run.map);
    assert!(comm.max_abs() < 1e-6, "{}", comm.max_abs());
}

fn uc_system() -> TwoQubitSystem {
    TwoQubitSystem::new(
        &UqdpPairSpec::xx(ghz(5.0), ghz(5.0)),
        &UqdpPairSpec::xx(ghz(5.0), ghz(2.0)),
        ghz(0.3),
        0.0,
    )
    .unwrap()
}

#[test]
fn calibrated_uc_swaps_encoded_excitations() {
    let sys = uc_system();
    let cal = calibrate_uc(&sys, &opts()).unwrap();
    assert!(cal.fidelity > 0.99, "{cal:?}");
    assert!(cal.factor >= 0.5 && cal.factor <= 4.0);
    let g = gate_uc(&sys, Some(cal.duration), &opts()).unwrap();
    let run = g.run_noiseless().unwrap();
    assert!(unitary_fidelity(&g.target, &run.map) > 0.99);
    assert!(run.leakage.iter().all(|l| *l < 1e-2), "{:?}", run.leakage);
    // basis order |33>, |34>, |43>, |44>: |34> -> |43>
    assert!(run.map[(2, 1)].norm_sqr() > 0.98);
}

#[test]
fn uncoupled_uc_is_local_phases() {
    let sys = TwoQubitSystem::new(
        &UqdpPairSpec::xx(ghz(5.0), ghz(5.0)),
        &UqdpPairSpec::xx(ghz(5.0), ghz(2.0)),
        0.0,
        0.0,
    )
    .unwrap();
    let g = gate_uc(&sys, Some(1e-9), &opts()).unwrap();
    let m = g.run_noiseless().unwrap().map;
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((m[(i, j)].norm() - want).abs() < 1e-6);
        }
    }
}

#[test]
fn preparation_from_the_ground_state() {
    let spec = reference_pair();
    let prep = prepare_encoded_state(&spec, 0.01 * spec.e_z, &opts()).unwrap();
    let theta = (spec.e_mx / (2.0 * spec.e_z)).atan();
    assert!((prep.matrix_element - (0.5 * theta + PI / 4.0).sin().abs()).abs() < 1e-12);
    assert!(prep.omega > 0.0);
    let p = prep.target_population(&NoiseCoupling::none(2)).unwrap();
    assert!(p > 0.995, "{p}");
}

#[test]
fn readout_maps_encoded_states_to_product_states() {
    let spec = reference_pair();
    let sub = EncodedSubspace::new(&spec).unwrap();
    let ro = readout_rotation(&spec, ghz(0.1), &opts()).unwrap();
    let none = NoiseCoupling::none(2);
    let p3 = ro.populations(sub.state3(), &none).unwrap();
    let p4 = ro.populations(sub.state4(), &none).unwrap();
    assert!(p3[ro.index_for_3] > 0.99, "{p3:?}");
    assert!(p4[ro.index_for_4] > 0.99, "{p4:?}");
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let plus = sub.state3().add(sub.state4()).scale(C64::new(r, 0.0));
    let p = ro.populations(&plus, &none).unwrap();
    assert!((p[ro.index_for_3] - 0.5).abs() < 0.01 && (p[ro.index_for_4] - 0.5).abs() < 0.01, "{p:?}");
}

#[test]
fn noise_coupling_enters_the_generator() {
    // a static z offset on one qubit shifts its phase by exactly v t
    use uqdp_core::noise::{ChannelId, NoiseTrajectory};
    let v = 0.25;
    let tr = NoiseTrajectory::from_tones(ChannelId::z(0), [(0.0, v, 0.0)]);
    let noise = NoiseCoupling::new(vec![tr], 1).unwrap();
    let mut s = Schedule::new().with_steps(StepRule::PerSegment(200));
    s.push(1.0, vec![]);
    let init = Initial::Columns(columns(&[StateVector::basis(2, 0)]));
    let r = propagate(&CMatrix::zeros(2, 2), &s, &noise, &init).unwrap();
    let got = r.columns[(0, 0)];
    assert!((got - C64::from_polar(1.0, -v)).norm() < 1e-10);
    let z = pauli_operator(PauliLabel::new(Axis::Z, 0), 1).unwrap();
    assert_eq!(noise.operator_at(0.3), z.scale_real(v));
}
