#[allow(unused_imports)]
use num_traits::Float;
use alloc::string::String;
use alloc::vec::Vec;


use super::{propagate, Frame, Initial, PropagationResult, Schedule, StepRule};
use crate::linalg::{columns, pauli_operator, Axis, CMatrix, PauliLabel, StateVector, C64};
use crate::model::{pair_hamiltonian, DriveTerm, EncodedSubspace, NoiseCoupling, PairEigenbasis, TwoQubitSystem, UqdpPairSpec};
use crate::{Error, Result};

/// Integration settings shared by the gate builders.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GateOptions {
    pub frame: Frame,
    pub steps: StepRule,
    /// Drive phase of single-qubit pulses.
    pub phase: f64,
}

/// A schedule together with the subspace it acts on and its target.
#[derive(Clone, Debug)]
pub struct GateSetup {
    pub name: &'static str,
    pub h_static: CMatrix,
    pub schedule: Schedule,
    /// Subspace basis, eigenvectors of `h_static`.
    pub basis: Vec<StateVector>,
    pub energies: Vec<f64>,
    /// Target unitary on the subspace, in the interaction frame of `h_static`.
    pub target: CMatrix,
    pub n_qubits: usize,
    pub warnings: Vec<String>,
}

/// Result of running a gate on the subspace basis.
#[derive(Clone, Debug)]
pub struct GateRun {
    /// `M_ij = <b_i| U_I |b_j>`, the projected map in the interaction frame.
    pub map: CMatrix,
    pub norm_drift: f64,
    /// Population leaving the subspace, per input basis state.
    pub leakage: Vec<f64>,
}

impl GateSetup {
    pub fn subspace_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.h_static.rows()
    }

    pub fn duration(&self) -> f64 {
        self.schedule.duration()
    }

    /// Propagates the subspace basis under the schedule and the given noise.
    pub fn run(&self, noise: &NoiseCoupling) -> Result<GateRun> {
        let init = Initial::Columns(columns(&self.basis));
        let r = propagate(&self.h_static, &self.schedule, noise, &init)?;
        let map = self.projected_map(&r, r.duration, &r.columns);
        let leakage = (0..map.cols())
            .map(|j| {
                let inside: f64 = (0..map.rows()).map(|i| map[(i, j)].norm_sqr()).sum();
                (1.0 - inside).max(0.0)
            })
            .collect();
        Ok(GateRun {
            map,
            norm_drift: r.norm_drift,
            leakage,
        })
    }

    pub fn run_noiseless(&self) -> Result<GateRun> {
        self.run(&NoiseCoupling::none(self.n_qubits))
    }

    /// Projected map from columns recorded at time `t`.
    pub fn projected_map(&self, r: &PropagationResult, t: f64, cols: &CMatrix) -> CMatrix {
        let d = self.basis.len();
        let b = columns(&self.basis).dagger();
        let mut m = &b * cols;
        if r.frame == Frame::Lab {
            for i in 0..d {
                let p = C64::from_polar(1.0, self.energies[i] * t);
                for j in 0..m.cols() {
                    m[(i, j)] *= p;
                }
            }
        }
        m
    }
}

/// Phase-insensitive overlap `|Tr(U^dag M)| / d`.
pub fn unitary_fidelity(target: &CMatrix, map: &CMatrix) -> f64 {
    (&target.dagger() * map).trace().norm() / target.rows() as f64
}

/// Average gate fidelity of the single-Kraus map `rho -> M rho M^dag`
/// against `U`: `(Tr(M^dag M) + |Tr(U^dag M)|^2) / (d (d + 1))`.
pub fn average_gate_fidelity(target: &CMatrix, map: &CMatrix) -> f64 {
    let d = target.rows() as f64;
    let tr = (&target.dagger() * map).trace().norm_sqr();
    let mm = (&map.dagger() * map).trace().re;
    (mm + tr) / (d * (d + 1.0))
}

fn sigma(axis: Axis, site: usize, n: usize) -> CMatrix {
    pauli_operator(PauliLabel::new(axis, site), n).expect("site within register")
}

/// `cos(a) I + i sin(a) G` for an involution `G`.
fn rotation(a: f64, g: &CMatrix) -> CMatrix {
    let mut u = CMatrix::identity(g.rows()).scale_real(a.cos());
    u.add_scaled(C64::new(0.0, a.sin()), g);
    u
}

fn schedule_for(opts: &GateOptions) -> Schedule {
    Schedule::new().with_frame(opts.frame).with_steps(opts.steps)
}

/// `U_X(theta) = exp(i theta X / 2)` by driving `2 lambda cos(2 E_m t + phase) sz1`
/// for `theta / (2 lambda)`.
///
/// With a nonzero phase the target becomes
/// `exp(i theta (X cos(phase) - Y sin(phase)) / 2)`.
pub fn gate_ux(spec: &UqdpPairSpec, theta: f64, lambda: f64, opts: &GateOptions) -> Result<GateSetup> {
    let sub = EncodedSubspace::new(spec)?;
    if lambda == 0.0 && theta != 0.0 {
        return Err(Error::InvalidParameter("U_X drive amplitude is zero".into()));
    }
    let mut schedule = schedule_for(opts);
    let mut warnings = Vec::new();
    let half_split = 0.5 * sub.splitting();
    if lambda.abs() > 0.3 * half_split.abs() {
        warnings.push(alloc::format!(
            "rotating-wave regime violated: lambda / E_m = {:.3} > 0.3",
            lambda.abs() / half_split.abs()
        ));
    }
    if theta != 0.0 {
        let amp = lambda.abs() * theta.signum();
        let t = theta.abs() / (2.0 * lambda.abs());
        let drive = DriveTerm::new(&sigma(Axis::Z, 0, 2), amp, sub.splitting(), opts.phase, (0.0, t));
        schedule.push(t, alloc::vec![drive]);
    }
    let (x, y) = (Axis::X.matrix(), Axis::Y.matrix());
    let mut g = x.scale_real(opts.phase.cos());
    g.add_scaled(C64::new(-opts.phase.sin(), 0.0), &y);
    Ok(GateSetup {
        name: "ux",
        h_static: pair_hamiltonian(spec),
        schedule,
        basis: sub.basis(),
        energies: sub.energies().to_vec(),
        target: rotation(0.5 * theta, &g),
        n_qubits: 2,
        warnings,
    })
}

/// `U_Z(theta) = exp(i theta Z / 2)` from a static `dE_m sx1 sx2` held for
/// `theta / (2 dE_m)`.
pub fn gate_uz(spec: &UqdpPairSpec, theta: f64, delta_em: f64, opts: &GateOptions) -> Result<GateSetup> {
    let sub = EncodedSubspace::new(spec)?;
    if delta_em == 0.0 && theta != 0.0 {
        return Err(Error::InvalidParameter("U_Z coupling increment is zero".into()));
    }
    let mut schedule = schedule_for(opts);
    if theta != 0.0 {
        let t = theta.abs() / (2.0 * delta_em.abs());
        let op = &sigma(Axis::X, 0, 2) * &sigma(Axis::X, 1, 2);
        let energy = delta_em.abs() * theta.signum();
        schedule.push(t, alloc::vec![DriveTerm::constant(&op, energy, (0.0, t))]);
    }
    let mut warnings = Vec::new();
    if delta_em.abs() > 0.3 * (0.5 * sub.splitting()).abs() {
        warnings.push("coupling increment is not small against E_m".into());
    }
    Ok(GateSetup {
        name: "uz",
        h_static: pair_hamiltonian(spec),
        schedule,
        basis: sub.basis(),
        energies: sub.energies().to_vec(),
        target: rotation(0.5 * theta, &Axis::Z.matrix()),
        n_qubits: 2,
        warnings,
    })
}

/// `U_C = exp[i pi (X1 X2 + Y1 Y2) / 4]`.
pub fn uc_target() -> CMatrix {
    let (x, y) = (Axis::X.matrix(), Axis::Y.matrix());
    let g = &x.kron(&x) + &y.kron(&y);
    // (XX + YY)/2 squares to the projector onto |01>, |10>.
    let half = g.scale_real(0.5);
    let p = &half * &half;
    let mut u = &CMatrix::identity(4) - &p;
    u.add_scaled(C64::new(0.0, 1.0), &half);
    u
}

/// Two-qubit coupling gate held for `duration` (the nominal
/// `pi / (4 lambda_c)` when `None`).
pub fn gate_uc(system: &TwoQubitSystem, duration: Option<f64>, opts: &GateOptions) -> Result<GateSetup> {
    let t = match duration {
        Some(t) => t,
        None if system.lambda_c != 0.0 => core::f64::consts::PI / (4.0 * system.lambda_c.abs()),
        None => 0.0,
    };
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("gate duration {t} s")));
    }
    let mut schedule = schedule_for(opts);
    if t > 0.0 {
        schedule.push(t, system.drives((0.0, t)));
    }
    let mut warnings = Vec::new();
    let min_split = system.sigma.splitting().abs().min(system.tau.splitting().abs());
    if system.lambda_c.abs() > 0.3 * 0.5 * min_split {
        warnings.push("rotating-wave regime violated: lambda_c is not small against E_m".into());
    }
    Ok(GateSetup {
        name: "uc",
        h_static: system.h_static().clone(),
        schedule,
        basis: system.basis(),
        energies: system.energies(),
        target: uc_target(),
        n_qubits: 4,
        warnings,
    })
}

/// Outcome of the noiseless duration scan of `U_C`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UcCalibration {
    pub nominal: f64,
    pub duration: f64,
    /// `duration / nominal`.
    pub factor: f64,
    /// `|Tr(U_C^dag M)| / 4` at the chosen duration.
    pub fidelity: f64,
}

/// Scans the `U_C` duration over `[0.5, 4]` times nominal in one noiseless
/// propagation (parasitic coupling off) and keeps the best overlap.
pub fn calibrate_uc(system: &TwoQubitSystem, opts: &GateOptions) -> Result<UcCalibration> {
    if system.lambda_c == 0.0 {
        return Err(Error::InvalidParameter("cannot calibrate U_C with lambda_c = 0".into()));
    }
    let mut clean = system.clone();
    clean.e_cc = 0.0;
    let nominal = core::f64::consts::PI / (4.0 * system.lambda_c.abs());
    let mut setup = gate_uc(&clean, Some(4.0 * nominal), opts)?;
    setup.schedule.record_every = 1;
    let init = Initial::Columns(columns(&setup.basis));
    let r = propagate(&setup.h_static, &setup.schedule, &NoiseCoupling::none(4), &init)?;
    let mut best = UcCalibration {
        nominal,
        duration: f64::NAN,
        factor: f64::NAN,
        fidelity: f64::NEG_INFINITY,
    };
    for snap in &r.snapshots {
        if snap.t < 0.5 * nominal * (1.0 - 1e-12) {
            continue;
        }
        let m = setup.projected_map(&r, snap.t, &snap.columns);
        let f = unitary_fidelity(&setup.target, &m);
        if f > best.fidelity {
            best.fidelity = f;
            best.duration = snap.t;
        }
    }
    best.factor = best.duration / nominal;
    Ok(best)
}

/// Preparation of `|3>` from the ground state `|1>`.
#[derive(Clone, Debug)]
pub struct StatePrep {
    pub h_static: CMatrix,
    pub schedule: Schedule,
    pub initial: StateVector,
    pub target: StateVector,
    /// `|<3| sx1 |1>|`.
    pub matrix_element: f64,
    /// Drive frequency `E_3 - E_1`.
    pub omega: f64,
}

impl StatePrep {
    /// Final state in the lab frame.
    pub fn run(&self, noise: &NoiseCoupling) -> Result<StateVector> {
        let r = propagate(&self.h_static, &self.schedule, noise, &Initial::State(self.initial.clone()))?;
        Ok(r.lab_columns().column(0))
    }

    /// Population of the target after the pulse.
    pub fn target_population(&self, noise: &NoiseCoupling) -> Result<f64> {
        Ok(self.run(noise)?.overlap(&self.target))
    }
}

/// Drive `2 lambda_p cos((E_3 - E_1) t) sx1` for
/// `pi / (2 lambda_p |<3|sx1|1>|)`.
pub fn prepare_encoded_state(spec: &UqdpPairSpec, lambda_p: f64, opts: &GateOptions) -> Result<StatePrep> {
    EncodedSubspace::new(spec)?;
    let basis = PairEigenbasis::new(spec);
    let sx1 = sigma(Axis::X, 0, 2);
    let element = basis.states[2].inner(&sx1.apply(&basis.states[0])).norm();
    if element == 0.0 || lambda_p == 0.0 {
        return Err(Error::InvalidParameter("preparation pulse has no coupling".into()));
    }
    let omega = basis.energies[2] - basis.energies[0];
    let t = core::f64::consts::PI / (2.0 * lambda_p.abs() * element);
    let mut schedule = schedule_for(opts);
    schedule.push(t, alloc::vec![DriveTerm::new(&sx1, lambda_p.abs(), omega, 0.0, (0.0, t))]);
    Ok(StatePrep {
        h_static: pair_hamiltonian(spec),
        schedule,
        initial: basis.states[0].clone(),
        target: basis.states[2].clone(),
        matrix_element: element,
        omega,
    })
}

/// A `pi/2` encoded rotation mapping `|3> -> |ud>` and `|4> -> |du>` in the
/// lab frame, followed by a product-basis measurement.
#[derive(Clone, Debug)]
pub struct Readout {
    pub gate: GateSetup,
    /// Product-basis index reporting `|3>` (`|ud>`).
    pub index_for_3: usize,
    /// Product-basis index reporting `|4>` (`|du>`).
    pub index_for_4: usize,
}

impl Readout {
    /// Product-basis populations after the rotation, for a lab-frame input.
    pub fn populations(&self, input: &StateVector, noise: &NoiseCoupling) -> Result<Vec<f64>> {
        let r = propagate(&self.gate.h_static, &self.gate.schedule, noise, &Initial::State(input.clone()))?;
        Ok(r.lab_columns().column(0).populations())
    }
}

pub fn readout_rotation(spec: &UqdpPairSpec, lambda: f64, opts: &GateOptions) -> Result<Readout> {
    let sub = EncodedSubspace::new(spec)?;
    if lambda == 0.0 {
        return Err(Error::InvalidParameter("readout drive amplitude is zero".into()));
    }
    let t = core::f64::consts::FRAC_PI_2 / (2.0 * lambda.abs());
    let phase = -core::f64::consts::FRAC_PI_2 - sub.splitting() * t;
    let gate = gate_ux(spec, core::f64::consts::FRAC_PI_2, lambda.abs(), &GateOptions { phase, ..*opts })?;
    Ok(Readout {
        gate,
        index_for_3: 1,
        index_for_4: 2,
    })
}
