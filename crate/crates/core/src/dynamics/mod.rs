//! Fixed-step RK4 propagation of `i d|psi>/dt = H(t) |psi>` with
//! `H(t) = H_static + sum drives + V_n(t)`, and the gate, preparation and
//! readout schedules built on it.

mod gates;

pub use gates::{
    average_gate_fidelity, calibrate_uc, gate_uc, gate_ux, gate_uz, prepare_encoded_state, readout_rotation,
    unitary_fidelity, uc_target, GateOptions, GateRun, GateSetup, Readout, StatePrep, UcCalibration,
};

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use crate::linalg::{eigendecompose_hermitian, CMatrix, Eigen, SparseOp, StateVector, C64, ZERO};
use crate::model::{DriveTerm, NoiseCoupling};
use crate::{Error, Result, TAU};

/// Largest allowed step as a fraction of the fastest period.
pub const MAX_STEP_FRACTION: f64 = 1.0 / 40.0;
/// Default step as a fraction of the fastest period.
pub const DEFAULT_STEP_FRACTION: f64 = 1.0 / 400.0;
/// Norm drift above which a run is rejected.
pub const NORM_DRIFT_ERROR: f64 = 1e-6;
/// Norm drift below which a run counts as accepted.
pub const NORM_DRIFT_ACCEPT: f64 = 1e-8;

/// Reference frame of the integration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Frame {
    #[default]
    Lab,
    /// Interaction picture of `H_static`: `psi_I = exp(i H_static t) psi`.
    Interaction,
}

/// How each segment is cut into RK4 steps.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StepRule {
    /// `dt <= fraction * 2 pi / w_max`.
    Fraction(f64),
    /// Exactly `n` steps per segment.
    PerSegment(usize),
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::Fraction(DEFAULT_STEP_FRACTION)
    }
}

/// A time interval with the drives active in it.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub duration: f64,
    pub drives: Vec<DriveTerm>,
}

/// Ordered segments plus integration settings.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    segments: Vec<Segment>,
    pub steps: StepRule,
    pub frame: Frame,
    /// Keep a snapshot every this many steps (0 keeps none).
    pub record_every: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Self::new()
    }
}

impl Schedule {
    pub fn new() -> Self {
        Self {
            segments: Vec::new(),
            steps: StepRule::default(),
            frame: Frame::Lab,
            record_every: 0,
        }
    }

    pub fn with_steps(mut self, steps: StepRule) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    pub fn with_recording(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    /// Appends a segment; the drives' windows are set to the segment.
    pub fn push(&mut self, duration: f64, drives: Vec<DriveTerm>) -> &mut Self {
        let start = self.duration();
        let window = (start, start + duration);
        self.segments.push(Segment {
            start,
            duration,
            drives: drives.into_iter().map(|d| d.with_window(window)).collect(),
        });
        self
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn duration(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.start + s.duration)
    }

    pub fn is_empty(&self) -> bool {
        self.segments.iter().all(|s| s.duration == 0.0)
    }

    /// Concatenates another schedule after this one, shifting its drives.
    pub fn then(&mut self, other: &Schedule) -> &mut Self {
        for s in &other.segments {
            let shift = self.duration() - s.start;
            let drives = s
                .drives
                .iter()
                .map(|d| DriveTerm {
                    phase: d.phase - d.omega * shift,
                    ..d.clone()
                })
                .collect();
            self.push(s.duration, drives);
        }
        self
    }
}

/// Initial condition of a propagation.
#[derive(Clone, Debug)]
pub enum Initial {
    State(StateVector),
    /// All basis vectors, giving the full propagator.
    Identity,
    /// Arbitrary columns (dim x k).
    Columns(CMatrix),
}

/// Columns at one recorded time.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub t: f64,
    pub columns: CMatrix,
}

#[derive(Clone, Debug)]
pub struct PropagationResult {
    /// Final columns in the schedule's frame, computational basis.
    pub columns: CMatrix,
    pub frame: Frame,
    pub duration: f64,
    /// `max |norm(psi) - 1|` over all steps and columns.
    pub norm_drift: f64,
    pub steps: usize,
    pub snapshots: Vec<Snapshot>,
    static_eigen: Eigen,
}

impl PropagationResult {
    pub fn accepted(&self) -> bool {
        self.norm_drift < NORM_DRIFT_ACCEPT
    }

    /// Eigendecomposition of `H_static` used by the run.
    pub fn static_eigen(&self) -> &Eigen {
        &self.static_eigen
    }

    pub fn final_state(&self) -> StateVector {
        self.columns.column(0)
    }

    /// Final columns in the lab frame.
    pub fn lab_columns(&self) -> CMatrix {
        match self.frame {
            Frame::Lab => self.columns.clone(),
            Frame::Interaction => &self.static_eigen.propagator(self.duration) * &self.columns,
        }
    }

    /// Final columns in the interaction frame of `H_static`.
    pub fn interaction_columns(&self) -> CMatrix {
        self.columns_at(self.duration, &self.columns)
    }

    /// Converts columns recorded at time `t` to the interaction frame.
    pub fn columns_at(&self, t: f64, columns: &CMatrix) -> CMatrix {
        match self.frame {
            Frame::Lab => &self.static_eigen.propagator(-t) * columns,
            Frame::Interaction => columns.clone(),
        }
    }
}

/// Fastest angular rate present in a segment for the given frame.
pub fn max_rate(eigen: &Eigen, drives: &[DriveTerm], frame: Frame) -> f64 {
    let (lo, hi) = (eigen.values[0], *eigen.values.last().unwrap_or(&0.0));
    let static_rate = match frame {
        Frame::Lab => lo.abs().max(hi.abs()),
        Frame::Interaction => hi - lo,
    };
    drives.iter().fold(static_rate, |m, d| m.max(d.rate()))
}

/// Step count and size chosen for one segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepPlan {
    pub steps: usize,
    pub dt: f64,
    /// Largest admissible step for the segment.
    pub limit: f64,
}

fn plan_segment(eigen: &Eigen, seg: &Segment, schedule: &Schedule) -> Result<StepPlan> {
    let rate = max_rate(eigen, &seg.drives, schedule.frame);
    let period = if rate > 0.0 { TAU / rate } else { f64::INFINITY };
    let limit = MAX_STEP_FRACTION * period;
    let n = match schedule.steps {
        StepRule::Fraction(f) => {
            if f > MAX_STEP_FRACTION {
                return Err(Error::StepTooLarge { dt: f * period, limit });
            }
            ((seg.duration / (f * period)).ceil() as usize).max(1)
        }
        StepRule::PerSegment(n) => n.max(1),
    };
    let dt = seg.duration / n as f64;
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt, limit });
    }
    Ok(StepPlan { steps: n, dt, limit })
}

impl Schedule {
    /// The steps [`propagate`] would take for each nonempty segment.
    pub fn plan(&self, h_static: &CMatrix) -> Result<Vec<StepPlan>> {
        let eigen = eigendecompose_hermitian(h_static)?;
        self.segments
            .iter()
            .filter(|s| s.duration > 0.0)
            .map(|s| plan_segment(&eigen, s, self))
            .collect()
    }
}

/// Integrates the Schrodinger equation over a schedule by classical RK4.
pub fn propagate(
    h_static: &CMatrix,
    schedule: &Schedule,
    noise: &NoiseCoupling,
    initial: &Initial,
) -> Result<PropagationResult> {
    let dim = h_static.rows();
    if !h_static.is_square() || noise.dim() != dim {
        return Err(Error::DimensionMismatch(alloc::format!(
            "static Hamiltonian {}x{} with {}-dim noise coupling",
            h_static.rows(),
            h_static.cols(),
            noise.dim()
        )));
    }
    let eigen = eigendecompose_hermitian(h_static)?;
    let mut y = match initial {
        Initial::State(s) => crate::linalg::columns(core::slice::from_ref(s)),
        Initial::Identity => CMatrix::identity(dim),
        Initial::Columns(c) => c.clone(),
    };
    if y.rows() != dim {
        return Err(Error::DimensionMismatch(alloc::format!(
            "initial columns of dim {} for a {dim}-dim Hamiltonian",
            y.rows()
        )));
    }
    for s in schedule.segments() {
        for d in &s.drives {
            if d.operator.dim() != dim {
                return Err(Error::DimensionMismatch(alloc::format!(
                    "drive operator of dim {} for a {dim}-dim Hamiltonian",
                    d.operator.dim()
                )));
            }
        }
    }
    let k = y.cols();
    let norms0: Vec<f64> = (0..k).map(|j| y.column(j).norm()).collect();

    let mut stepper = Stepper::new(h_static, &eigen, noise, schedule.frame);
    if schedule.frame == Frame::Interaction {
        // Work in eigenbasis coordinates: phi = V^dag psi_I.
        y = &eigen.vectors.dagger() * &y;
    }

    let mut drift = 0.0_f64;
    let mut steps = 0usize;
    let mut snapshots = Vec::new();
    let mut scratch = Scratch::new(dim, k);
    for seg in schedule.segments() {
        if seg.duration <= 0.0 {
            continue;
        }
        let StepPlan { steps: n, dt, .. } = plan_segment(&eigen, seg, schedule)?;
        stepper.load_segment(seg, noise, n, dt);
        for step in 0..n {
            stepper.rk4_step(step, dt, &mut y, &mut scratch);
            steps += 1;
            for (j, n0) in norms0.iter().enumerate() {
                let mut s = 0.0;
                for i in 0..dim {
                    s += y[(i, j)].norm_sqr();
                }
                drift = drift.max((s.sqrt() - n0).abs());
            }
            if drift > NORM_DRIFT_ERROR {
                return Err(Error::NormDrift { drift });
            }
            if schedule.record_every > 0 && steps.is_multiple_of(schedule.record_every) {
                let t = seg.start + (step + 1) as f64 * dt;
                snapshots.push(Snapshot {
                    t,
                    columns: stepper.to_output(&y),
                });
            }
        }
    }
    let columns = stepper.to_output(&y);
    Ok(PropagationResult {
        columns,
        frame: schedule.frame,
        duration: schedule.duration(),
        norm_drift: drift,
        steps,
        snapshots,
        static_eigen: eigen,
    })
}

struct Scratch {
    k: CMatrix,
    acc: CMatrix,
    tmp: CMatrix,
    h: CMatrix,
}

impl Scratch {
    fn new(dim: usize, k: usize) -> Self {
        Self {
            k: CMatrix::zeros(dim, k),
            acc: CMatrix::zeros(dim, k),
            tmp: CMatrix::zeros(dim, k),
            h: CMatrix::zeros(dim, dim),
        }
    }
}

/// Operator of a term in the representation used for integration.
enum TermOp {
    Sparse(SparseOp),
    Dense(CMatrix),
}

impl TermOp {
    fn add_into(&self, s: f64, h: &mut CMatrix) {
        match self {
            TermOp::Sparse(op) => op.add_real_scaled_into(s, h),
            TermOp::Dense(m) => {
                for (a, b) in h.as_mut_slice().iter_mut().zip(m.as_slice()) {
                    *a += b * s;
                }
            }
        }
    }
}

struct Stepper<'a> {
    frame: Frame,
    h_static: &'a CMatrix,
    eigen: &'a Eigen,
    segment_start: f64,
    drives: Vec<(DriveTerm, TermOp)>,
    noise_ops: Vec<TermOp>,
    /// Noise values on the half-step grid of the current segment.
    noise_grid: Vec<Vec<f64>>,
}

impl<'a> Stepper<'a> {
    fn new(h_static: &'a CMatrix, eigen: &'a Eigen, noise: &NoiseCoupling, frame: Frame) -> Self {
        let noise_ops = noise.terms().iter().map(|(_, op)| Self::term_op(frame, eigen, op)).collect();
        Self {
            frame,
            h_static,
            eigen,
            segment_start: 0.0,
            drives: Vec::new(),
            noise_ops,
            noise_grid: Vec::new(),
        }
    }

    fn term_op(frame: Frame, eigen: &Eigen, op: &SparseOp) -> TermOp {
        match frame {
            Frame::Lab => TermOp::Sparse(op.clone()),
            Frame::Interaction => {
                let n = op.dim();
                let mut dense = CMatrix::zeros(n, n);
                op.add_real_scaled_into(1.0, &mut dense);
                let v = &eigen.vectors;
                TermOp::Dense(&(&v.dagger() * &dense) * v)
            }
        }
    }

    fn load_segment(&mut self, seg: &Segment, noise: &NoiseCoupling, n: usize, dt: f64) {
        self.segment_start = seg.start;
        self.drives = seg
            .drives
            .iter()
            .map(|d| (d.clone(), Self::term_op(self.frame, self.eigen, &d.operator)))
            .collect();
        self.noise_grid = noise
            .terms()
            .iter()
            .map(|(tr, _)| tr.sample_uniform(seg.start, 0.5 * dt, 2 * n + 1))
            .collect();
    }

    /// Builds `H` at half-step index `half` of the current segment.
    fn hamiltonian(&self, half: usize, dt: f64, h: &mut CMatrix) {
        let t = self.segment_start + 0.5 * dt * half as f64;
        match self.frame {
            Frame::Lab => h.as_mut_slice().copy_from_slice(self.h_static.as_slice()),
            Frame::Interaction => h.as_mut_slice().iter_mut().for_each(|x| *x = ZERO),
        }
        for (d, op) in &self.drives {
            let c = 2.0 * d.amplitude * (d.omega * t + d.phase).cos();
            op.add_into(c, h);
        }
        for (vals, op) in self.noise_grid.iter().zip(&self.noise_ops) {
            op.add_into(vals[half], h);
        }
        if self.frame == Frame::Interaction {
            let phases: Vec<C64> = self.eigen.values.iter().map(|&e| C64::from_polar(1.0, e * t)).collect();
            let n = phases.len();
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] *= phases[i] * phases[j].conj();
                }
            }
        }
    }

    fn rk4_step(&self, step: usize, dt: f64, y: &mut CMatrix, s: &mut Scratch) {
        let minus_i = C64::new(0.0, -1.0);
        // k1 at t
        self.hamiltonian(2 * step, dt, &mut s.h);
        s.h.mul_into(y, &mut s.k);
        combine(&mut s.acc, y, &s.k, minus_i * (dt / 6.0));
        combine(&mut s.tmp, y, &s.k, minus_i * (dt / 2.0));
        // k2, k3 at t + dt/2
        self.hamiltonian(2 * step + 1, dt, &mut s.h);
        s.h.mul_into(&s.tmp, &mut s.k);
        accumulate(&mut s.acc, &s.k, minus_i * (dt / 3.0));
        combine(&mut s.tmp, y, &s.k, minus_i * (dt / 2.0));
        s.h.mul_into(&s.tmp, &mut s.k);
        accumulate(&mut s.acc, &s.k, minus_i * (dt / 3.0));
        combine(&mut s.tmp, y, &s.k, minus_i * dt);
        // k4 at t + dt
        self.hamiltonian(2 * step + 2, dt, &mut s.h);
        s.h.mul_into(&s.tmp, &mut s.k);
        accumulate(&mut s.acc, &s.k, minus_i * (dt / 6.0));
        y.as_mut_slice().copy_from_slice(s.acc.as_slice());
    }

    fn to_output(&self, y: &CMatrix) -> CMatrix {
        match self.frame {
            Frame::Lab => y.clone(),
            Frame::Interaction => &self.eigen.vectors * y,
        }
    }
}

/// `out = y + c k`.
fn combine(out: &mut CMatrix, y: &CMatrix, k: &CMatrix, c: C64) {
    for ((o, a), b) in out.as_mut_slice().iter_mut().zip(y.as_slice()).zip(k.as_slice()) {
        *o = a + b * c;
    }
}

/// `out += c k`.
fn accumulate(out: &mut CMatrix, k: &CMatrix, c: C64) {
    for (o, b) in out.as_mut_slice().iter_mut().zip(k.as_slice()) {
        *o += b * c;
    }
}
