#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use super::{EnsembleConfig, BLOCK};
use crate::linalg::{eigendecompose_hermitian, pairwise_sum, Axis, CMatrix, PauliLabel, StateVector, C64};
use crate::model::{
    effective_coefficient, jc_doublets, jc_hamiltonian, pair_hamiltonian, EncodedSubspace, JaynesCummingsSpec,
    JcOperators, UqdpPairSpec,
};
use crate::noise::NoiseTrajectory;
use crate::parallel::Executor;
use crate::{Error, Result};

/// The two-level system whose coherence is tracked.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DephasingTarget {
    /// `H = E_z sz` with noise on qubit 0.
    Bare { e_z: f64 },
    /// The `{|3>, |4>}` qubit of a coupled pair.
    Encoded(UqdpPairSpec),
    /// Doublet `n` of a resonant qubit-resonator system, noise on the qubit.
    JcDoublet { spec: JaynesCummingsSpec, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DephasingMethod {
    /// Splitting deviation from the perturbative expressions.
    #[default]
    Effective,
    /// Exact piecewise propagation of the full system.
    Full,
}

/// Which perturbative contributions enter the effective splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EffectiveTerms {
    /// Terms linear in the noise (longitudinal couplings, spread residuals).
    pub first_order: bool,
    /// Terms quadratic in the noise.
    pub second_order: bool,
}

impl Default for EffectiveTerms {
    fn default() -> Self {
        Self {
            first_order: true,
            second_order: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DephasingOptions {
    /// Longest time window the search may extend to (s).
    pub max_horizon: f64,
    /// Fixed window; skips the automatic search when set.
    pub horizon: Option<f64>,
    /// Grid step target as a fraction of `1 / w_uv`.
    pub resolution: f64,
    pub min_points: usize,
    pub max_points: usize,
    pub terms: EffectiveTerms,
}

impl Default for DephasingOptions {
    fn default() -> Self {
        Self {
            max_horizon: 1.0,
            horizon: None,
            resolution: 0.25,
            min_points: 400,
            max_points: 20_000,
            terms: EffectiveTerms::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DephasingResult {
    /// First time `|c| <= 1/e`, or the horizon when `lower_bound` is set.
    pub t_phi: f64,
    /// Standard error of `t_phi`, from the coherence error and the local
    /// slope at the crossing (NaN for a lower bound).
    pub t_phi_se: f64,
    pub lower_bound: bool,
    pub times: Vec<f64>,
    /// `|c(t)|` of the ensemble-averaged coherence.
    pub coherence: Vec<f64>,
    /// Standard error of `|c(t)|`.
    pub coherence_se: Vec<f64>,
    pub horizon: f64,
    /// `sqrt 2 / std(dE(0))`, the Gaussian quasi-static time.
    pub quasi_static_estimate: f64,
    pub n_trajectories: usize,
}

/// Runs the estimator. See [`DephasingMethod`] for the two routes.
pub fn dephasing_time<E: Executor>(
    target: &DephasingTarget,
    ensemble: &EnsembleConfig,
    method: DephasingMethod,
    opts: &DephasingOptions,
    exec: &E,
) -> Result<DephasingResult> {
    ensemble.validate()?;
    let problem = Problem::new(target, ensemble, method, opts.terms)?;
    let n = ensemble.n_trajectories;

    let de0: Vec<f64> = exec
        .map_indexed(n, |k| -> Result<f64> {
            let tr = ensemble.sample(k)?;
            let v: Vec<f64> = tr.iter().map(|t| t.value(0.0)).collect();
            problem.splitting_deviation(&v)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let (_, se0) = super::mean_and_se(&de0);
    let sigma = se0 * (n as f64).sqrt();
    let t_qs = if sigma > 0.0 { 2f64.sqrt() / sigma } else { f64::INFINITY };

    let mut horizon = match opts.horizon {
        Some(h) => h,
        None => (4.0 * t_qs).min(opts.max_horizon),
    };
    let w_uv = ensemble.spectrum.omega_uv;
    loop {
        let points = ((horizon * w_uv / opts.resolution).ceil() as usize + 1).clamp(opts.min_points, opts.max_points);
        let h = horizon / (points - 1) as f64;
        let sum = coherence_sum(&problem, ensemble, points, h, exec)?;
        let times: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();
        let coherence: Vec<f64> = sum.iter().map(|z| z.norm() / n as f64).collect();
        let coherence_se: Vec<f64> = coherence
            .iter()
            .map(|c| ((1.0 - c * c).max(0.0) / n as f64).sqrt())
            .collect();
        let crossing = first_crossing(&times, &coherence, (-1.0f64).exp());
        let done = crossing.is_some() || opts.horizon.is_some() || horizon >= opts.max_horizon;
        if done {
            let level = (-1.0f64).exp();
            let t_phi_se = match coherence.iter().position(|&c| c <= level) {
                Some(i) if i > 0 && crossing.is_some() => {
                    let slope = (coherence[i - 1] - coherence[i]) / h;
                    if slope > 0.0 {
                        coherence_se[i] / slope
                    } else {
                        f64::NAN
                    }
                }
                _ => f64::NAN,
            };
            return Ok(DephasingResult {
                t_phi: crossing.unwrap_or(horizon),
                t_phi_se,
                lower_bound: crossing.is_none(),
                times,
                coherence,
                coherence_se,
                horizon,
                quasi_static_estimate: t_qs,
                n_trajectories: n,
            });
        }
        horizon = (4.0 * horizon).min(opts.max_horizon);
    }
}

/// Gaussian dephasing exponent `1 / T_phi^2` produced by the first-order
/// spread residuals alone.
pub fn spread_dephasing_rate<E: Executor>(
    spec: &UqdpPairSpec,
    ensemble: &EnsembleConfig,
    opts: &DephasingOptions,
    exec: &E,
) -> Result<(f64, DephasingResult)> {
    let opts = DephasingOptions {
        terms: EffectiveTerms {
            first_order: true,
            second_order: false,
        },
        ..*opts
    };
    let r = dephasing_time(&DephasingTarget::Encoded(*spec), ensemble, DephasingMethod::Effective, &opts, exec)?;
    Ok((1.0 / (r.t_phi * r.t_phi), r))
}

/// Linear interpolation of the first downward crossing of `level`.
fn first_crossing(t: &[f64], c: &[f64], level: f64) -> Option<f64> {
    let i = c.iter().position(|&x| x <= level)?;
    if i == 0 {
        return Some(t[0]);
    }
    let (c0, c1) = (c[i - 1], c[i]);
    let f = if c0 > c1 { (c0 - level) / (c0 - c1) } else { 0.0 };
    Some(t[i - 1] + f * (t[i] - t[i - 1]))
}

fn coherence_sum<E: Executor>(
    problem: &Problem,
    ensemble: &EnsembleConfig,
    points: usize,
    h: f64,
    exec: &E,
) -> Result<Vec<C64>> {
    let n = ensemble.n_trajectories;
    let add = |a: Vec<C64>, b: Vec<C64>| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<C64>>();
    let mut total = alloc::vec![C64::new(0.0, 0.0); points];
    let mut start = 0;
    while start < n {
        let len = BLOCK.min(n - start);
        let curves: Vec<Vec<C64>> = exec
            .map_indexed(len, |i| -> Result<Vec<C64>> {
                let tr = ensemble.sample(start + i)?;
                problem.curve(&tr, points, h)
            })
            .into_iter()
            .collect::<Result<_>>()?;
        let block = pairwise_sum(curves.len(), &|i| curves[i].clone(), &add).expect("nonempty block");
        total = add(total, block);
        start += len;
    }
    Ok(total)
}

/// Index of each channel's value in the instantaneous noise vector.
#[derive(Clone, Copy, Debug, Default)]
struct Slots {
    x: [Option<usize>; 2],
    y: [Option<usize>; 2],
    z: [Option<usize>; 2],
}

impl Slots {
    fn get(v: &[f64], s: Option<usize>) -> f64 {
        s.map_or(0.0, |i| v[i])
    }

    /// Transverse power `vx^2 + vy^2` on qubit `q`.
    fn transverse_sq(&self, v: &[f64], q: usize) -> f64 {
        let (a, b) = (Self::get(v, self.x[q]), Self::get(v, self.y[q]));
        a * a + b * b
    }

    fn z(&self, v: &[f64], q: usize) -> f64 {
        Self::get(v, self.z[q])
    }
}

struct FullSystem {
    h_static: CMatrix,
    ops: Vec<CMatrix>,
    a: StateVector,
    b: StateVector,
    gap: f64,
}

enum Kind {
    Bare { e_z: f64 },
    Encoded { e_z: f64, e_m: f64, residual: [f64; 2] },
    Full(FullSystem),
}

struct Problem {
    kind: Kind,
    slots: Slots,
    terms: EffectiveTerms,
}

impl Problem {
    fn new(target: &DephasingTarget, ens: &EnsembleConfig, method: DephasingMethod, terms: EffectiveTerms) -> Result<Self> {
        let n_qubits = match target {
            DephasingTarget::Bare { .. } | DephasingTarget::JcDoublet { .. } => 1,
            DephasingTarget::Encoded(_) => 2,
        };
        let mut slots = Slots::default();
        for (i, c) in ens.channels.iter().enumerate() {
            if c.qubit >= n_qubits {
                return Err(Error::SiteOutOfRange {
                    site: c.qubit,
                    n_qubits,
                });
            }
            match c.axis {
                Axis::X => slots.x[c.qubit] = Some(i),
                Axis::Y => slots.y[c.qubit] = Some(i),
                Axis::Z => slots.z[c.qubit] = Some(i),
                Axis::I => return Err(Error::InvalidParameter("identity noise channel".into())),
            }
        }
        let kind = match method {
            DephasingMethod::Effective => match target {
                DephasingTarget::Bare { e_z } => Kind::Bare { e_z: *e_z },
                DephasingTarget::Encoded(spec) => {
                    if spec.e_my != 0.0 || spec.e_mz != 0.0 {
                        return Err(Error::Unsupported(
                            "effective dephasing needs pure sx sx coupling; use the full method",
                        ));
                    }
                    if spec.e_mx == 0.0 {
                        return Err(Error::SingularCoupling("effective dephasing at E_m = 0"));
                    }
                    let sub = EncodedSubspace::new(spec)?;
                    Kind::Encoded {
                        e_z: spec.e_z,
                        e_m: spec.e_mx,
                        residual: sub.diagonal_residuals(),
                    }
                }
                DephasingTarget::JcDoublet { .. } => {
                    return Err(Error::Unsupported("effective dephasing of a resonator doublet"))
                }
            },
            DephasingMethod::Full => Kind::Full(full_system(target, ens)?),
        };
        Ok(Self { kind, slots, terms })
    }

    /// Instantaneous change of the qubit splitting for noise values `v`.
    fn splitting_deviation(&self, v: &[f64]) -> Result<f64> {
        let s = &self.slots;
        let t = self.terms;
        Ok(match &self.kind {
            Kind::Bare { e_z } => {
                let mut d = 0.0;
                if t.first_order {
                    d += 2.0 * s.z(v, 0);
                }
                if t.second_order {
                    d += s.transverse_sq(v, 0) / e_z;
                }
                d
            }
            Kind::Encoded { e_z, e_m, residual } => {
                let mut d = 0.0;
                if t.first_order {
                    d -= 2.0 * (residual[0] * s.z(v, 0) + residual[1] * s.z(v, 1));
                }
                if t.second_order {
                    let vx = [s.transverse_sq(v, 0).sqrt(), s.transverse_sq(v, 1).sqrt()];
                    let vz = [s.z(v, 0), s.z(v, 1)];
                    d += -2.0 * (effective_coefficient(*e_z, *e_m, vx, vz) + e_m);
                }
                d
            }
            Kind::Full(f) => {
                let mut h = f.h_static.clone();
                for (op, x) in f.ops.iter().zip(v) {
                    h.add_scaled(C64::new(*x, 0.0), op);
                }
                let e = eigendecompose_hermitian(&h)?;
                let pick = |s: &StateVector| {
                    (0..e.dim())
                        .max_by(|&i, &j| e.vector(i).overlap(s).total_cmp(&e.vector(j).overlap(s)))
                        .expect("nonempty spectrum")
                };
                let (ia, ib) = (pick(&f.a), pick(&f.b));
                (e.values[ib] - e.values[ia]) - f.gap
            }
        })
    }

    /// Per-trajectory coherence `exp(-i phi(t))` on the grid `i h`.
    fn curve(&self, tr: &[NoiseTrajectory], points: usize, h: f64) -> Result<Vec<C64>> {
        match &self.kind {
            Kind::Full(f) => full_curve(f, tr, points, h),
            _ => {
                let grid: Vec<Vec<f64>> = tr.iter().map(|t| t.sample_uniform(0.0, h, points)).collect();
                let mut v = alloc::vec![0.0; tr.len()];
                let mut out = Vec::with_capacity(points);
                let mut phase = 0.0;
                let mut prev = 0.0;
                for i in 0..points {
                    for (slot, g) in v.iter_mut().zip(&grid) {
                        *slot = g[i];
                    }
                    let de = self.splitting_deviation(&v)?;
                    if i > 0 {
                        phase += 0.5 * h * (prev + de);
                    }
                    prev = de;
                    out.push(C64::from_polar(1.0, -phase));
                }
                Ok(out)
            }
        }
    }
}

fn full_system(target: &DephasingTarget, ens: &EnsembleConfig) -> Result<FullSystem> {
    let pauli = |axis: Axis, site: usize, n: usize| crate::linalg::pauli_operator(PauliLabel::new(axis, site), n);
    match target {
        DephasingTarget::Bare { e_z } => {
            let h = pauli(Axis::Z, 0, 1)?.scale_real(*e_z);
            let ops = ens.channels.iter().map(|c| pauli(c.axis, c.qubit, 1)).collect::<Result<_>>()?;
            Ok(FullSystem {
                h_static: h,
                ops,
                a: StateVector::basis(2, 0),
                b: StateVector::basis(2, 1),
                gap: -2.0 * e_z,
            })
        }
        DephasingTarget::Encoded(spec) => {
            let sub = EncodedSubspace::new(spec)?;
            let ops = ens.channels.iter().map(|c| pauli(c.axis, c.qubit, 2)).collect::<Result<_>>()?;
            Ok(FullSystem {
                h_static: pair_hamiltonian(spec),
                ops,
                a: sub.state3().clone(),
                b: sub.state4().clone(),
                gap: sub.splitting(),
            })
        }
        DephasingTarget::JcDoublet { spec, n } => {
            let doublets = jc_doublets(spec)?;
            let d = doublets
                .iter()
                .find(|d| d.n == *n)
                .ok_or_else(|| Error::InvalidParameter(alloc::format!("no doublet n = {n}")))?;
            let jc = JcOperators::new(spec);
            let i = C64::new(0.0, 1.0);
            let ops = ens
                .channels
                .iter()
                .map(|c| match c.axis {
                    Axis::X => Ok(jc.sigma_x.clone()),
                    Axis::Y => {
                        let mut y = jc.sigma_plus.scale(-i);
                        y.add_scaled(i, &jc.sigma_minus);
                        Ok(y)
                    }
                    Axis::Z => Ok(jc.sigma_z.clone()),
                    Axis::I => Err(Error::InvalidParameter("identity noise channel".into())),
                })
                .collect::<Result<_>>()?;
            Ok(FullSystem {
                h_static: jc_hamiltonian(spec)?,
                ops,
                a: d.states[0].clone(),
                b: d.states[1].clone(),
                gap: d.energies[1] - d.energies[0],
            })
        }
    }
}

/// Piecewise-exact propagation: `H` frozen at each step midpoint. Works in
/// the eigenbasis of the static part, where each frozen `H` is nearly
/// diagonal and the eigensolver converges in a couple of sweeps.
fn full_curve(f: &FullSystem, tr: &[NoiseTrajectory], points: usize, h: f64) -> Result<Vec<C64>> {
    let e0 = eigendecompose_hermitian(&f.h_static)?;
    let v0 = &e0.vectors;
    let v0d = v0.dagger();
    let d0 = CMatrix::diagonal(&e0.values);
    let ops: Vec<CMatrix> = f.ops.iter().map(|op| &(&v0d * op) * v0).collect();
    let a = v0d.apply(&f.a);
    let b = v0d.apply(&f.b);
    let mid: Vec<Vec<f64>> = tr.iter().map(|t| t.sample_uniform(0.5 * h, h, points - 1)).collect();
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let mut psi = a.add(&b).scale(C64::new(r, 0.0));
    let mut out = Vec::with_capacity(points);
    out.push(C64::new(1.0, 0.0));
    for i in 0..points - 1 {
        let mut hm = d0.clone();
        for (op, g) in ops.iter().zip(&mid) {
            hm.add_scaled(C64::new(g[i], 0.0), op);
        }
        let e = eigendecompose_hermitian(&hm)?;
        let v = &e.vectors;
        let coeffs = v.dagger().apply(&psi);
        let rotated: Vec<C64> = coeffs
            .amplitudes()
            .iter()
            .zip(&e.values)
            .map(|(c, l)| c * C64::from_polar(1.0, -l * h))
            .collect();
        psi = v.apply(&StateVector::from_amplitudes(rotated));
        let t = (i + 1) as f64 * h;
        let c = a.inner(&psi) * b.inner(&psi).conj() * 2.0 * C64::from_polar(1.0, -f.gap * t);
        out.push(c);
    }
    Ok(out)
}
