//! One grid point of each experiment kind.

use std::f64::consts::PI;

use uqdp_core::analysis::{
    dephasing_time, fidelity_fc, fidelity_fc_literal, fidelity_fx, reconstruct_channel, spread_dephasing_rate,
    DephasingMethod, DephasingOptions, DephasingTarget, EnsembleConfig,
};
use uqdp_core::dynamics::{calibrate_uc, gate_uc, gate_ux, gate_uz, GateOptions, GateSetup, StepRule, UcCalibration};
use uqdp_core::model::{EncodedSubspace, JaynesCummingsSpec, TwoQubitSystem, UqdpPairSpec};
use uqdp_core::noise::{sample_trajectory, ChannelId, NoiseSpectrum};
use uqdp_core::parallel::Executor;
use uqdp_core::{seed, Error, Result};

use crate::config::{ExperimentConfig, ExperimentKind, MethodKind, Resolved, TargetKind};
use crate::spectrum::{empirical_spectrum, loglog_slope, TimeGrid};

/// Coordinates of one sweep point. Axes the experiment does not sweep hold
/// the first configured value.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridPoint {
    pub index: usize,
    pub eta: f64,
    pub em_over_ez: f64,
    pub ecc_mhz: f64,
    pub a0: f64,
    pub doublet: usize,
}

/// Result columns of an experiment, units in brackets.
#[derive(Clone, Copy, Debug)]
pub struct ValueColumns {
    pub value: &'static str,
    pub stderr: &'static str,
    pub extras: &'static [&'static str],
    pub lower_bound: bool,
}

pub fn value_columns(kind: ExperimentKind) -> ValueColumns {
    match kind {
        ExperimentKind::Dephasing => ValueColumns {
            value: "T_phi [s]",
            stderr: "T_phi_se [s]",
            extras: &["T_quasi_static [s]", "horizon [s]"],
            lower_bound: true,
        },
        ExperimentKind::JcDephasing => ValueColumns {
            value: "T_phi [s]",
            stderr: "T_phi_se [s]",
            extras: &["splitting [rad/s]", "horizon [s]"],
            lower_bound: true,
        },
        ExperimentKind::GateUx => ValueColumns {
            value: "F_X [1]",
            stderr: "F_X_se [1]",
            extras: &["trace_defect [1]", "duration [s]"],
            lower_bound: false,
        },
        ExperimentKind::GateUz => ValueColumns {
            value: "F_Z [1]",
            stderr: "F_Z_se [1]",
            extras: &["trace_defect [1]", "duration [s]"],
            lower_bound: false,
        },
        ExperimentKind::GateUc => ValueColumns {
            value: "F_C [1]",
            stderr: "F_C_se [1]",
            extras: &["trace_defect [1]", "duration [s]", "duration_factor [1]"],
            lower_bound: false,
        },
        ExperimentKind::SpreadScan => ValueColumns {
            value: "rate [1/s^2]",
            stderr: "rate_se [1/s^2]",
            extras: &["T_phi [s]", "residual_z1 [1]"],
            lower_bound: true,
        },
        ExperimentKind::SpectrumCheck => ValueColumns {
            value: "psd_slope [1]",
            stderr: "psd_slope_se [1]",
            extras: &["x_over_z_power [1]", "cot2_eta [1]", "variance_x [rad^2/s^2]", "expected_variance_x [rad^2/s^2]"],
            lower_bound: false,
        },
    }
}

/// Numbers produced at one grid point.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Outcome {
    pub value: f64,
    pub stderr: f64,
    pub lower_bound: Option<bool>,
    pub extras: Vec<f64>,
}

/// Work shared by every point of a sweep.
#[derive(Clone, Debug, Default)]
pub struct Prepared {
    pub uc_calibration: Option<UcCalibration>,
}

fn gate_options(cfg: &ExperimentConfig, res: &Resolved) -> GateOptions {
    GateOptions {
        frame: res.frame,
        steps: StepRule::Fraction(cfg.numerics.dt_fraction),
        ..GateOptions::default()
    }
}

fn uc_system(res: &Resolved, ecc_mhz: f64) -> Result<TwoQubitSystem> {
    TwoQubitSystem::new(
        &UqdpPairSpec::xx(res.e_z, res.em_sigma),
        &UqdpPairSpec::xx(res.e_z, res.em_tau),
        res.lambda_c,
        res.ecc(ecc_mhz),
    )
}

/// The encoded pair at a grid point.
pub fn pair_spec(cfg: &ExperimentConfig, res: &Resolved, p: &GridPoint) -> UqdpPairSpec {
    UqdpPairSpec::isotropic(res.e_z, p.em_over_ez * res.e_z, cfg.model.b0).with_a0(p.a0)
}

/// Noiseless calibrations done once per sweep.
pub fn prepare(cfg: &ExperimentConfig, res: &Resolved) -> Result<Prepared> {
    let mut out = Prepared::default();
    if cfg.experiment == ExperimentKind::GateUc && cfg.model.calibrate_uc {
        let sys = uc_system(res, 0.0)?;
        out.uc_calibration = Some(calibrate_uc(&sys, &gate_options(cfg, res))?);
    }
    Ok(out)
}

/// Gate schedule at a grid point, for the gate experiments.
pub fn gate_setup(cfg: &ExperimentConfig, res: &Resolved, prep: &Prepared, p: &GridPoint) -> Result<Option<GateSetup>> {
    let opts = gate_options(cfg, res);
    let theta = cfg.model.theta_over_pi * PI;
    Ok(match cfg.experiment {
        ExperimentKind::GateUx => Some(gate_ux(&pair_spec(cfg, res, p), theta, res.lambda, &opts)?),
        ExperimentKind::GateUz => Some(gate_uz(&pair_spec(cfg, res, p), theta, res.delta_em, &opts)?),
        ExperimentKind::GateUc => {
            let sys = uc_system(res, p.ecc_mhz)?;
            let duration = prep.uc_calibration.map(|c| c.duration);
            Some(gate_uc(&sys, duration, &opts)?)
        }
        _ => None,
    })
}

fn dephasing_options(cfg: &ExperimentConfig) -> DephasingOptions {
    DephasingOptions {
        max_horizon: cfg.numerics.max_horizon_s,
        horizon: cfg.numerics.horizon_s,
        ..DephasingOptions::default()
    }
}

fn ensemble(cfg: &ExperimentConfig, res: &Resolved, eta: f64, seed: u64) -> Result<EnsembleConfig> {
    EnsembleConfig::new(cfg.ensemble.n, seed, res.spectrum.with_eta(eta), res.channels.clone())
}

/// Runs the configured estimator at `p` with base seed `seed`.
pub fn run_point<E: Executor>(
    cfg: &ExperimentConfig,
    res: &Resolved,
    prep: &Prepared,
    p: &GridPoint,
    seed: u64,
    exec: &E,
) -> Result<Outcome> {
    let method = match cfg.numerics.method {
        MethodKind::Effective => DephasingMethod::Effective,
        MethodKind::Full => DephasingMethod::Full,
    };
    match cfg.experiment {
        ExperimentKind::Dephasing => {
            let target = match cfg.model.target {
                TargetKind::Bare => DephasingTarget::Bare { e_z: res.e_z },
                TargetKind::Encoded => DephasingTarget::Encoded(pair_spec(cfg, res, p)),
            };
            let ens = ensemble(cfg, res, p.eta, seed)?;
            let r = dephasing_time(&target, &ens, method, &dephasing_options(cfg), exec)?;
            Ok(Outcome {
                value: r.t_phi,
                stderr: r.t_phi_se,
                lower_bound: Some(r.lower_bound),
                extras: vec![r.quasi_static_estimate, r.horizon],
            })
        }
        ExperimentKind::JcDephasing => {
            let spec = JaynesCummingsSpec::resonant(res.e_z, res.j, cfg.model.n_max);
            let target = DephasingTarget::JcDoublet { spec, n: p.doublet };
            let ens = ensemble(cfg, res, p.eta, seed)?;
            let r = dephasing_time(&target, &ens, DephasingMethod::Full, &dephasing_options(cfg), exec)?;
            Ok(Outcome {
                value: r.t_phi,
                stderr: r.t_phi_se,
                lower_bound: Some(r.lower_bound),
                extras: vec![2.0 * res.j * (p.doublet as f64).sqrt(), r.horizon],
            })
        }
        ExperimentKind::GateUx | ExperimentKind::GateUz | ExperimentKind::GateUc => {
            let gate = gate_setup(cfg, res, prep, p)?.expect("gate experiment");
            let ens = ensemble(cfg, res, p.eta, seed)?;
            let ch = reconstruct_channel(&gate, Some(&ens), exec)?;
            let (f, extras) = if cfg.experiment == ExperimentKind::GateUc {
                let f = if cfg.numerics.fc_terms == 9 {
                    fidelity_fc_literal(&ch, &gate.target)?
                } else {
                    fidelity_fc(&ch, &gate.target)?
                };
                let nominal = PI / (4.0 * res.lambda_c);
                (f, vec![ch.trace_defect(), gate.duration(), gate.duration() / nominal])
            } else {
                (fidelity_fx(&ch, &gate.target)?, vec![ch.trace_defect(), gate.duration()])
            };
            Ok(Outcome {
                value: f.value,
                stderr: f.standard_error,
                lower_bound: None,
                extras,
            })
        }
        ExperimentKind::SpreadScan => {
            let spec = pair_spec(cfg, res, p);
            let ens = ensemble(cfg, res, p.eta, seed)?;
            let (rate, r) = spread_dephasing_rate(&spec, &ens, &dephasing_options(cfg), exec)?;
            let residual = EncodedSubspace::new(&spec)?.diagonal_residuals()[0];
            Ok(Outcome {
                value: rate,
                stderr: 2.0 * rate * r.t_phi_se / r.t_phi,
                lower_bound: Some(r.lower_bound),
                extras: vec![r.t_phi, residual],
            })
        }
        ExperimentKind::SpectrumCheck => spectrum_check(cfg, &res.spectrum.with_eta(p.eta), seed, exec),
    }
}

/// Times at which the stationary ensemble variance is pooled.
pub const VARIANCE_TIMES: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Ensemble variance of a channel, pooled over [`VARIANCE_TIMES`].
pub fn pooled_variance(trajectories: &[uqdp_core::noise::NoiseTrajectory]) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for &t in &VARIANCE_TIMES {
        for tr in trajectories {
            let v = tr.value(t);
            sum += v * v;
            count += 1;
        }
    }
    sum / count as f64
}

/// Lower and upper edges of the slope fit, relative to `omega_uv`: two decades
/// inside the band.
pub const SLOPE_WINDOW: (f64, f64) = (1.0 / 120.0, 1.0 / 1.2);

fn spectrum_check<E: Executor>(cfg: &ExperimentConfig, spec: &NoiseSpectrum, seed: u64, exec: &E) -> Result<Outcome> {
    let n = cfg.ensemble.n;
    let sample = |ch: ChannelId| -> Result<Vec<_>> {
        exec.map_indexed(n, |k| sample_trajectory(spec, ch, seed::trajectory_seed(seed, k as u64)))
            .into_iter()
            .collect()
    };
    let xs = sample(ChannelId::x(0))?;
    let zs = sample(ChannelId::z(0))?;
    let grid = TimeGrid {
        t0: 0.0,
        dt: cfg.numerics.spectrum_dt_s,
        samples: cfg.numerics.spectrum_samples,
    };
    let fitted = if spec.power_fraction(uqdp_core::linalg::Axis::X)? >= 0.5 { &xs } else { &zs };
    let psd = empirical_spectrum(fitted, &grid, spec.omega_uv, 10)?;
    let (slope, se) = loglog_slope(&psd, SLOPE_WINDOW.0 * spec.omega_uv, SLOPE_WINDOW.1 * spec.omega_uv)?;
    let (vx, vz) = (pooled_variance(&xs), pooled_variance(&zs));
    let cot2 = if spec.eta == 0.0 { f64::INFINITY } else { 1.0 / spec.eta.tan().powi(2) };
    Ok(Outcome {
        value: slope,
        stderr: se,
        lower_bound: None,
        extras: vec![vx / vz, cot2, vx, spec.channel_variance(uqdp_core::linalg::Axis::X)?],
    })
}

/// Short machine-readable code for a failure.
pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::NormDrift { .. } => "norm-drift",
        Error::StepTooLarge { .. } => "step-too-large",
        Error::NoConvergence { .. } => "no-convergence",
        Error::TooFewTrajectories { .. } => "too-few-trajectories",
        Error::Unsupported(_) => "unsupported",
        _ => "invalid-parameter",
    }
}

/// Whether a failure is numerical (exit status 3) rather than a bad input.
pub fn is_numerical(e: &Error) -> bool {
    matches!(e, Error::NormDrift { .. } | Error::StepTooLarge { .. } | Error::NoConvergence { .. })
}
