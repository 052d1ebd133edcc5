//! Parameter grids and the sweep loop.

use std::time::Instant;

use uqdp_core::parallel::Executor;
use uqdp_core::seed::point_seed;
use uqdp_core::Error;

use crate::config::{ExperimentConfig, Resolved, SweepAxis};
use crate::experiment::{prepare, run_point, GridPoint, Outcome, Prepared};

/// Cartesian product of the experiment's axes. The last axis (always `eta`)
/// varies fastest.
pub fn grid(cfg: &ExperimentConfig, res: &Resolved) -> Vec<GridPoint> {
    let axes = cfg.experiment.axes();
    let values: Vec<Vec<f64>> = axes.iter().map(|a| res.axis_values(*a)).collect();
    let total: usize = values.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    for index in 0..total {
        let mut p = GridPoint {
            index,
            eta: res.eta[0],
            em_over_ez: res.em_over_ez[0],
            ecc_mhz: res.ecc_mhz[0],
            a0: res.a0[0],
            doublet: res.doublet[0],
        };
        let mut rem = index;
        for (axis, vals) in axes.iter().zip(&values).rev() {
            let v = vals[rem % vals.len()];
            rem /= vals.len();
            match axis {
                SweepAxis::Eta => p.eta = v,
                SweepAxis::EmOverEz => p.em_over_ez = v,
                SweepAxis::Ecc => p.ecc_mhz = v,
                SweepAxis::A0 => p.a0 = v,
                SweepAxis::Doublet => p.doublet = v as usize,
            }
        }
        out.push(p);
    }
    out
}

/// Value of `axis` at `p`.
pub fn coordinate(p: &GridPoint, axis: SweepAxis) -> f64 {
    match axis {
        SweepAxis::Eta => p.eta,
        SweepAxis::EmOverEz => p.em_over_ez,
        SweepAxis::Ecc => p.ecc_mhz,
        SweepAxis::A0 => p.a0,
        SweepAxis::Doublet => p.doublet as f64,
    }
}

#[derive(Debug)]
pub struct PointResult {
    pub point: GridPoint,
    pub seed: u64,
    pub outcome: Result<Outcome, Error>,
    pub runtime_s: f64,
}

#[derive(Debug)]
pub struct SweepResult {
    pub prepared: Prepared,
    pub prepare_runtime_s: f64,
    pub points: Vec<PointResult>,
}

impl SweepResult {
    pub fn failures(&self) -> impl Iterator<Item = &PointResult> {
        self.points.iter().filter(|p| p.outcome.is_err())
    }
}

/// Runs every grid point in order; ensembles inside a point go through `exec`.
/// A failing point is recorded and the sweep moves on. `progress` sees each
/// finished point.
pub fn run_sweep<E: Executor>(
    cfg: &ExperimentConfig,
    res: &Resolved,
    exec: &E,
    mut progress: impl FnMut(&PointResult, usize),
) -> Result<SweepResult, Error> {
    let t0 = Instant::now();
    let prepared = prepare(cfg, res)?;
    let prepare_runtime_s = t0.elapsed().as_secs_f64();
    let pts = grid(cfg, res);
    let total = pts.len();
    let mut points = Vec::with_capacity(total);
    for p in pts {
        let seed = point_seed(cfg.ensemble.base_seed, p.index as u64);
        let t = Instant::now();
        let outcome = run_point(cfg, res, &prepared, &p, seed, exec);
        let r = PointResult {
            point: p,
            seed,
            outcome,
            runtime_s: t.elapsed().as_secs_f64(),
        };
        progress(&r, total);
        points.push(r);
    }
    Ok(SweepResult {
        prepared,
        prepare_runtime_s,
        points,
    })
}
