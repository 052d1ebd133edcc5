//! Figure exports from synthetic sweeps.

use uqdp::config::OneOrMany;
use uqdp::experiment::{Outcome, Prepared};
use uqdp::output::{export_figure, Figure, OutputError, RunRecord};
use uqdp::sweep::{grid, PointResult, SweepResult};
use uqdp::{ExperimentConfig, ExperimentKind};
use uqdp_core::Error;

fn record(cfg: &ExperimentConfig, fail: Option<usize>) -> RunRecord {
    let res = cfg.resolve().unwrap();
    let extras = match cfg.experiment {
        ExperimentKind::Dephasing => 2,
        _ => 3,
    };
    let points = grid(cfg, &res)
        .into_iter()
        .map(|p| PointResult {
            seed: p.index as u64,
            outcome: if Some(p.index) == fail {
                Err(Error::NormDrift { drift: 1e-5 })
            } else {
                Ok(Outcome {
                    value: 1.0 / (1.0 + p.index as f64),
                    stderr: 0.01,
                    lower_bound: (cfg.experiment == ExperimentKind::Dephasing).then_some(false),
                    extras: vec![0.0; extras],
                })
            },
            point: p,
            runtime_s: 0.0,
        })
        .collect();
    let sweep = SweepResult {
        prepared: Prepared::default(),
        prepare_runtime_s: 0.0,
        points,
    };
    RunRecord::new(cfg, &sweep, 1, 0.0)
}

#[test]
fn fig1_has_one_series_per_coupling() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Dephasing);
    cfg.model.em_over_ez = OneOrMany::Many(vec![0.2, 0.6, 1.0]);
    cfg.noise.eta_points = 16;
    let t = export_figure(&record(&cfg, None), Figure::Fig1).unwrap();
    assert_eq!(t.rows.len(), 48);
    assert_eq!(t.header, ["x [rad]", "series", "value [s]", "stderr [s]"]);
    assert_eq!(t.rows[0][1], "Em/Ez=0.2");
    assert_eq!(t.rows[16][1], "Em/Ez=0.6");
    assert_eq!(t.rows[47][1], "Em/Ez=1");
    assert_eq!(t.rows[15][0], format!("{}", std::f64::consts::FRAC_PI_2));
}

#[test]
fn fig3c_keeps_the_uncoupled_rows() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::GateUc);
    cfg.model.ecc_mhz = OneOrMany::Many(vec![0.0, 50.0]);
    cfg.noise.eta_points = 3;
    let rec = record(&cfg, None);
    let c = export_figure(&rec, Figure::Fig3c).unwrap();
    assert_eq!(c.rows.len(), 3);
    assert!(c.rows.iter().all(|r| r[1] == "all"));
    let d = export_figure(&rec, Figure::Fig3d).unwrap();
    assert_eq!(d.rows.len(), 6);
    assert_eq!(d.rows[3][1], "E_cc/2pi=50");
}

#[test]
fn failed_points_export_as_gaps() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::GateUx);
    cfg.noise.eta_points = 3;
    let rec = record(&cfg, Some(1));
    assert!(rec.points[1].error.is_some());
    let err = rec.table.column("error").unwrap();
    assert_eq!(rec.table.rows[1][err], "norm-drift");
    let t = export_figure(&rec, Figure::Fig3a).unwrap();
    assert_eq!(t.rows[1][2], "NaN");
}

#[test]
fn export_errors() {
    let cfg = ExperimentConfig::new(ExperimentKind::GateUx);
    let mut rec = record(&cfg, None);
    match export_figure(&rec, Figure::Fig1) {
        Err(OutputError::WrongExperiment { needed, .. }) => assert_eq!(needed, "dephasing"),
        other => panic!("{other:?}"),
    }
    let col = rec.table.column("F_X_se [1]").unwrap();
    rec.table.header[col] = "renamed".into();
    match export_figure(&rec, Figure::Fig3a) {
        Err(OutputError::MissingColumn(c)) => assert_eq!(c, "F_X_se [1]"),
        other => panic!("{other:?}"),
    }
}
