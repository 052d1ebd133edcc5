//! Result tables, CSV files, JSON run records and figure exports.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use uqdp_core::dynamics::UcCalibration;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::experiment::{error_code, value_columns};
use crate::sweep::{coordinate, SweepResult};

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("column `{0}` is missing from the record")]
    MissingColumn(String),
    #[error("figure `{figure}` needs a `{needed}` record, found `{found}`")]
    WrongExperiment {
        figure: String,
        needed: &'static str,
        found: ExperimentKind,
    },
    #[error("cell `{value}` in column `{column}` is not a number")]
    BadCell { column: String, value: String },
}

/// A rectangular table of formatted cells.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Result<usize, OutputError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| OutputError::MissingColumn(name.to_string()))
    }

    /// Numeric column; empty cells come back as NaN.
    pub fn numbers(&self, name: &str) -> Result<Vec<f64>, OutputError> {
        let c = self.column(name)?;
        self.rows
            .iter()
            .map(|r| {
                let s = r[c].trim();
                if s.is_empty() {
                    Ok(f64::NAN)
                } else {
                    s.parse().map_err(|_| OutputError::BadCell {
                        column: name.to_string(),
                        value: s.to_string(),
                    })
                }
            })
            .collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), OutputError> {
        let wrap = |source| OutputError::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut w = csv::Writer::from_path(path).map_err(wrap)?;
        w.write_record(&self.header).map_err(wrap)?;
        for r in &self.rows {
            w.write_record(r).map_err(wrap)?;
        }
        w.flush().map_err(|source| OutputError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read_csv(path: &Path) -> Result<Self, OutputError> {
        let wrap = |source| OutputError::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut r = csv::Reader::from_path(path).map_err(wrap)?;
        let header = r.headers().map_err(wrap)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()
            .map_err(wrap)?;
        Ok(Self { header, rows })
    }
}

/// Shortest round-trip text; exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Builds the result table of a sweep. Failed points keep their coordinates
/// and carry an error code.
pub fn sweep_table(kind: ExperimentKind, sweep: &SweepResult) -> Table {
    let cols = value_columns(kind);
    let mut header: Vec<String> = vec!["index".into()];
    header.extend(kind.axes().iter().map(|a| a.header().to_string()));
    header.push(cols.value.into());
    header.push(cols.stderr.into());
    if cols.lower_bound {
        header.push("lower_bound".into());
    }
    header.extend(cols.extras.iter().map(|s| s.to_string()));
    header.push("error".into());

    let rows = sweep
        .points
        .iter()
        .map(|r| {
            let mut row = vec![r.point.index.to_string()];
            row.extend(kind.axes().iter().map(|a| num(coordinate(&r.point, *a))));
            match &r.outcome {
                Ok(o) => {
                    row.push(num(o.value));
                    row.push(num(o.stderr));
                    if cols.lower_bound {
                        row.push(o.lower_bound.unwrap_or(false).to_string());
                    }
                    row.extend(o.extras.iter().map(|x| num(*x)));
                    row.push(String::new());
                }
                Err(e) => {
                    let blanks = 2 + cols.lower_bound as usize + cols.extras.len();
                    row.extend(std::iter::repeat_n(String::new(), blanks));
                    row.push(error_code(e).to_string());
                }
            }
            row
        })
        .collect();
    Table { header, rows }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub index: usize,
    pub seed: u64,
    pub runtime_s: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Everything needed to reproduce and plot a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub config: ExperimentConfig,
    pub base_seed: u64,
    pub threads: usize,
    pub wall_clock_s: f64,
    pub prepare_runtime_s: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub uc_calibration: Option<UcCalibration>,
    pub points: Vec<PointRecord>,
    pub table: Table,
}

impl RunRecord {
    pub fn new(config: &ExperimentConfig, sweep: &SweepResult, threads: usize, wall_clock_s: f64) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            base_seed: config.ensemble.base_seed,
            threads,
            wall_clock_s,
            prepare_runtime_s: sweep.prepare_runtime_s,
            uc_calibration: sweep.prepared.uc_calibration,
            points: sweep
                .points
                .iter()
                .map(|p| PointRecord {
                    index: p.point.index,
                    seed: p.seed,
                    runtime_s: p.runtime_s,
                    error: p.outcome.as_ref().err().map(|e| e.to_string()),
                })
                .collect(),
            table: sweep_table(config.experiment, sweep),
        }
    }

    pub fn read(path: &Path) -> Result<Self, OutputError> {
        let text = fs::read_to_string(path).map_err(|source| OutputError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| OutputError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), OutputError> {
        let text = serde_json::to_string_pretty(self).map_err(|source| OutputError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        fs::write(path, text + "\n").map_err(|source| OutputError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`; returns both paths.
pub fn write_run(record: &RunRecord, dir: &Path) -> Result<(PathBuf, PathBuf), OutputError> {
    fs::create_dir_all(dir).map_err(|source| OutputError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let stem = &record.config.output.name;
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    record.table.write_csv(&csv_path)?;
    record.write(&json_path)?;
    Ok((csv_path, json_path))
}

/// Figures that `export` can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// Dephasing time against eta, one series per Em/Ez.
    Fig1,
    /// F_X against eta.
    Fig3a,
    /// F_Z against eta.
    Fig3b,
    /// F_C against eta at E_cc = 0.
    Fig3c,
    /// F_C against eta, one series per E_cc.
    Fig3d,
}

impl Figure {
    fn needs(self) -> ExperimentKind {
        match self {
            Self::Fig1 => ExperimentKind::Dephasing,
            Self::Fig3a => ExperimentKind::GateUx,
            Self::Fig3b => ExperimentKind::GateUz,
            Self::Fig3c | Self::Fig3d => ExperimentKind::GateUc,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig3a => "fig3a",
            Self::Fig3b => "fig3b",
            Self::Fig3c => "fig3c",
            Self::Fig3d => "fig3d",
        }
    }

    /// (value column, series column, series label prefix)
    fn columns(self) -> (&'static str, Option<(&'static str, &'static str)>) {
        match self {
            Self::Fig1 => ("T_phi [s]", Some(("Em/Ez [1]", "Em/Ez="))),
            Self::Fig3a => ("F_X [1]", Some(("Em/Ez [1]", "Em/Ez="))),
            Self::Fig3b => ("F_Z [1]", Some(("Em/Ez [1]", "Em/Ez="))),
            Self::Fig3c => ("F_C [1]", None),
            Self::Fig3d => ("F_C [1]", Some(("E_cc/2pi [MHz]", "E_cc/2pi="))),
        }
    }
}

/// Long-format table `x, series, value, stderr` for plotting.
pub fn export_figure(record: &RunRecord, figure: Figure) -> Result<Table, OutputError> {
    if record.config.experiment != figure.needs() {
        return Err(OutputError::WrongExperiment {
            figure: figure.name().into(),
            needed: figure.needs().name(),
            found: record.config.experiment,
        });
    }
    let t = &record.table;
    let (value_col, series) = figure.columns();
    let se_col = value_columns(record.config.experiment).stderr;
    let x = t.numbers("eta [rad]")?;
    let v = t.numbers(value_col)?;
    let se = t.numbers(se_col)?;
    let labels: Vec<String> = match series {
        Some((col, prefix)) => t.numbers(col)?.iter().map(|s| format!("{prefix}{s}")).collect(),
        None => vec![String::from("all"); x.len()],
    };
    let ecc = if figure == Figure::Fig3c {
        Some(t.numbers("E_cc/2pi [MHz]")?)
    } else {
        None
    };
    let unit = value_col.split_once(' ').map_or("", |(_, u)| u);
    let header = vec![
        "x [rad]".to_string(),
        "series".to_string(),
        format!("value {unit}"),
        format!("stderr {unit}"),
    ];
    let rows = (0..x.len())
        .filter(|&i| ecc.as_ref().is_none_or(|e| e[i] == 0.0))
        .map(|i| vec![num(x[i]), labels[i].clone(), num(v[i]), num(se[i])])
        .collect();
    Ok(Table { header, rows })
}
