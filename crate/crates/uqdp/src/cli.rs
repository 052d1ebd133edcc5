//! The `uqdp` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use uqdp_core::model::NoiseCoupling;
use uqdp_core::noise::sample_trajectory;
use uqdp_core::seed::trajectory_seed;
use uqdp_core::TAU;

use crate::config::{parse_channel, ConfigError, ExperimentConfig, ExperimentKind, Resolved};
use crate::exec::ThreadPool;
use crate::experiment::{gate_setup, is_numerical, Prepared};
use crate::output::{export_figure, num, write_run, Figure, RunRecord, Table};
use crate::sweep::{grid, run_sweep};

/// Exit status for configuration and input errors.
pub const EXIT_CONFIG: u8 = 2;
/// Exit status when grid points fail numerically.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "uqdp", version, about = "Encoded-qubit dephasing and gate simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a sweep from a TOML config or a JSON run record.
    Run {
        config: PathBuf,
        /// Dotted override such as `ensemble.n=100`; repeatable.
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
        /// Worker threads for ensemble averages; defaults to all cores.
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory; overrides `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Suppress per-point progress on stderr.
        #[arg(long, short)]
        quiet: bool,
    },
    /// Print resolved parameters, step plan and runtime estimate without running.
    Validate {
        config: PathBuf,
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
    /// Write a plot-ready long-format CSV from a run record.
    Export {
        record: PathBuf,
        #[arg(long, value_enum)]
        figure: Figure,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump one sampled noise trajectory as `t, value` CSV.
    Trajectory {
        config: PathBuf,
        /// Channel label, e.g. `x1`.
        #[arg(long, default_value = "x1")]
        channel: String,
        /// Trajectory index within the ensemble of the first grid point.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 1e-5)]
        dt: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit status and message.
#[derive(Debug)]
pub struct Failure {
    pub status: u8,
    pub message: String,
}

impl Failure {
    fn config(message: impl ToString) -> Self {
        Self {
            status: EXIT_CONFIG,
            message: message.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::config(format!("invalid config: {e}"))
    }
}

impl From<crate::output::OutputError> for Failure {
    fn from(e: crate::output::OutputError) -> Self {
        Self::config(e)
    }
}

/// Loads a TOML config, or the config echoed in a JSON run record.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<ExperimentConfig, Failure> {
    let mut cfg = if path.extension().is_some_and(|e| e == "json") {
        let rec = RunRecord::read(path)?;
        let text = rec.config.to_toml();
        ExperimentConfig::from_toml(&text, overrides)?
    } else {
        let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        ExperimentConfig::from_toml(&text, overrides)?
    };
    cfg.apply_seed_env()?;
    Ok(cfg)
}

pub fn execute(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Run {
            config,
            set,
            threads,
            out,
            quiet,
        } => run(&config, &set, threads, out, quiet),
        Command::Validate { config, set } => {
            let cfg = load_config(&config, &set)?;
            let res = cfg.resolve()?;
            validate_report(&cfg, &res)
        }
        Command::Export { record, figure, out } => {
            let rec = RunRecord::read(&record)?;
            let table = export_figure(&rec, figure)?;
            match out {
                Some(p) => {
                    table.write_csv(&p)?;
                    Ok(format!("wrote {} ({} rows)\n", p.display(), table.rows.len()))
                }
                None => Ok(table_to_string(&table)),
            }
        }
        Command::Trajectory {
            config,
            channel,
            index,
            dt,
            samples,
            out,
        } => {
            let cfg = load_config(&config, &[])?;
            let res = cfg.resolve()?;
            let ch = parse_channel(&channel, res.n_qubits)?;
            let p = grid(&cfg, &res)[0];
            let seed = trajectory_seed(uqdp_core::seed::point_seed(cfg.ensemble.base_seed, 0), index as u64);
            let tr = sample_trajectory(&res.spectrum.with_eta(p.eta), ch, seed).map_err(Failure::config)?;
            let table = Table {
                header: vec!["t [s]".into(), "value [rad/s]".into()],
                rows: tr
                    .sample_uniform(0.0, dt, samples)
                    .iter()
                    .enumerate()
                    .map(|(i, v)| vec![num(i as f64 * dt), num(*v)])
                    .collect(),
            };
            match out {
                Some(p) => {
                    table.write_csv(&p)?;
                    Ok(format!("wrote {}\n", p.display()))
                }
                None => Ok(table_to_string(&table)),
            }
        }
    }
}

fn table_to_string(t: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.header).expect("in-memory write");
    for r in &t.rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

fn run(config: &Path, set: &[String], threads: Option<usize>, out: Option<PathBuf>, quiet: bool) -> Result<String, Failure> {
    let cfg = load_config(config, set)?;
    let res = cfg.resolve()?;
    let pool = ThreadPool::new(threads).map_err(Failure::config)?;
    let start = Instant::now();
    let sweep = run_sweep(&cfg, &res, &pool, |r, total| {
        if !quiet {
            let status = match &r.outcome {
                Ok(o) => format!("{:.6e}", o.value),
                Err(e) => format!("failed: {e}"),
            };
            eprintln!("[{}/{}] eta={:.4} {} ({:.2} s)", r.point.index + 1, total, r.point.eta, status, r.runtime_s);
        }
    })
    .map_err(|e| Failure {
        status: if is_numerical(&e) { EXIT_NUMERICAL } else { EXIT_CONFIG },
        message: format!("preparation failed: {e}"),
    })?;
    let record = RunRecord::new(&cfg, &sweep, pool.threads(), start.elapsed().as_secs_f64());
    let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    let (csv_path, json_path) = write_run(&record, &dir)?;
    let mut msg = format!("wrote {} and {}\n", csv_path.display(), json_path.display());

    let failed: Vec<_> = sweep.failures().collect();
    if failed.is_empty() {
        return Ok(msg);
    }
    let numerical = failed.iter().any(|f| f.outcome.as_ref().is_err_and(is_numerical));
    for f in &failed {
        let e = f.outcome.as_ref().unwrap_err();
        let _ = writeln!(msg, "grid point {} (eta={}): {e}", f.point.index, f.point.eta);
    }
    Err(Failure {
        status: if numerical { EXIT_NUMERICAL } else { EXIT_CONFIG },
        message: msg,
    })
}

fn rad_and_ghz(x: f64) -> String {
    format!("{x:.6e} rad/s ({:.6e} GHz)", x / TAU / 1e9)
}

/// Text report for `validate`.
pub fn validate_report(cfg: &ExperimentConfig, res: &Resolved) -> Result<String, Failure> {
    let mut s = String::new();
    let kind = cfg.experiment;
    let pts = grid(cfg, res);
    let _ = writeln!(s, "experiment: {kind}");
    let _ = writeln!(s, "grid points: {}", pts.len());
    let _ = writeln!(s, "E_z = {}", rad_and_ghz(res.e_z));
    match kind {
        ExperimentKind::GateUx => {
            let _ = writeln!(s, "lambda = {}", rad_and_ghz(res.lambda));
        }
        ExperimentKind::GateUz => {
            let _ = writeln!(s, "delta E_m = {}", rad_and_ghz(res.delta_em));
        }
        ExperimentKind::GateUc => {
            let _ = writeln!(s, "E_m(sigma) = {}", rad_and_ghz(res.em_sigma));
            let _ = writeln!(s, "E_m(tau) = {}", rad_and_ghz(res.em_tau));
            let _ = writeln!(s, "lambda_c = {}", rad_and_ghz(res.lambda_c));
        }
        ExperimentKind::JcDephasing => {
            let _ = writeln!(s, "J = {}", rad_and_ghz(res.j));
        }
        _ => {}
    }
    for &em in &res.em_over_ez {
        if kind.axes().contains(&crate::config::SweepAxis::EmOverEz) {
            let _ = writeln!(s, "E_m = {} (E_m/E_z = {em})", rad_and_ghz(em * res.e_z));
        }
    }
    let sp = &res.spectrum;
    let _ = writeln!(s, "noise amplitude A = {}", rad_and_ghz(sp.amplitude));
    let _ = writeln!(s, "omega_ir = {}", rad_and_ghz(sp.omega_ir));
    let _ = writeln!(s, "omega_uv = {}", rad_and_ghz(sp.omega_uv));
    let _ = writeln!(s, "delta_omega = {}", rad_and_ghz(sp.delta_omega));
    let cells = sp.grid().map_err(Failure::config)?.cells().len();
    let _ = writeln!(s, "noise components per channel: {cells}");
    let labels: Vec<String> = res.channels.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "channels: {}", labels.join(", "));
    let _ = writeln!(s, "eta grid: {:?}", res.eta);
    let _ = writeln!(s, "trajectories per point: {}", cfg.ensemble.n);

    let n_traj = cfg.ensemble.n as f64;
    let estimate = match kind {
        ExperimentKind::GateUx | ExperimentKind::GateUz | ExperimentKind::GateUc => {
            let mut total = 0.0;
            for (i, p) in pts.iter().enumerate() {
                let gate = gate_setup(cfg, res, &Prepared::default(), p)
                    .map_err(Failure::config)?
                    .expect("gate experiment");
                let plan = gate.schedule.plan(&gate.h_static).map_err(Failure::config)?;
                if i == 0 {
                    for (k, st) in plan.iter().enumerate() {
                        let _ = writeln!(
                            s,
                            "segment {k}: {} steps, dt = {:.3e} s (limit {:.3e} s, 1/40 of the fastest period)",
                            st.steps, st.dt, st.limit
                        );
                    }
                    let _ = writeln!(s, "gate duration: {:.6e} s", gate.duration());
                    let t = Instant::now();
                    gate.run(&NoiseCoupling::none(gate.n_qubits)).map_err(Failure::config)?;
                    total = t.elapsed().as_secs_f64();
                }
                for w in &gate.warnings {
                    let _ = writeln!(s, "warning (point {}): {w}", p.index);
                }
            }
            total * n_traj * pts.len() as f64
        }
        _ => {
            // effective-energy sums dominate: one cosine per tone, channel and sample
            let samples = 20_000.0;
            let per_eval = 5e-9 * cells as f64 * res.channels.len() as f64;
            let scale = if kind == ExperimentKind::JcDephasing { 20.0 } else { 1.0 };
            samples * per_eval * n_traj * pts.len() as f64 * scale
        }
    };
    let _ = writeln!(s, "estimated runtime (single thread): {estimate:.1} s");
    Ok(s)
}
