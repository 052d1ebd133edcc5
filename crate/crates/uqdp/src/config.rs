//! Experiment configuration: TOML file, dotted overrides, validation and
//! conversion to angular units.
//!
//! Frequencies are written in GHz (ordinary frequency, `E / 2 pi hbar`);
//! couplings and noise amplitudes relative to `E_z` are plain ratios. All
//! conversion to rad/s happens in [`ExperimentConfig::resolve`].

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};
use uqdp_core::dynamics::{Frame, DEFAULT_STEP_FRACTION, MAX_STEP_FRACTION};
use uqdp_core::linalg::Axis;
use uqdp_core::noise::{ChannelId, NoiseSpectrum, SpectralShape};
use uqdp_core::{ghz, mhz};

/// Environment variable overriding `ensemble.base_seed`.
pub const SEED_ENV: &str = "UQDP_SEED";

/// Largest seed a TOML integer can hold.
pub const MAX_SEED: u64 = i64::MAX as u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Dephasing,
    GateUx,
    GateUz,
    GateUc,
    JcDephasing,
    SpreadScan,
    SpectrumCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        Self::Dephasing,
        Self::GateUx,
        Self::GateUz,
        Self::GateUc,
        Self::JcDephasing,
        Self::SpreadScan,
        Self::SpectrumCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Dephasing => "dephasing",
            Self::GateUx => "gate-ux",
            Self::GateUz => "gate-uz",
            Self::GateUc => "gate-uc",
            Self::JcDephasing => "jc-dephasing",
            Self::SpreadScan => "spread-scan",
            Self::SpectrumCheck => "spectrum-check",
        }
    }

    /// Sweep axes the experiment reads, in row order.
    pub fn axes(self) -> &'static [SweepAxis] {
        use SweepAxis::*;
        match self {
            Self::Dephasing | Self::GateUx | Self::GateUz => &[EmOverEz, Eta],
            Self::GateUc => &[Ecc, Eta],
            Self::JcDephasing => &[Doublet, Eta],
            Self::SpreadScan => &[EmOverEz, A0, Eta],
            Self::SpectrumCheck => &[Eta],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A parameter that may be swept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Eta,
    EmOverEz,
    Ecc,
    A0,
    Doublet,
}

impl SweepAxis {
    /// CSV header, unit in brackets.
    pub fn header(self) -> &'static str {
        match self {
            Self::Eta => "eta [rad]",
            Self::EmOverEz => "Em/Ez [1]",
            Self::Ecc => "E_cc/2pi [MHz]",
            Self::A0 => "a0 [1]",
            Self::Doublet => "doublet_n [1]",
        }
    }
}

/// Scalar or list; a list makes the field a sweep axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            Self::One(x) => vec![x.clone()],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    #[default]
    Encoded,
    Bare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodKind {
    #[default]
    Effective,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameKind {
    #[default]
    Lab,
    Interaction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    #[default]
    OneOverF,
    Flat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    /// Qubit half-splitting `E_z / 2 pi`.
    pub ez_ghz: f64,
    /// Coupling `E_m / E_z` of the encoded pair.
    pub em_over_ez: OneOrMany<f64>,
    /// Dephasing target: the encoded pair or a bare qubit.
    pub target: TargetKind,
    /// Splitting ratio of the second qubit.
    pub a0: OneOrMany<f64>,
    /// Isotropy: `E_my = E_mz = b0 E_m`.
    pub b0: f64,
    /// Gate rotation angle in units of pi.
    pub theta_over_pi: f64,
    /// `U_X` drive amplitude `lambda / 2 pi`.
    pub lambda_ghz: f64,
    /// `U_Z` coupling increment relative to `E_z`.
    pub delta_em_over_ez: f64,
    pub em_sigma_ghz: f64,
    pub em_tau_ghz: f64,
    pub lambda_c_ghz: f64,
    /// Parasitic `sx2 tx1` coupling `E_cc / 2 pi`.
    pub ecc_mhz: OneOrMany<f64>,
    /// Calibrate the `U_C` duration instead of using `pi / (4 lambda_c)`.
    pub calibrate_uc: bool,
    /// Resonator coupling `J / 2 pi`.
    pub j_ghz: f64,
    pub n_max: usize,
    pub doublet: OneOrMany<usize>,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            ez_ghz: 5.0,
            em_over_ez: OneOrMany::One(0.4),
            target: TargetKind::Encoded,
            a0: OneOrMany::One(1.0),
            b0: 0.0,
            theta_over_pi: 1.0,
            lambda_ghz: 0.3,
            delta_em_over_ez: 0.02,
            em_sigma_ghz: 5.0,
            em_tau_ghz: 2.0,
            lambda_c_ghz: 0.3,
            ecc_mhz: OneOrMany::One(0.0),
            calibrate_uc: true,
            j_ghz: 0.05,
            n_max: 6,
            doublet: OneOrMany::One(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    /// `A / E_z`.
    pub amplitude_over_ez: f64,
    /// Explicit power angles (rad); overrides `eta_points`.
    pub eta: Option<OneOrMany<f64>>,
    /// Evenly spaced angles on `[0, pi/2]`.
    pub eta_points: usize,
    pub f_ir_ghz: f64,
    pub f_uv_ghz: f64,
    /// Uniform grid spacing `delta_omega / 2 pi`.
    pub delta_f_ghz: f64,
    /// Channel labels such as `"x1"`, `"z2"`; default is x and z on every
    /// physical qubit.
    pub channels: Option<Vec<String>>,
    pub shape: ShapeKind,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            amplitude_over_ez: 2e-4,
            eta: None,
            eta_points: 9,
            f_ir_ghz: 1e-9,
            f_uv_ghz: 1e-4,
            delta_f_ghz: 1e-7,
            channels: None,
            shape: ShapeKind::OneOverF,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleSection {
    pub n: usize,
    pub base_seed: u64,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self { n: 200, base_seed: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSection {
    /// RK4 step as a fraction of the fastest period.
    pub dt_fraction: f64,
    pub frame: FrameKind,
    pub method: MethodKind,
    /// Fixed dephasing window (s); automatic when absent.
    pub horizon_s: Option<f64>,
    pub max_horizon_s: f64,
    /// 16-term (identity included) or literal 9-term `F_C`.
    pub fc_terms: usize,
    /// Periodogram length and step for `spectrum-check`.
    pub spectrum_samples: usize,
    pub spectrum_dt_s: f64,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            dt_fraction: DEFAULT_STEP_FRACTION,
            frame: FrameKind::Lab,
            method: MethodKind::Effective,
            horizon_s: None,
            max_horizon_s: 1.0,
            fc_terms: 16,
            spectrum_samples: 8192,
            spectrum_dt_s: 2.5e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    /// File stem for `<stem>.csv` and `<stem>.json`.
    pub name: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            name: "results".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// A configuration problem tied to one field.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl ExperimentConfig {
    /// Reference defaults for the given experiment.
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            model: ModelSection::default(),
            noise: NoiseSection::default(),
            ensemble: EnsembleSection::default(),
            numerics: NumericsSection::default(),
            output: OutputSection::default(),
        }
    }

    /// Parses TOML and applies `path=value` overrides in order.
    pub fn from_toml(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut doc: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::new("<file>", e.message().trim().to_string()))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        Self::deserialize(toml::Value::Table(doc)).map_err(|e| ConfigError::new("<file>", e.message().trim().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Replaces the base seed with `UQDP_SEED` when that is set.
    pub fn apply_seed_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.ensemble.base_seed = v
                .trim()
                .parse::<u64>()
                .ok()
                .filter(|s| *s <= MAX_SEED)
                .ok_or_else(|| ConfigError::new(SEED_ENV, format!("`{v}` is not an integer in 0..={MAX_SEED}")))?;
        }
        Ok(())
    }

    /// Checks every field and converts to angular units.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let m = &self.model;
        let n = &self.noise;
        let positive = |field: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(field, format!("must be positive and finite, got {x}")))
            }
        };
        positive("model.ez_ghz", m.ez_ghz)?;
        positive("noise.f_ir_ghz", n.f_ir_ghz)?;
        positive("noise.f_uv_ghz", n.f_uv_ghz)?;
        positive("noise.delta_f_ghz", n.delta_f_ghz)?;
        if !(n.amplitude_over_ez >= 0.0 && n.amplitude_over_ez.is_finite()) {
            return Err(ConfigError::new("noise.amplitude_over_ez", "must be non-negative"));
        }
        if n.f_ir_ghz >= n.f_uv_ghz {
            return Err(ConfigError::new("noise.f_ir_ghz", "must be below noise.f_uv_ghz"));
        }
        if n.delta_f_ghz > n.f_uv_ghz - n.f_ir_ghz {
            return Err(ConfigError::new(
                "noise.delta_f_ghz",
                "empty noise grid: spacing exceeds the band f_uv - f_ir",
            ));
        }
        let e_z = ghz(m.ez_ghz);
        let eta: Vec<f64> = match &n.eta {
            Some(v) => v.values(),
            None => {
                if n.eta_points == 0 {
                    return Err(ConfigError::new("noise.eta_points", "must be at least 1"));
                }
                if n.eta_points == 1 {
                    vec![0.0]
                } else {
                    (0..n.eta_points)
                        .map(|k| FRAC_PI_2 * (k as f64 / (n.eta_points - 1) as f64))
                        .collect()
                }
            }
        };
        if eta.is_empty() {
            return Err(ConfigError::new("noise.eta", "empty grid"));
        }
        if let Some(bad) = eta.iter().find(|e| !(**e >= 0.0 && **e <= FRAC_PI_2 + 1e-12)) {
            return Err(ConfigError::new("noise.eta", format!("{bad} is outside [0, pi/2]")));
        }
        let eta: Vec<f64> = eta.into_iter().map(|e| e.min(FRAC_PI_2)).collect();
        let spectrum = NoiseSpectrum::new(
            n.amplitude_over_ez * e_z,
            eta[0],
            ghz(n.f_ir_ghz),
            ghz(n.f_uv_ghz),
            ghz(n.delta_f_ghz),
        )
        .map_err(|e| ConfigError::new("noise", e.to_string()))?
        .with_shape(match n.shape {
            ShapeKind::OneOverF => SpectralShape::OneOverF,
            ShapeKind::Flat => SpectralShape::Flat,
        });
        spectrum.grid().map_err(|e| ConfigError::new("noise.delta_f_ghz", e.to_string()))?;

        let em = m.em_over_ez.values();
        let a0 = m.a0.values();
        let ecc = m.ecc_mhz.values();
        let doublet = m.doublet.values();
        for (field, v) in [("model.em_over_ez", &em), ("model.a0", &a0), ("model.ecc_mhz", &ecc)] {
            if v.is_empty() {
                return Err(ConfigError::new(field, "empty grid"));
            }
            if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
                return Err(ConfigError::new(field, format!("non-finite value {bad}")));
            }
        }
        if em.iter().any(|x| *x < 0.0) {
            return Err(ConfigError::new("model.em_over_ez", "must be non-negative"));
        }
        if doublet.is_empty() {
            return Err(ConfigError::new("model.doublet", "empty grid"));
        }
        if let Some(bad) = doublet.iter().find(|d| **d == 0 || **d > m.n_max) {
            return Err(ConfigError::new(
                "model.doublet",
                format!("doublet {bad} outside 1..={}", m.n_max),
            ));
        }
        if m.n_max < 4 {
            return Err(ConfigError::new("model.n_max", "Fock cutoff must be at least 4"));
        }

        let kind = self.experiment;
        let needs_em_positive = matches!(kind, ExperimentKind::SpreadScan)
            || (kind == ExperimentKind::Dephasing
                && m.target == TargetKind::Encoded
                && self.numerics.method == MethodKind::Effective);
        if needs_em_positive && em.contains(&0.0) {
            return Err(ConfigError::new(
                "model.em_over_ez",
                "the effective dephasing method needs E_m > 0",
            ));
        }
        if matches!(kind, ExperimentKind::GateUx | ExperimentKind::GateUz) {
            positive("model.lambda_ghz", m.lambda_ghz)?;
            positive("model.delta_em_over_ez", m.delta_em_over_ez)?;
        }
        if kind == ExperimentKind::GateUc {
            positive("model.lambda_c_ghz", m.lambda_c_ghz)?;
            positive("model.em_sigma_ghz", m.em_sigma_ghz)?;
            positive("model.em_tau_ghz", m.em_tau_ghz)?;
        }
        if kind == ExperimentKind::JcDephasing {
            positive("model.j_ghz", m.j_ghz)?;
        }

        let nm = &self.numerics;
        if !(nm.dt_fraction > 0.0 && nm.dt_fraction <= MAX_STEP_FRACTION) {
            return Err(ConfigError::new(
                "numerics.dt_fraction",
                format!("must lie in (0, {MAX_STEP_FRACTION}]"),
            ));
        }
        if let Some(h) = nm.horizon_s {
            positive("numerics.horizon_s", h)?;
        }
        positive("numerics.max_horizon_s", nm.max_horizon_s)?;
        if nm.fc_terms != 16 && nm.fc_terms != 9 {
            return Err(ConfigError::new("numerics.fc_terms", "must be 16 or 9"));
        }
        if kind == ExperimentKind::SpectrumCheck {
            positive("numerics.spectrum_dt_s", nm.spectrum_dt_s)?;
            if nm.spectrum_samples < 16 {
                return Err(ConfigError::new("numerics.spectrum_samples", "must be at least 16"));
            }
        }
        if self.ensemble.base_seed > MAX_SEED {
            return Err(ConfigError::new(
                "ensemble.base_seed",
                format!("must be at most {MAX_SEED} so records stay valid TOML"),
            ));
        }
        if self.ensemble.n < uqdp_core::analysis::MIN_TRAJECTORIES && kind != ExperimentKind::SpectrumCheck {
            return Err(ConfigError::new(
                "ensemble.n",
                format!(
                    "{} trajectories; at least {} are required",
                    self.ensemble.n,
                    uqdp_core::analysis::MIN_TRAJECTORIES
                ),
            ));
        }
        if kind == ExperimentKind::SpectrumCheck && self.ensemble.n < uqdp_core::analysis::MIN_TRAJECTORIES {
            return Err(ConfigError::new("ensemble.n", "a periodogram needs at least 100 trajectories"));
        }

        let n_qubits = match kind {
            ExperimentKind::Dephasing if m.target == TargetKind::Bare => 1,
            ExperimentKind::JcDephasing | ExperimentKind::SpectrumCheck => 1,
            ExperimentKind::GateUc => 4,
            _ => 2,
        };
        let channels = match &n.channels {
            None => uqdp_core::analysis::EnsembleConfig::xz_channels(n_qubits),
            Some(list) => list
                .iter()
                .map(|s| parse_channel(s, n_qubits))
                .collect::<Result<Vec<_>, _>>()?,
        };
        for (i, c) in channels.iter().enumerate() {
            if channels[..i].contains(c) {
                return Err(ConfigError::new("noise.channels", format!("duplicate channel {c}")));
            }
        }

        Ok(Resolved {
            e_z,
            lambda: ghz(m.lambda_ghz),
            delta_em: m.delta_em_over_ez * e_z,
            em_sigma: ghz(m.em_sigma_ghz),
            em_tau: ghz(m.em_tau_ghz),
            lambda_c: ghz(m.lambda_c_ghz),
            j: ghz(m.j_ghz),
            spectrum,
            channels,
            n_qubits,
            eta,
            em_over_ez: em,
            a0,
            ecc_mhz: ecc,
            doublet,
            frame: match nm.frame {
                FrameKind::Lab => Frame::Lab,
                FrameKind::Interaction => Frame::Interaction,
            },
        })
    }
}

/// `"x1"` is the x channel of the first physical qubit.
pub fn parse_channel(label: &str, n_qubits: usize) -> Result<ChannelId, ConfigError> {
    let err = || ConfigError::new("noise.channels", format!("bad channel `{label}`; expected x1, z2, ..."));
    let mut chars = label.trim().chars();
    let axis = match chars.next().map(|c| c.to_ascii_lowercase()) {
        Some('x') => Axis::X,
        Some('y') => Axis::Y,
        Some('z') => Axis::Z,
        _ => return Err(err()),
    };
    let q: usize = chars.as_str().parse().map_err(|_| err())?;
    if q == 0 || q > n_qubits {
        return Err(ConfigError::new(
            "noise.channels",
            format!("channel `{label}` needs qubit 1..={n_qubits}"),
        ));
    }
    Ok(ChannelId::new(axis, q - 1))
}

/// Validated configuration in rad/s.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub e_z: f64,
    pub lambda: f64,
    pub delta_em: f64,
    pub em_sigma: f64,
    pub em_tau: f64,
    pub lambda_c: f64,
    pub j: f64,
    /// Spectrum at the first grid angle.
    pub spectrum: NoiseSpectrum,
    pub channels: Vec<ChannelId>,
    /// Physical qubits carrying noise.
    pub n_qubits: usize,
    pub eta: Vec<f64>,
    pub em_over_ez: Vec<f64>,
    pub a0: Vec<f64>,
    pub ecc_mhz: Vec<f64>,
    pub doublet: Vec<usize>,
    pub frame: Frame,
}

impl Resolved {
    pub fn axis_values(&self, axis: SweepAxis) -> Vec<f64> {
        match axis {
            SweepAxis::Eta => self.eta.clone(),
            SweepAxis::EmOverEz => self.em_over_ez.clone(),
            SweepAxis::Ecc => self.ecc_mhz.clone(),
            SweepAxis::A0 => self.a0.clone(),
            SweepAxis::Doublet => self.doublet.iter().map(|&d| d as f64).collect(),
        }
    }

    pub fn ecc(&self, mhz_value: f64) -> f64 {
        mhz(mhz_value)
    }
}

/// Sets `a.b.c = value` in a TOML table. The value is parsed as TOML
/// (numbers, booleans, arrays) and kept as a string otherwise. The alias
/// `ensemble.n_trajectories` maps to `ensemble.n`.
pub fn apply_override(doc: &mut toml::Table, spec: &str) -> Result<(), ConfigError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::new(spec, "override must look like path=value"))?;
    let path = path.trim();
    let path = if path == "ensemble.n_trajectories" { "ensemble.n" } else { path };
    let value = parse_value(raw.trim());
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(ConfigError::new(path, "empty key in dotted path"));
    }
    let mut table = doc;
    for k in &keys[..keys.len() - 1] {
        let entry = table
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::new(path, format!("`{k}` is not a section")))?;
    }
    table.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_reference_values() {
        let c = ExperimentConfig::from_toml("experiment = \"gate-ux\"", &[]).unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.e_z, ghz(5.0));
        assert!((r.spectrum.amplitude - 2e-4 * ghz(5.0)).abs() < 1e-6);
        assert!((r.spectrum.omega_ir - ghz(1e-9)).abs() < 1e-12);
        assert!((r.spectrum.delta_omega - uqdp_core::hz(100.0)).abs() < 1e-9);
        assert_eq!(r.lambda, ghz(0.3));
        assert_eq!((r.em_sigma, r.em_tau), (ghz(5.0), ghz(2.0)));
        assert_eq!(r.eta.len(), 9);
        assert_eq!(r.channels.len(), 4);
    }

    #[test]
    fn overrides_use_dotted_paths() {
        let c = ExperimentConfig::from_toml(
            "experiment = \"dephasing\"\n[ensemble]\nn = 300\n",
            &["ensemble.n=100".into(), "noise.eta=[0.0, 0.5]".into(), "output.name=abc".into()],
        )
        .unwrap();
        assert_eq!(c.ensemble.n, 100);
        assert_eq!(c.noise.eta, Some(OneOrMany::Many(vec![0.0, 0.5])));
        assert_eq!(c.output.name, "abc");
    }

    #[test]
    fn unknown_fields_name_themselves() {
        let e = ExperimentConfig::from_toml("experiment = \"dephasing\"\n[noise]\nbogus = 1\n", &[]).unwrap_err();
        assert!(e.message.contains("bogus"), "{e}");
    }

    #[test]
    fn empty_noise_grid_is_rejected() {
        let c = ExperimentConfig::from_toml("experiment = \"dephasing\"\n[noise]\ndelta_f_ghz = 1.0\n", &[]).unwrap();
        let e = c.resolve().unwrap_err();
        assert_eq!(e.field, "noise.delta_f_ghz");
        assert!(e.message.contains("empty noise grid"));
    }

    #[test]
    fn channel_labels() {
        assert_eq!(parse_channel("z2", 2).unwrap(), ChannelId::z(1));
        assert!(parse_channel("z3", 2).is_err());
        assert!(parse_channel("q1", 2).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let mut c = ExperimentConfig::new(ExperimentKind::GateUc);
        c.model.ecc_mhz = OneOrMany::Many(vec![0.0, 50.0]);
        let back = ExperimentConfig::from_toml(&c.to_toml(), &[]).unwrap();
        assert_eq!(back, c);
    }
}
