//! Classical low-frequency noise `dV(t) = sum_k a_k dw_k cos(w_k t + phi_k)`.
//!
//! The spectrum splits a total power `A^2` between transverse (`x`, `y`)
//! channels with density `A^2 cos^2(eta) / w` and longitudinal (`z`) channels
//! with density `A^2 sin^2(eta) / w`, between the infrared and ultraviolet
//! cutoffs.
//!
//! Frequency grid: uniform cells of width `dw` hanging down from `w_uv`,
//! followed by log-spaced cells from the last uniform edge down to `w_ir`
//! so the quasi-static infrared power is kept. Each cell carries exactly the
//! spectral weight it covers, `P_k = integral_cell S(w) dw`, and the random
//! amplitudes are scaled so that `Var[V(t)] = sum_k P_k`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;


use crate::linalg::Axis;
use crate::seed;
use crate::{Error, Result, TAU};

/// Upper bound on the number of grid components.
pub const MAX_COMPONENTS: usize = 4096;

/// Log-grid density below the uniform part.
const LOG_CELLS_PER_DECADE: f64 = 20.0;

/// Power-law shape of the spectral density.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SpectralShape {
    /// `S(w) ~ 1/w`.
    #[default]
    OneOverF,
    /// `S(w) ~ 1/w_uv`, flat over the band. Diagnostic only.
    Flat,
}

/// Parameters of the 1/f noise.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseSpectrum {
    /// Total amplitude `A` (energy, rad/s).
    pub amplitude: f64,
    /// Power angle `eta` in `[0, pi/2]`.
    pub eta: f64,
    pub omega_ir: f64,
    pub omega_uv: f64,
    pub delta_omega: f64,
    pub shape: SpectralShape,
}

impl NoiseSpectrum {
    pub fn new(amplitude: f64, eta: f64, omega_ir: f64, omega_uv: f64, delta_omega: f64) -> Result<Self> {
        let s = Self {
            amplitude,
            eta,
            omega_ir,
            omega_uv,
            delta_omega,
            shape: SpectralShape::OneOverF,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_shape(mut self, shape: SpectralShape) -> Self {
        self.shape = shape;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.amplitude, self.eta, self.omega_ir, self.omega_uv, self.delta_omega]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidSpectrum("non-finite parameter"));
        }
        if self.amplitude < 0.0 {
            return Err(Error::InvalidSpectrum("negative amplitude"));
        }
        if !(0.0..=core::f64::consts::FRAC_PI_2 + 1e-12).contains(&self.eta) {
            return Err(Error::InvalidSpectrum("power angle outside [0, pi/2]"));
        }
        if !(self.omega_ir > 0.0 && self.omega_ir < self.omega_uv) {
            return Err(Error::InvalidSpectrum("need 0 < omega_ir < omega_uv"));
        }
        if self.delta_omega.is_nan() || self.delta_omega <= 0.0 {
            return Err(Error::InvalidSpectrum("delta_omega must be positive"));
        }
        if self.delta_omega > self.omega_uv - self.omega_ir {
            return Err(Error::InvalidSpectrum("empty noise grid"));
        }
        Ok(())
    }

    /// Fraction of `A^2` carried by a channel of the given axis.
    pub fn power_fraction(&self, axis: Axis) -> Result<f64> {
        let (s, c) = self.eta.sin_cos();
        match axis {
            Axis::X | Axis::Y => Ok(c * c),
            Axis::Z => Ok(s * s),
            Axis::I => Err(Error::InvalidParameter("noise channel on identity axis".into())),
        }
    }

    /// One-sided spectral density of a channel at angular frequency `omega`.
    pub fn density(&self, axis: Axis, omega: f64) -> Result<f64> {
        let p = self.amplitude * self.amplitude * self.power_fraction(axis)?;
        if omega < self.omega_ir || omega > self.omega_uv {
            return Ok(0.0);
        }
        Ok(match self.shape {
            SpectralShape::OneOverF => p / omega,
            SpectralShape::Flat => p / self.omega_uv,
        })
    }

    /// `integral S(w) dw` over `[lo, hi]` for unit power fraction.
    fn unit_cell_power(&self, lo: f64, hi: f64) -> f64 {
        let a2 = self.amplitude * self.amplitude;
        match self.shape {
            SpectralShape::OneOverF => a2 * (hi / lo).ln(),
            SpectralShape::Flat => a2 * (hi - lo) / self.omega_uv,
        }
    }

    /// Total variance of a channel, `integral S(w) dw` over the band.
    pub fn channel_variance(&self, axis: Axis) -> Result<f64> {
        Ok(self.power_fraction(axis)? * self.unit_cell_power(self.omega_ir, self.omega_uv))
    }

    pub fn grid(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::build(self)
    }
}

/// One frequency cell `[lo, hi]` represented by a single tone at `omega`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyCell {
    pub omega: f64,
    pub lo: f64,
    pub hi: f64,
}

impl FrequencyCell {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Hybrid uniform + logarithmic frequency grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyGrid {
    cells: Vec<FrequencyCell>,
    uniform_count: usize,
}

impl FrequencyGrid {
    fn build(spec: &NoiseSpectrum) -> Result<Self> {
        spec.validate()?;
        let dw = spec.delta_omega;
        let floor = spec.omega_ir.max(dw);
        let uniform = ((spec.omega_uv - floor) / dw * (1.0 + 1e-12)).floor().max(0.0) as usize;
        let lowest_uniform_edge = spec.omega_uv - uniform as f64 * dw;
        let decades = (lowest_uniform_edge / spec.omega_ir).log10();
        let log_cells = if decades > 1e-9 {
            (decades * LOG_CELLS_PER_DECADE).ceil() as usize
        } else {
            0
        };
        let total = uniform + log_cells;
        if total > MAX_COMPONENTS {
            return Err(Error::InvalidSpectrum(
                "noise grid exceeds 4096 components; increase delta_omega",
            ));
        }
        let mut cells = Vec::with_capacity(total);
        for k in 0..uniform {
            let hi = spec.omega_uv - k as f64 * dw;
            cells.push(FrequencyCell {
                omega: hi,
                lo: hi - dw,
                hi,
            });
        }
        if log_cells > 0 {
            let ratio = (lowest_uniform_edge / spec.omega_ir).ln() / log_cells as f64;
            for m in 0..log_cells {
                let hi = if m == 0 {
                    lowest_uniform_edge
                } else {
                    lowest_uniform_edge * (-(m as f64) * ratio).exp()
                };
                let lo = if m + 1 == log_cells {
                    spec.omega_ir
                } else {
                    lowest_uniform_edge * (-((m + 1) as f64) * ratio).exp()
                };
                cells.push(FrequencyCell {
                    omega: (lo * hi).sqrt(),
                    lo,
                    hi,
                });
            }
        }
        Ok(Self {
            cells,
            uniform_count: uniform,
        })
    }

    pub fn cells(&self) -> &[FrequencyCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of cells on the uniform `delta_omega` part of the grid.
    pub fn uniform_count(&self) -> usize {
        self.uniform_count
    }
}

/// A noise channel: the Pauli axis it couples through and the physical
/// qubit (0-based) it acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChannelId {
    pub axis: Axis,
    pub qubit: usize,
}

impl ChannelId {
    pub const fn new(axis: Axis, qubit: usize) -> Self {
        Self { axis, qubit }
    }

    pub const fn x(qubit: usize) -> Self {
        Self::new(Axis::X, qubit)
    }

    pub const fn y(qubit: usize) -> Self {
        Self::new(Axis::Y, qubit)
    }

    pub const fn z(qubit: usize) -> Self {
        Self::new(Axis::Z, qubit)
    }

    fn code(&self) -> u64 {
        let axis = match self.axis {
            Axis::I => 0,
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        };
        (axis << 32) | self.qubit as u64
    }
}

impl fmt::Display for ChannelId {
    /// Physicist labelling: `x1` is the x channel of the first qubit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.axis, self.qubit + 1)
    }
}

/// One sampled realization of a channel's noise.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseTrajectory {
    channel: ChannelId,
    omegas: Vec<f64>,
    /// `a_k * dw_k`, the tone amplitude in energy units.
    amplitudes: Vec<f64>,
    phases: Vec<f64>,
}

impl NoiseTrajectory {
    /// Builds a trajectory from explicit tones. Zero-amplitude tones are
    /// dropped.
    pub fn from_tones(channel: ChannelId, tones: impl IntoIterator<Item = (f64, f64, f64)>) -> Self {
        let mut t = Self {
            channel,
            omegas: Vec::new(),
            amplitudes: Vec::new(),
            phases: Vec::new(),
        };
        for (omega, amp, phase) in tones {
            if amp != 0.0 {
                t.omegas.push(omega);
                t.amplitudes.push(amp);
                t.phases.push(phase);
            }
        }
        t
    }

    /// Identically zero noise on a channel.
    pub fn zero(channel: ChannelId) -> Self {
        Self::from_tones(channel, [])
    }

    pub fn channel(&self) -> ChannelId {
        self.channel
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn tones(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.omegas
            .iter()
            .zip(&self.amplitudes)
            .zip(&self.phases)
            .map(|((&w, &a), &p)| (w, a, p))
    }

    /// `V(t)`, summed directly.
    pub fn value(&self, t: f64) -> f64 {
        self.tones().map(|(w, a, p)| a * (w * t + p).cos()).sum()
    }

    /// `V` at `t0 + i h` for `i in 0..n`.
    ///
    /// Short windows (every tone advances at most half a radian) use a Taylor
    /// expansion about the window centre, truncated below double precision;
    /// long windows rotate each tone's phasor step by step and re-anchor it
    /// every 128 steps.
    pub fn sample_uniform(&self, t0: f64, h: f64, n: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; n];
        if n == 0 || self.is_empty() {
            return out;
        }
        let half_span = 0.5 * h * (n - 1) as f64;
        let w_max = self.omegas.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
        if w_max * half_span <= 0.5 {
            self.taylor_fill(t0, h, half_span, w_max, &mut out);
        } else {
            self.rotate_fill(t0, h, &mut out);
        }
        out
    }

    fn taylor_fill(&self, t0: f64, h: f64, r: f64, w_max: f64, out: &mut [f64]) {
        let tc = t0 + r;
        let total: f64 = self.amplitudes.iter().map(|a| a.abs()).sum();
        let x = w_max * r;
        // nu_m = Re sum_k a_k e^{i(w_k tc + phi_k)} (i w_k r)^m / m!
        let mut terms: Vec<num_complex::Complex<f64>> = self
            .tones()
            .map(|(w, a, p)| num_complex::Complex::from_polar(a, w * tc + p))
            .collect();
        let mut coeffs = Vec::new();
        let mut bound = total;
        let mut m = 0usize;
        loop {
            coeffs.push(terms.iter().map(|z| z.re).sum::<f64>());
            m += 1;
            bound *= x / m as f64;
            if bound <= 1e-18 * total || m > 40 {
                break;
            }
            for (z, &w) in terms.iter_mut().zip(&self.omegas) {
                *z *= num_complex::Complex::new(0.0, w * r / m as f64);
            }
        }
        for (i, o) in out.iter_mut().enumerate() {
            let u = if r > 0.0 { (i as f64 * h - r) / r } else { 0.0 };
            *o = coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c);
        }
    }

    fn rotate_fill(&self, t0: f64, h: f64, out: &mut [f64]) {
        const ANCHOR: usize = 128;
        for (w, a, p) in self.tones() {
            let step = num_complex::Complex::from_polar(1.0, w * h);
            let mut i = 0;
            while i < out.len() {
                let mut z = num_complex::Complex::from_polar(a, w * (t0 + i as f64 * h) + p);
                let end = (i + ANCHOR).min(out.len());
                for o in &mut out[i..end] {
                    *o += z.re;
                    z *= step;
                }
                i = end;
            }
        }
    }
}

/// Samples one trajectory of `channel`.
///
/// Tone `k` draws its Gaussian amplitude and uniform phase from its own
/// ChaCha stream keyed by `(seed, channel, k)`, so trajectories are identical
/// however the work is split.
pub fn sample_trajectory(spec: &NoiseSpectrum, channel: ChannelId, seed: u64) -> Result<NoiseTrajectory> {
    let fraction = spec.power_fraction(channel.axis)?;
    let grid = spec.grid()?;
    if fraction == 0.0 || spec.amplitude == 0.0 {
        return Ok(NoiseTrajectory::zero(channel));
    }
    let key = [seed, channel.code()];
    let tones = grid.cells().iter().enumerate().map(|(k, cell)| {
        let power = fraction * spec.unit_cell_power(cell.lo, cell.hi);
        let mut rng = seed::rng_for(&key, k as u64);
        let g = standard_normal(&mut rng);
        let phase = TAU * seed::uniform(&mut rng);
        // a_k dw_k ~ N(0, 2 P_k); the random phase halves the variance back.
        (cell.omega, g * (2.0 * power).sqrt(), phase)
    });
    Ok(NoiseTrajectory::from_tones(channel, tones))
}

/// Box-Muller with a fixed draw count per call.
fn standard_normal(rng: &mut impl rand_core::RngCore) -> f64 {
    let u1 = 1.0 - seed::uniform(rng); // (0, 1]
    let u2 = seed::uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Sampled trajectories for a set of channels, all from one seed.
pub fn sample_channels(spec: &NoiseSpectrum, channels: &[ChannelId], seed: u64) -> Result<Vec<NoiseTrajectory>> {
    for (i, c) in channels.iter().enumerate() {
        if channels[..i].contains(c) {
            return Err(Error::DuplicateChannel(format!("{c}")));
        }
    }
    channels.iter().map(|&c| sample_trajectory(spec, c, seed)).collect()
}
