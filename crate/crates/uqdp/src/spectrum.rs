//! Ensemble periodograms of sampled noise, for checking the generator
//! against its target spectrum.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use uqdp_core::analysis::MIN_TRAJECTORIES;
use uqdp_core::noise::NoiseTrajectory;
use uqdp_core::{Error, Result};

/// Uniform sampling grid `t_i = t0 + i dt`, `i < samples`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn span(&self) -> f64 {
        self.dt * self.samples as f64
    }

    /// Checks that the grid resolves `omega_uv` and spans ten of its periods.
    pub fn check(&self, omega_uv: f64) -> Result<()> {
        if self.dt.is_nan() || self.dt <= 0.0 || self.samples < 2 {
            return Err(Error::InvalidParameter("empty time grid".into()));
        }
        if self.dt > PI / omega_uv {
            return Err(Error::InvalidParameter(format!(
                "time step {} s does not resolve omega_uv = {omega_uv} rad/s",
                self.dt
            )));
        }
        if self.span() < 10.0 * 2.0 * PI / omega_uv {
            return Err(Error::InvalidParameter(format!(
                "time grid spans {} s, shorter than ten periods of omega_uv",
                self.span()
            )));
        }
        Ok(())
    }
}

/// One-sided power spectral density in angular frequency, averaged over an
/// ensemble and over logarithmic bins. With this normalization
/// `Var V = int_0^inf S(w) dw`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSpectrum {
    /// Geometric bin centres (rad/s).
    pub omegas: Vec<f64>,
    /// Mean PSD in each bin (energy^2 s / rad).
    pub power: Vec<f64>,
    /// Number of FFT frequencies in each bin.
    pub counts: Vec<usize>,
    /// Total sample variance over the ensemble (DC removed).
    pub variance: f64,
}

/// Hann-windowed periodogram of every trajectory on `grid`, averaged and
/// collected into `bins_per_decade` logarithmic bins.
pub fn empirical_spectrum(
    trajectories: &[NoiseTrajectory],
    grid: &TimeGrid,
    omega_uv: f64,
    bins_per_decade: usize,
) -> Result<EmpiricalSpectrum> {
    if trajectories.len() < MIN_TRAJECTORIES {
        return Err(Error::TooFewTrajectories {
            got: trajectories.len(),
            need: MIN_TRAJECTORIES,
        });
    }
    grid.check(omega_uv)?;
    let n = grid.samples;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let window: Vec<f64> = (0..n).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos()).collect();
    let w2: f64 = window.iter().map(|w| w * w).sum::<f64>() / n as f64;

    let half = n / 2;
    let mut acc = vec![0.0; half + 1];
    let mut variance = 0.0;
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    for tr in trajectories {
        let v = tr.sample_uniform(grid.t0, grid.dt, n);
        let mean = v.iter().sum::<f64>() / n as f64;
        variance += v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        for ((b, x), w) in buf.iter_mut().zip(&v).zip(&window) {
            *b = Complex::new((x - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }
    let m = trajectories.len() as f64;
    // |X_k|^2 dt / (N w2) is the two-sided PSD per hertz; fold to one side and
    // divide by 2 pi for angular frequency.
    let scale = grid.dt / (n as f64 * w2) / m / PI;
    let d_omega = 2.0 * PI / grid.span();

    let lo = d_omega;
    let hi = half as f64 * d_omega;
    let nbins = ((hi / lo).log10() * bins_per_decade as f64).ceil().max(1.0) as usize;
    let edge = |b: usize| lo * 10f64.powf(b as f64 / bins_per_decade as f64);
    let mut power = vec![0.0; nbins];
    let mut counts = vec![0usize; nbins];
    for (k, a) in acc.iter().enumerate().take(half + 1).skip(1) {
        let w = k as f64 * d_omega;
        let b = (((w / lo).log10() * bins_per_decade as f64).floor() as usize).min(nbins - 1);
        power[b] += a * scale;
        counts[b] += 1;
    }
    let mut out = EmpiricalSpectrum {
        omegas: Vec::new(),
        power: Vec::new(),
        counts: Vec::new(),
        variance: variance / m,
    };
    for b in 0..nbins {
        if counts[b] > 0 {
            out.omegas.push((edge(b) * edge(b + 1)).sqrt());
            out.power.push(power[b] / counts[b] as f64);
            out.counts.push(counts[b]);
        }
    }
    Ok(out)
}

/// Least-squares line through `(log10 w, log10 S)` for bins inside
/// `[lo, hi]`: returns `(slope, standard error)`.
pub fn loglog_slope(spectrum: &EmpiricalSpectrum, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = spectrum
        .omegas
        .iter()
        .zip(&spectrum.power)
        .filter(|(w, p)| **w >= lo && **w <= hi && **p > 0.0)
        .map(|(w, p)| (w.log10(), p.log10()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "only {} spectral bins inside the fit window",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let se = (resid / (n - 2.0) / sxx).sqrt();
    Ok((slope, se))
}
