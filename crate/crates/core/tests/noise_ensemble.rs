use proptest::prelude::*;
use uqdp_core::linalg::Axis;
use uqdp_core::noise::{sample_channels, sample_trajectory, ChannelId, NoiseSpectrum, SpectralShape, MAX_COMPONENTS};
use uqdp_core::seed::trajectory_seed;
use uqdp_core::{ghz, hz};

fn reference(eta: f64) -> NoiseSpectrum {
    NoiseSpectrum::new(2e-4 * ghz(5.0), eta, hz(1.0), hz(1e5), hz(100.0)).unwrap()
}

fn ensemble_at(spec: &NoiseSpectrum, ch: ChannelId, n: usize, t: f64) -> Vec<f64> {
    (0..n)
        .map(|k| sample_trajectory(spec, ch, trajectory_seed(7, k as u64)).unwrap().value(t))
        .collect()
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

#[test]
fn reference_grid_layout() {
    let g = reference(0.3).grid().unwrap();
    assert_eq!(g.uniform_count(), 999);
    assert_eq!(g.len(), 1039);
    assert!((g.cells()[0].hi - hz(1e5)).abs() < 1e-6);
    assert!((g.cells().last().unwrap().lo - hz(1.0)).abs() < 1e-9);
}

#[test]
fn cell_powers_sum_to_the_band_integral() {
    for dw_hz in [1000.0, 100.0, 30.0] {
        let s = NoiseSpectrum::new(1.0, 0.0, hz(1.0), hz(1e5), hz(dw_hz)).unwrap();
        let g = s.grid().unwrap();
        let powers: Vec<f64> = g.cells().iter().map(|c| (c.hi / c.lo).ln()).collect();
        let total: f64 = powers.iter().sum();
        let want = s.channel_variance(Axis::X).unwrap();
        assert!((total - want).abs() < 1e-10 * want, "{dw_hz} Hz: {total} vs {want}");
        // each cell's weight is bracketed by the density at its edges
        for (c, p) in g.cells().iter().zip(&powers) {
            let lo = s.density(Axis::X, c.hi).unwrap() * c.width();
            let hi = s.density(Axis::X, c.lo).unwrap() * c.width();
            assert!(lo <= *p * (1.0 + 1e-12) && *p <= hi * (1.0 + 1e-12));
        }
    }
}

#[test]
fn ensemble_variance_matches_the_spectrum() {
    let s = reference(std::f64::consts::FRAC_PI_4);
    for axis in [Axis::X, Axis::Z] {
        let want = s.channel_variance(axis).unwrap();
        let mut pooled = 0.0;
        for t in [0.0, 0.25, 0.5, 0.75] {
            let (m, v) = mean_var(&ensemble_at(&s, ChannelId::new(axis, 0), 400, t));
            assert!(m.abs() < 4.0 * (v / 400.0).sqrt());
            pooled += v / 4.0;
        }
        assert!((pooled / want - 1.0).abs() < 0.15, "{axis:?}: {pooled:e} vs {want:e}");
    }
}

#[test]
fn same_seed_same_trajectory() {
    let s = reference(0.7);
    let a = sample_trajectory(&s, ChannelId::x(1), 99).unwrap();
    let b = sample_trajectory(&s, ChannelId::x(1), 99).unwrap();
    assert_eq!(a, b);
    let c = sample_trajectory(&s, ChannelId::x(1), 100).unwrap();
    assert_ne!(a, c);
}

#[test]
fn channels_are_uncorrelated() {
    let s = reference(std::f64::consts::FRAC_PI_4);
    let n = 500;
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let tr = sample_channels(&s, &[ChannelId::x(0), ChannelId::z(0)], trajectory_seed(3, k)).unwrap();
            (tr[0].value(0.1), tr[1].value(0.1))
        })
        .collect();
    let (mx, vx) = mean_var(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let (mz, vz) = mean_var(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    let cov = pairs.iter().map(|(x, z)| (x - mx) * (z - mz)).sum::<f64>() / (n as f64 - 1.0);
    let corr = cov / (vx * vz).sqrt();
    assert!(corr.abs() < 0.1, "correlation {corr}");
}

#[test]
fn duplicate_channels_are_rejected() {
    assert!(sample_channels(&reference(0.1), &[ChannelId::z(0), ChannelId::z(0)], 1).is_err());
}

#[test]
fn pure_angles_silence_a_channel() {
    let x_only = reference(0.0);
    assert!(sample_trajectory(&x_only, ChannelId::z(0), 5).unwrap().is_empty());
    let z_only = reference(std::f64::consts::FRAC_PI_2);
    assert_eq!(z_only.power_fraction(Axis::Z).unwrap(), 1.0);
    assert!(z_only.power_fraction(Axis::X).unwrap() < 1e-30);
}

#[test]
fn invalid_spectra() {
    assert!(NoiseSpectrum::new(1.0, 0.0, hz(10.0), hz(1.0), hz(0.1)).is_err());
    assert!(NoiseSpectrum::new(1.0, 0.0, hz(1.0), hz(1e5), hz(2e5)).is_err());
    assert!(NoiseSpectrum::new(1.0, 0.0, hz(1.0), hz(1e5), hz(1.0)).and_then(|s| s.grid()).is_err());
    assert!(NoiseSpectrum::new(-1.0, 0.0, hz(1.0), hz(1e5), hz(100.0)).is_err());
}

#[test]
fn flat_shape_spreads_power_evenly() {
    let s = reference(0.0).with_shape(SpectralShape::Flat);
    let lo = s.density(Axis::X, hz(10.0)).unwrap();
    let hi = s.density(Axis::X, hz(9e4)).unwrap();
    assert_eq!(lo, hi);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn grids_tile_the_band(
        ir in 0.1f64..100.0,
        decades in 1.0f64..6.0,
        cells in 10.0f64..3000.0,
        eta in 0.0f64..std::f64::consts::FRAC_PI_2,
    ) {
        let uv = ir * 10f64.powf(decades);
        let dw = (uv - ir) / cells;
        let s = NoiseSpectrum::new(1.0, eta, ir, uv, dw).unwrap();
        let g = s.grid().unwrap();
        prop_assert!(!g.is_empty() && g.len() <= MAX_COMPONENTS);
        let c = g.cells();
        prop_assert!((c[0].hi - uv).abs() <= 1e-9 * uv);
        prop_assert!((c[c.len() - 1].lo - ir).abs() <= 1e-9 * ir);
        for w in c.windows(2) {
            prop_assert!((w[0].lo - w[1].hi).abs() <= 1e-9 * w[0].lo);
            prop_assert!(w[1].omega < w[0].omega);
        }
        for cell in c {
            prop_assert!(cell.lo < cell.omega && cell.omega <= cell.hi);
        }
        let fx = s.power_fraction(Axis::X).unwrap();
        let fz = s.power_fraction(Axis::Z).unwrap();
        prop_assert!((fx + fz - 1.0).abs() < 1e-15);
    }
}
