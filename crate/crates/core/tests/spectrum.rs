//! Spectral densities against frozen reference values.
//!
//! The references were computed outside this crate with nested adaptive
//! quadrature (QUADPACK via scipy, relative tolerance 1e-11) directly on the
//! emission inequality, and with an independent NumPy Monte Carlo run at 1e7
//! samples. Neither path shares code with the library.

use radiant_core::{
    energy_report, mc_oracle, spectral_density, spectral_density_general, spectrum_sweep,
    DeformationSpectrum, McConfig, MirrorDrive, Mode, QuadratureConfig, RegimeId, TabulatedDensity,
};

fn drive(w0: f64, k0: f64) -> MirrorDrive<f64> {
    MirrorDrive::<f64>::new(w0, k0, 1.0).unwrap()
}

/// (k0, Omega, P) with omega0 = d = 1.
const SCIPY_REFERENCE: [(f64, f64, f64); 10] = [
    (0.6, 0.9, 1.1256808580784414e-05),
    (0.6, 0.7, 1.2864404616846935e-04),
    (0.6, 0.3, 1.2864404616846925e-04),
    (0.6, 0.1, 1.125680858078437e-05),
    (0.6, 0.5, 1.7746185928047887e-04),
    (0.2, 0.7, 2.9258324696917017e-04),
    (0.2, 0.5, 6.473720931383217e-04),
    (0.0, 0.25, 1.9342278821881862e-04),
    (0.0, 0.5, 7.915717472057641e-04),
    (0.0, 0.75, 1.934227882188186e-04),
];

/// NumPy Monte Carlo, 1e7 samples: (estimate, standard error) at
/// omega0 = 1, k0 = 0.2, d = 1, Omega = 0.5.
const MC_GOLDEN: (f64, f64) = (6.474512590145522e-04, 2.719016745437797e-07);

#[test]
fn matches_independent_quadrature() {
    let cfg = QuadratureConfig::default();
    for (k0, omega, want) in SCIPY_REFERENCE {
        let got = spectral_density(&drive(1.0, k0), omega, &cfg).unwrap();
        let rel = ((got.value - want) / want).abs();
        assert!(
            rel < 1e-6,
            "k0={k0} Omega={omega}: {} vs {want} (rel {rel:e})",
            got.value
        );
        assert!(got.within(&cfg), "error estimate {} too large", got.error);
        assert!(got.error >= 0.0);
    }
}

#[test]
fn golden_mc_band() {
    let got = spectral_density(&drive(1.0, 0.2), 0.5, &QuadratureConfig::default()).unwrap();
    let (mean, se) = MC_GOLDEN;
    assert!(
        (got.value - mean).abs() <= 3.0 * se,
        "{} outside {mean} +- {}",
        got.value,
        3.0 * se
    );
}

#[test]
fn library_oracle_agrees_with_quadrature() {
    let cfg = QuadratureConfig::default();
    let mc = McConfig::new(1_000_000, 42).unwrap();
    for (k0, omega) in [(0.6, 0.9), (0.2, 0.7), (0.0, 0.5)] {
        let d = drive(1.0, k0);
        let q = spectral_density(&d, omega, &cfg).unwrap().value;
        let e = mc_oracle(&d, omega, &mc).unwrap();
        assert!(
            e.z_score(q) < 3.0,
            "k0={k0} Omega={omega}: z={}",
            e.z_score(q)
        );
    }
}

#[test]
fn scales_with_amplitude_squared() {
    let cfg = QuadratureConfig::default();
    let a = spectral_density(
        &MirrorDrive::<f64>::new(1.0, 0.4, 0.01).unwrap(),
        0.45,
        &cfg,
    )
    .unwrap();
    let b = spectral_density(
        &MirrorDrive::<f64>::new(1.0, 0.4, 0.02).unwrap(),
        0.45,
        &cfg,
    )
    .unwrap();
    assert!((b.value / a.value - 4.0).abs() < 1e-12);
}

#[test]
fn dimensionless_spectrum_is_scale_free() {
    let cfg = QuadratureConfig::default();
    let a = spectrum_sweep(&MirrorDrive::<f64>::new(1.0, 0.4, 1.0).unwrap(), 5, &cfg).unwrap();
    let b = spectrum_sweep(&MirrorDrive::<f64>::new(2.0, 0.8, 0.5).unwrap(), 5, &cfg).unwrap();
    for ((x1, y1), (x2, y2)) in a.dimensionless().into_iter().zip(b.dimensionless()) {
        assert!((x1 - x2).abs() < 1e-15);
        assert!(((y1 - y2) / y1).abs() < 1e-6, "{y1} vs {y2}");
    }
}

#[test]
fn sweep_regimes_and_dark_drive() {
    let cfg = QuadratureConfig::default();
    let curve = spectrum_sweep(&drive(1.0, 0.6), 9, &cfg).unwrap();
    let regimes: Vec<_> = curve.samples.iter().map(|s| s.regime).collect();
    assert_eq!(regimes[0], RegimeId::R4);
    assert_eq!(regimes[4], RegimeId::R6);
    assert_eq!(regimes[8], RegimeId::R1);

    let dark = spectrum_sweep(&drive(0.5, 1.0), 11, &cfg).unwrap();
    assert!(dark
        .samples
        .iter()
        .all(|s| s.value == 0.0 && s.error == 0.0));
    assert_eq!(dark.symmetry_defect(), 0.0);
}

#[test]
fn endpoints_vanish_monotonically() {
    let cfg = QuadratureConfig::default();
    for k0 in [0.6, 0.4, 0.2, 0.0] {
        let curve = spectrum_sweep(&drive(1.0, k0), 41, &cfg).unwrap();
        let p: Vec<f64> = curve.samples.iter().map(|s| s.value).collect();
        for i in 0..4 {
            assert!(p[i] < p[i + 1], "k0={k0}: rising edge at {i}");
            assert!(p[40 - i] < p[39 - i], "k0={k0}: falling edge at {i}");
        }
        assert!(p[0] < 1e-3 * curve.max_value());
    }
}

#[test]
fn continuity_across_class_one_crossings() {
    let cfg = QuadratureConfig::default();
    let d = drive(1.0, 0.6);
    let max = spectrum_sweep(&d, 101, &cfg).unwrap().max_value();
    for b in [0.2, 0.4, 0.6, 0.8] {
        let hi = spectral_density(&d, b + 1e-3, &cfg).unwrap().value;
        let lo = spectral_density(&d, b - 1e-3, &cfg).unwrap().value;
        assert!((hi - lo).abs() <= 1e-2 * max, "jump at {b}: {lo} -> {hi}");
    }
}

#[test]
fn energy_report_invariants() {
    let cfg = QuadratureConfig::default();
    for k0 in [0.6, 0.0] {
        let rep = energy_report(&drive(1.0, k0), &cfg).unwrap();
        assert!(rep.converged);
        assert!(rep.relative_mismatch <= 5e-3);
        assert!((rep.mean_frequency - 0.5).abs() <= 1e-3);
        let rate_gap = (rep.r_numeric - 0.5 * rep.n_rate_numeric).abs();
        assert!(
            rate_gap <= rep.r_numeric_error + 0.5 * rep.n_rate_numeric_error,
            "{rate_gap:e} vs {:e}",
            rep.r_numeric_error + 0.5 * rep.n_rate_numeric_error
        );
    }
    let dark = energy_report(&drive(0.5, 1.0), &cfg).unwrap();
    assert_eq!(
        (
            dark.r_numeric,
            dark.r_closed,
            dark.n_rate,
            dark.n_rate_numeric,
            dark.mean_frequency
        ),
        (0.0, 0.0, 0.0, 0.0, 0.0)
    );
}

#[test]
fn general_modes_reduce_to_single_drive() {
    let cfg = QuadratureConfig::default();
    // rotated wavevector: same |q|
    let m = Mode {
        amplitude: 0.5,
        wavevector: [0.12, 0.16],
        frequency: 1.0,
    };
    let spec = DeformationSpectrum::<f64>::modes(vec![m]).unwrap();
    let got = spectral_density_general(&spec, 0.5, &cfg).unwrap().value;
    let want = spectral_density(&MirrorDrive::<f64>::new(1.0, 0.2, 0.5).unwrap(), 0.5, &cfg)
        .unwrap()
        .value;
    assert!(((got - want) / want).abs() < 1e-6);
}

#[test]
fn general_tabulated_bump_approaches_mode() {
    let cfg = QuadratureConfig {
        rel_tol: 1e-5,
        ..Default::default()
    };
    let sigma = 0.01;
    let n = 9;
    let axis = |c: f64| -> Vec<f64> {
        (0..n)
            .map(|i| c - 4.0 * sigma + 8.0 * sigma * i as f64 / (n - 1) as f64)
            .collect()
    };
    let (a1, a2, a3) = (axis(0.2), axis(0.0), axis(1.0));
    let tau = 2.0 * std::f64::consts::PI;
    let norm = 0.5 * tau.powi(3) / (tau * sigma * sigma).powf(1.5);
    let g = |x: f64, c: f64| (-(x - c).powi(2) / (2.0 * sigma * sigma)).exp();
    let mut dens = Vec::new();
    for &x in &a1 {
        for &y in &a2 {
            for &w in &a3 {
                dens.push(norm * g(x, 0.2) * g(y, 0.0) * g(w, 1.0));
            }
        }
    }
    let spec = DeformationSpectrum::tabulated(TabulatedDensity::new(a1, a2, a3, dens).unwrap());
    let got = spectral_density_general(&spec, 0.5, &cfg).unwrap().value;
    let want = 6.473720931383217e-4;
    assert!(((got - want) / want).abs() < 5e-3, "{got} vs {want}");
}

#[test]
fn near_cutoff_is_scale_free() {
    // P scales as w^2 at fixed Omega/omega0 when d = 1/w
    let cfg = QuadratureConfig::default();
    let at = |w: f64| {
        let d = MirrorDrive::<f64>::new(w, 0.6 * w, 1.0 / w).unwrap();
        spectral_density(&d, 0.9999995 * w, &cfg).unwrap()
    };
    let base = at(1.0);
    for w in [1e3, 1e6] {
        let s = at(w);
        assert!(
            rel_eq(s.value / (w * w), base.value, 1e-6),
            "{w}: {} vs {}",
            s.value / (w * w),
            base.value
        );
        assert!(s.within(&cfg));
        assert!(
            s.evaluations <= 2 * base.evaluations,
            "{w}: {} evaluations",
            s.evaluations
        );
    }
}

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    ((a - b) / b).abs() <= tol
}
