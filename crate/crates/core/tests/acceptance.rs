//! Acceptance suite. Runs every exit criterion and prints one line each.
//!
//! Built with `harness = false` so the summary is always visible under
//! `cargo test`. The process exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use radiant_core::{
    admissible, classify, dissipation_rate_closed, energy_report, k0zero_reference, mc_oracle,
    reduce, regime_map, spectral_density, spectrum_sweep, trajectory, window, McConfig,
    MirrorDrive, QuadratureConfig, ReducedPoint, RegimeId,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn drive(w0: f64, k0: f64) -> MirrorDrive<f64> {
    MirrorDrive::<f64>::new(w0, k0, 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn conservation() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for k0 in [0.6, 0.4, 0.2, 0.0] {
        let d = drive(1.0, k0);
        let rep = energy_report(&d, &cfg).unwrap();
        let closed = (1.0 - k0 * k0).powf(2.5) / (720.0 * PI * PI);
        let mismatch = rel(rep.r_numeric, closed);
        pass &= mismatch <= 5e-3 && rel(dissipation_rate_closed(&d), closed) < 1e-14;
        parts.push(format!("k0={k0}: {mismatch:.2e}"));
    }
    Outcome::new(pass, format!("|R-Rc|/Rc {}", parts.join(", ")))
}

fn photon_number() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for k0 in [0.6, 0.4, 0.2, 0.0] {
        let rep = energy_report(&drive(1.0, k0), &cfg).unwrap();
        let closed = (1.0 - k0 * k0).powf(2.5) / (360.0 * PI * PI);
        let mismatch = rel(rep.n_rate_numeric, closed);
        let gap = (rep.r_numeric - 0.5 * rep.n_rate_numeric).abs();
        let budget = rep.r_numeric_error + 0.5 * rep.n_rate_numeric_error;
        pass &= mismatch <= 5e-3 && gap <= budget && rel(rep.n_rate, closed) < 1e-14;
        parts.push(format!(
            "k0={k0}: {mismatch:.2e} (R-w0N/2 {gap:.1e} <= {budget:.1e})"
        ));
    }
    Outcome::new(pass, parts.join(", "))
}

fn symmetry_and_peak() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut pass = true;
    let mut peaks = Vec::new();
    let mut parts = Vec::new();
    for k0 in [0.6, 0.4, 0.2, 0.0] {
        let curve = spectrum_sweep(&drive(1.0, k0), 101, &cfg).unwrap();
        let defect = curve.symmetry_defect() / curve.max_value();
        let peak = curve.peak_index().unwrap();
        pass &= defect <= 1e-3 && peak == 50 && (curve.samples[50].omega - 0.5).abs() < 1e-15;
        peaks.push(curve.max_value());
        parts.push(format!("k0={k0}: defect {defect:.1e} argmax {peak}"));
    }
    let increasing = peaks.windows(2).all(|w| w[0] < w[1]);
    pass &= increasing;
    Outcome::new(
        pass,
        format!("{}; peaks increasing: {increasing}", parts.join(", ")),
    )
}

fn no_radiation() -> Outcome {
    let cfg = QuadratureConfig::default();
    let d = drive(0.5, 1.0);
    let curve = spectrum_sweep(&d, 101, &cfg).unwrap();
    let zeros = curve
        .samples
        .iter()
        .filter(|s| s.value == 0.0 && s.error == 0.0)
        .count();
    let rep = energy_report(&d, &cfg).unwrap();
    let pass = zeros == curve.samples.len() && rep.r_numeric == 0.0 && rep.n_rate_numeric == 0.0;
    Outcome::new(
        pass,
        format!(
            "{zeros}/{} exact zeros, R_numeric = {:?}",
            curve.samples.len(),
            rep.r_numeric
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let cfg = QuadratureConfig::default();
    let cases = [
        (0.6, 0.9, RegimeId::R1, 101),
        (0.6, 0.7, RegimeId::R2, 102),
        (0.6, 0.3, RegimeId::R3, 103),
        (0.6, 0.1, RegimeId::R4, 104),
        (0.6, 0.5, RegimeId::R6, 105),
        (0.2, 0.7, RegimeId::R7, 106),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (k0, omega, regime, seed) in cases {
        let d = drive(1.0, k0);
        let got = classify(&reduce(&d, omega).unwrap().unwrap());
        let q = spectral_density(&d, omega, &cfg).unwrap().value;
        let mc = mc_oracle(&d, omega, &McConfig::new(1_000_000, seed).unwrap()).unwrap();
        let z = mc.z_score(q);
        pass &= got == regime && z <= 3.0;
        parts.push(format!("{regime}: z={z:.2}"));
    }
    Outcome::new(pass, parts.join(", "))
}

fn k0_zero_limit() -> Outcome {
    let cfg = QuadratureConfig::default();
    let d = drive(1.0, 0.0);
    let mut pass = true;
    let mut parts = Vec::new();
    for omega in [0.25, 0.5, 0.75] {
        let two = spectral_density(&d, omega, &cfg).unwrap().value;
        let one = k0zero_reference(&d, omega).unwrap();
        let e = rel(two, one);
        pass &= e <= 1e-6;
        parts.push(format!("{omega}: {e:.1e}"));

        // the window is the polar cap theta < arcsin(min(r, 1)) at every azimuth
        let p = reduce(&d, omega).unwrap().unwrap();
        let cap = p.r().min(1.0).asin();
        let w = window(&p);
        let mut bad = 0;
        for i in 0..=360 {
            let phi = -PI + 2.0 * PI * i as f64 / 360.0;
            match w.bounds_at(phi) {
                Some((lo, hi)) if lo == 0.0 && (hi - cap).abs() < 1e-12 => {}
                _ => bad += 1,
            }
            for j in 0..=200 {
                let theta = FRAC_PI_2 * j as f64 / 200.0;
                if (theta - cap).abs() < 1e-9 {
                    continue;
                }
                if admissible(&d, omega, theta, phi) != (theta < cap) {
                    bad += 1;
                }
            }
        }
        pass &= bad == 0;
    }
    Outcome::new(
        pass,
        format!("2-D vs 1-D {}; cap window verified", parts.join(", ")),
    )
}

/// Polar edges of the admissible set at `phi`, found by scanning the
/// predicate on a fine grid and bisecting the first and last transitions.
fn scan_theta_edges(d: &MirrorDrive<f64>, omega: f64, phi: f64) -> Option<(f64, f64)> {
    let n = 157_080;
    let h = FRAC_PI_2 / n as f64;
    let hit = |t: f64| admissible(d, omega, t, phi);
    let first = (0..=n).find(|&i| hit(i as f64 * h))?;
    let last = (0..=n).rev().find(|&i| hit(i as f64 * h))?;
    let refine = |mut inside: f64, mut outside: f64| {
        for _ in 0..60 {
            let mid = 0.5 * (inside + outside);
            if hit(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    let lo = if first == 0 {
        0.0
    } else {
        refine(first as f64 * h, (first - 1) as f64 * h)
    };
    let hi = if last == n {
        FRAC_PI_2
    } else {
        refine(last as f64 * h, (last + 1) as f64 * h)
    };
    Some((lo, hi))
}

fn beam_collimation() -> Outcome {
    let (k0, omega) = (0.2, 0.99);
    let d = drive(1.0, k0);
    let p = reduce(&d, omega).unwrap().unwrap();
    let (r, kappa) = (p.r(), p.kappa());

    let (lo, hi) = scan_theta_edges(&d, omega, 0.0).unwrap();
    let (mut inside, mut outside) = (0.0, PI);
    for _ in 0..50 {
        let mid = 0.5 * (inside + outside);
        if scan_theta_edges(&d, omega, mid).is_some() {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    let half_scan = 0.5 * (inside + outside);

    let centre = 0.5 * (lo + hi);
    let beam = (k0 / 1.0f64).asin();
    let width = (kappa + r).asin() - (kappa - r).asin();
    let half = (r / kappa).asin();
    let w = window(&p);
    let (wlo, whi) = w.bounds_at(0.0).unwrap();
    let wphi = w.phi_max().unwrap();

    let centre_ok = (centre - beam).abs() <= 1e-3;
    let width_ok = ((hi - lo) - width).abs() <= 1e-4 && ((whi - wlo) - (hi - lo)).abs() <= 1e-4;
    let half_ok = (half_scan - half).abs() <= 1e-4 && (wphi - half_scan).abs() <= 1e-4;
    Outcome::new(
        centre_ok && width_ok && half_ok,
        format!(
            "centre {centre:.6} vs arcsin(0.2) {beam:.6} (off {:.2e}, arcsin(kappa) off {:.1e}); \
             width {:.3e} (scan-formula {:.1e}); half-width {half_scan:.6} (scan-formula {:.1e})",
            centre - beam,
            centre - kappa.asin(),
            hi - lo,
            (hi - lo) - width,
            half_scan - half,
        ),
    )
}

/// Regime from the open inequalities; `None` on a boundary.
fn strict_regime(r: f64, k: f64) -> Option<RegimeId> {
    let one = 1.0;
    let hits = [
        (k < one && r < one - k && r < k, RegimeId::R1),
        (k < one && one - k < r && r < k, RegimeId::R2),
        (r > one - k && k < r && r < k + one, RegimeId::R3),
        (r > one + k, RegimeId::R4),
        (k > one && r < k - one, RegimeId::R5),
        (k > one && k - one < r && r < k, RegimeId::R6),
        (k < one && k < r && r < one - k, RegimeId::R7),
    ];
    let matched: Vec<_> = hits.iter().filter(|h| h.0).map(|h| h.1).collect();
    match matched.as_slice() {
        [one] => Some(*one),
        _ => None,
    }
}

fn regime_map_and_trajectories() -> Outcome {
    let grid = 200;
    let cells = regime_map(3.0, 3.0, grid).unwrap();
    let mut checked = 0;
    let mut wrong = 0;
    for c in &cells {
        if c.r == 0.0 {
            continue;
        }
        if let Some(want) = strict_regime(c.r, c.kappa) {
            checked += 1;
            wrong += usize::from(c.regime != want);
        }
    }
    // neighbouring cells with different labels straddle a partition line
    let lines = |c: &radiant_core::RegimeCell<f64>| {
        [
            c.r - c.kappa - 1.0,
            c.r - c.kappa + 1.0,
            c.r - c.kappa,
            c.r + c.kappa - 1.0,
            c.kappa - 1.0,
        ]
    };
    let mut unexplained = 0;
    for i in 0..grid {
        for j in 1..grid {
            let a = &cells[i * grid + j];
            let mut next = Vec::new();
            if i + 1 < grid {
                next.push(&cells[(i + 1) * grid + j]);
            }
            if j + 1 < grid {
                next.push(&cells[i * grid + j + 1]);
            }
            for b in next {
                if a.regime != b.regime {
                    let crosses = lines(a).iter().zip(lines(b)).any(|(x, y)| x * y <= 0.0);
                    unexplained += usize::from(!crosses);
                }
            }
        }
    }
    let map_ok = wrong == 0 && unexplained == 0 && checked > 0;

    use RegimeId::*;
    let expected: [(f64, &[RegimeId], &[f64]); 3] = [
        (0.6, &[R4, R3, R6, R2, R1], &[0.2, 0.4, 0.6, 0.8]),
        (0.4, &[R4, R3, R2, R1], &[0.3, 0.6, 0.7]),
        (0.2, &[R4, R3, R7, R1], &[0.4, 0.6, 0.8]),
    ];
    let mut traj_ok = true;
    let mut worst: f64 = 0.0;
    for (k0, regimes, crossings) in expected {
        let t = trajectory(&drive(1.0, k0));
        traj_ok &= t.regimes() == regimes;
        let got = t.crossings();
        traj_ok &= got.len() == crossings.len();
        for (g, w) in got.iter().zip(crossings) {
            worst = worst.max((g - w).abs());
        }
    }
    traj_ok &= worst <= 1e-10;
    Outcome::new(
        map_ok && traj_ok,
        format!(
            "{checked} interior cells, {wrong} mismatched, {unexplained} unexplained label changes; \
             trajectories {}, worst crossing error {worst:.1e}",
            if traj_ok { "exact" } else { "WRONG" }
        ),
    )
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn window_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let targets = [
        RegimeId::R1,
        RegimeId::R2,
        RegimeId::R3,
        RegimeId::R4,
        RegimeId::R5,
        RegimeId::R6,
        RegimeId::R7,
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for target in targets {
        let mut disagreements = 0;
        let mut banded = 0;
        let mut done = 0;
        while done < 10_000 {
            let (r, kappa) = (4.0 * unit(&mut rng), 4.0 * unit(&mut rng));
            let Ok(p) = ReducedPoint::new(r, kappa) else {
                continue;
            };
            if classify(&p) != target {
                continue;
            }
            // omega0 = 1 maps (r, kappa) back to a drive
            let omega = 1.0 / (1.0 + r);
            let Ok(d) = MirrorDrive::<f64>::new(1.0, kappa * omega, 1.0) else {
                continue;
            };
            let theta = FRAC_PI_2 * unit(&mut rng);
            let phi = PI * (2.0 * unit(&mut rng) - 1.0);
            let w = window(&p);
            let near_theta = [phi, phi - 1e-9, phi + 1e-9].iter().any(|&f| {
                w.bounds_at(f).is_some_and(|(lo, hi)| {
                    (theta - lo).abs() <= 1e-9 || (theta - hi).abs() <= 1e-9
                })
            });
            let near_phi = w
                .intervals()
                .iter()
                .any(|iv| (phi - iv.start).abs() <= 1e-9 || (phi - iv.end).abs() <= 1e-9);
            done += 1;
            if near_theta || near_phi {
                banded += 1;
                continue;
            }
            if w.contains(theta, phi) != admissible(&d, omega, theta, phi) {
                disagreements += 1;
            }
        }
        pass &= disagreements == 0;
        parts.push(format!("{target}: {disagreements} ({banded} in band)"));
    }
    Outcome::new(pass, format!("disagreements {}", parts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("energy conservation", conservation),
        ("photon-number identity", photon_number),
        ("spectrum symmetry and peak", symmetry_and_peak),
        ("no-radiation regime", no_radiation),
        ("oracle equivalence", oracle_equivalence),
        ("k0 = 0 limit", k0_zero_limit),
        ("beam collimation", beam_collimation),
        ("regime map and trajectories", regime_map_and_trajectories),
        ("window-inequality equivalence", window_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!(
            "[{tag}] {} {name} ({:.1}s): {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
