//! Frequency spectra and energy bookkeeping.
//!
//! `P(Omega)` is the angular power integrated over the emission window with
//! measure `d(cos theta) d(phi)`. The azimuthal integral runs over the window
//! support (cut at `phi_c` and `phi_max`), the polar one between the analytic
//! bounds; both use the square-root edge substitution from [`crate::quadrature`].

use rayon::prelude::*;
use serde::Serialize;

use crate::kinematics::{
    classify, reduce, theta_bounds, trajectory, window, MirrorDrive, RegimeId,
};
use crate::quadrature::{integrate, integrate_scalar, tanh_sinh, QuadratureConfig};
use crate::radiance::{angular_power_mono, DeformationSpectrum, EmissionQuery};
use crate::real::Real;
use crate::{Error, Result};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Inner integrations run this much tighter than the enclosing one.
const INNER_TIGHTENING: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralDensity<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

impl<T: Real> SpectralDensity<T> {
    fn zero() -> Self {
        Self {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        }
    }

    /// Whether the error estimate honours the requested tolerance.
    pub fn within(&self, cfg: &QuadratureConfig<T>) -> bool {
        self.error <= cfg.target(self.value)
    }
}

/// Photons per unit time, area and frequency at `omega`.
///
/// Returns an exact zero whenever the window is empty, including
/// `omega >= omega0` and drives with `omega0 <= k0`.
pub fn spectral_density<T: Real>(
    drive: &MirrorDrive<T>,
    omega: T,
    cfg: &QuadratureConfig<T>,
) -> Result<SpectralDensity<T>> {
    cfg.validate()?;
    let Some(point) = reduce(drive, omega)? else {
        return Ok(SpectralDensity::zero());
    };
    let win = window(&point);
    if win.is_empty() {
        return Ok(SpectralDensity::zero());
    }

    // the window is symmetric in phi; integrate phi >= 0 and double
    let mut cuts: Vec<T> = Vec::new();
    for iv in win.intervals() {
        if iv.end > T::zero() {
            cuts.push(iv.start.max(T::zero()));
            cuts.push(iv.end);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite azimuth"));
    cuts.dedup();

    let inner_cfg = cfg.tightened(T::lit(INNER_TIGHTENING));
    let mut evaluations = 0usize;
    let outer = integrate(
        |phi: T| {
            let Some((lo, hi)) = theta_bounds(&point, phi) else {
                return ([T::zero()], [T::zero()]);
            };
            let inner = integrate_scalar(
                |theta: T| {
                    let q = EmissionQuery::new_unchecked(omega, theta, phi);
                    theta.sin() * angular_power_mono(drive, &q)
                },
                &[lo, hi],
                &inner_cfg,
            );
            evaluations += inner.evaluations;
            (inner.value, inner.error)
        },
        &cuts,
        cfg,
    );
    let two = T::one() + T::one();
    Ok(SpectralDensity {
        value: two * outer.value[0],
        error: two * outer.error[0],
        evaluations,
    })
}

/// `P(Omega)` for an arbitrary deformation spectrum.
///
/// A mode's solid-angle integral does not depend on the direction of its
/// wavevector, so each mode (or tabulated node) maps onto the equivalent
/// single-mode drive.
pub fn spectral_density_general<T: Real>(
    spec: &DeformationSpectrum<T>,
    omega: T,
    cfg: &QuadratureConfig<T>,
) -> Result<SpectralDensity<T>> {
    cfg.validate()?;
    if !(omega > T::zero() && omega.is_finite()) {
        return Err(Error::Domain(format!("Omega must be > 0, got {omega}")));
    }
    let inner_cfg = cfg.tightened(T::lit(INNER_TIGHTENING));
    // (weight, drive) pairs; the weight multiplies a unit-amplitude P(Omega)
    let terms: Vec<(T, MirrorDrive<T>)> = match spec {
        DeformationSpectrum::Modes(modes) => modes
            .iter()
            .map(|m| Ok((T::one(), m.as_drive()?)))
            .collect::<Result<_>>()?,
        DeformationSpectrum::Tabulated(t) => {
            let two = T::one() + T::one();
            let norm = (two * T::PI()).powi(3);
            t.weighted_nodes()
                .into_iter()
                .filter(|(_, w, _)| *w > omega)
                .map(|([a, b], w, ws)| {
                    Ok((two * ws / norm, MirrorDrive::new(w, a.hypot(b), T::one())?))
                })
                .collect::<Result<_>>()?
        }
    };
    let parts: Vec<SpectralDensity<T>> = terms
        .par_iter()
        .map(|(_, d)| spectral_density(d, omega, &inner_cfg))
        .collect::<Result<_>>()?;
    let mut out = SpectralDensity::zero();
    for ((weight, _), part) in terms.iter().zip(parts) {
        out.value = out.value + *weight * part.value;
        out.error = out.error + *weight * part.error;
        out.evaluations += part.evaluations;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumSample<T> {
    pub omega: T,
    pub value: T,
    pub regime: RegimeId,
    pub error: T,
}

/// Sampled spectrum on a grid symmetric about `omega0 / 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumCurve<T> {
    pub drive: MirrorDrive<T>,
    pub samples: Vec<SpectrumSample<T>>,
}

impl<T: Real> SpectrumCurve<T> {
    /// `(Omega / omega0, P / (d^2 omega0^4))` pairs.
    pub fn dimensionless(&self) -> Vec<(T, T)> {
        let w0 = self.drive.omega0();
        let scale = self.drive.d() * self.drive.d() * w0.powi(4);
        self.samples
            .iter()
            .map(|s| (s.omega / w0, s.value / scale))
            .collect()
    }

    pub fn max_value(&self) -> T {
        self.samples.iter().map(|s| s.value).fold(T::zero(), T::max)
    }

    /// Index of the first maximal sample.
    pub fn peak_index(&self) -> Option<usize> {
        let max = self.max_value();
        self.samples.iter().position(|s| s.value == max)
    }

    /// `max |P(Omega_i) - P(omega0 - Omega_i)| / max P`, zero for a dark spectrum.
    pub fn symmetry_defect(&self) -> T {
        let max = self.max_value();
        if max == T::zero() {
            return T::zero();
        }
        let n = self.samples.len();
        (0..n)
            .map(|i| (self.samples[i].value - self.samples[n - 1 - i].value).abs())
            .fold(T::zero(), T::max)
            / max
    }

    /// True when every sample met the tolerance of `cfg`.
    pub fn within(&self, cfg: &QuadratureConfig<T>) -> bool {
        self.samples.iter().all(|s| s.error <= cfg.target(s.value))
    }
}

/// `Omega_i = omega0 i / (n + 1)` for `i = 1..=n`.
pub fn sweep_grid<T: Real>(omega0: T, n_points: usize) -> Vec<T> {
    let denom = T::from_usize_lossy(n_points + 1);
    (1..=n_points)
        .map(|i| omega0 * T::from_usize_lossy(i) / denom)
        .collect()
}

/// Evaluates `P(Omega)` on the symmetric uniform grid of [`sweep_grid`].
/// Points are computed in parallel and returned in grid order.
pub fn spectrum_sweep<T: Real>(
    drive: &MirrorDrive<T>,
    n_points: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<SpectrumCurve<T>> {
    if n_points < 3 {
        return Err(Error::InvalidConfig(format!(
            "need at least 3 points, got {n_points}"
        )));
    }
    cfg.validate()?;
    let samples = sweep_grid(drive.omega0(), n_points)
        .into_par_iter()
        .map(|omega| {
            let sd = spectral_density(drive, omega, cfg)?;
            let regime = reduce(drive, omega)?
                .map(|p| classify(&p))
                .unwrap_or(RegimeId::NoEmission);
            Ok(SpectrumSample {
                omega,
                value: sd.value,
                regime,
                error: sd.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumCurve {
        drive: *drive,
        samples,
    })
}

/// `d^2 omega0 (omega0^2 - k0^2)^{5/2} / (720 pi^2)`, zero without radiation.
pub fn dissipation_rate_closed<T: Real>(drive: &MirrorDrive<T>) -> T {
    let two = T::one() + T::one();
    photon_rate_closed(drive) * drive.omega0() / two
}

/// `d^2 (omega0^2 - k0^2)^{5/2} / (360 pi^2)`, zero without radiation.
pub fn photon_rate_closed<T: Real>(drive: &MirrorDrive<T>) -> T {
    if !drive.radiates() {
        return T::zero();
    }
    let (w0, k0, d) = (drive.omega0(), drive.k0(), drive.d());
    let base = w0 * w0 - k0 * k0;
    d * d * base * base * base.sqrt() / (T::lit(360.0) * T::PI() * T::PI())
}

/// Photon count over area `area` (m^2) and time `duration` (s) for a drive
/// given in SI units: `d` in m, `omega0` in rad/s, `k0` in rad/m.
pub fn photon_count_si(d: f64, omega0: f64, k0: f64, area: f64, duration: f64) -> f64 {
    let c = SPEED_OF_LIGHT;
    let base = (omega0 / c).powi(2) - k0 * k0;
    if base <= 0.0 {
        return 0.0;
    }
    d * d * c * duration * area / (360.0 * std::f64::consts::PI.powi(2)) * base.powf(2.5)
}

/// Integrated energy and photon rates against their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport<T> {
    /// `integral Omega P(Omega) dOmega`.
    pub r_numeric: T,
    pub r_numeric_error: T,
    pub r_closed: T,
    /// Closed-form photon rate per unit area.
    pub n_rate: T,
    /// `integral P(Omega) dOmega`.
    pub n_rate_numeric: T,
    pub n_rate_numeric_error: T,
    pub mean_frequency: T,
    pub relative_mismatch: T,
    pub converged: bool,
}

impl<T: Real> EnergyReport<T> {
    /// `|N_numeric - N_closed| / N_closed`, zero when both vanish.
    pub fn photon_mismatch(&self) -> T {
        relative(self.n_rate_numeric, self.n_rate)
    }
}

fn relative<T: Real>(got: T, want: T) -> T {
    if want == T::zero() {
        if got == T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    } else {
        (got - want).abs() / want.abs()
    }
}

/// Integrates `P(Omega)` and `Omega P(Omega)` over `(0, omega0)` in one pass,
/// with breakpoints at the regime crossings of the drive.
pub fn energy_report<T: Real>(
    drive: &MirrorDrive<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<EnergyReport<T>> {
    cfg.validate()?;
    let r_closed = dissipation_rate_closed(drive);
    let n_rate = photon_rate_closed(drive);
    if !drive.radiates() {
        return Ok(EnergyReport {
            r_numeric: T::zero(),
            r_numeric_error: T::zero(),
            r_closed,
            n_rate,
            n_rate_numeric: T::zero(),
            n_rate_numeric_error: T::zero(),
            mean_frequency: T::zero(),
            relative_mismatch: T::zero(),
            converged: true,
        });
    }

    let mut cuts = vec![T::zero()];
    cuts.extend(trajectory(drive).crossings());
    cuts.push(drive.omega0());

    let inner_cfg = cfg.tightened(T::lit(INNER_TIGHTENING));
    let outer = integrate(
        |omega: T| match spectral_density(drive, omega, &inner_cfg) {
            Ok(sd) => ([sd.value, omega * sd.value], [sd.error, omega * sd.error]),
            Err(_) => ([T::zero(); 2], [T::zero(); 2]),
        },
        &cuts,
        cfg,
    );
    let [n_num, r_num] = outer.value;
    let mean_frequency = if n_num > T::zero() {
        r_num / n_num
    } else {
        T::zero()
    };
    Ok(EnergyReport {
        r_numeric: r_num,
        r_numeric_error: outer.error[1],
        r_closed,
        n_rate,
        n_rate_numeric: n_num,
        n_rate_numeric_error: outer.error[0],
        mean_frequency,
        relative_mismatch: relative(r_num, r_closed),
        converged: outer.converged,
    })
}

/// `P(Omega)` for `k0 = 0` from the one-dimensional reduction
///
/// ```text
/// P = (d^2 Omega^4 / 2 pi^2) integral mu^2 sqrt(mu^2 - (1 - r^2)) dmu,
/// mu in (max(0, sqrt(1 - r^2)), 1]
/// ```
///
/// evaluated with tanh-sinh, independently of the window construction.
pub fn k0zero_reference<T: Real>(drive: &MirrorDrive<T>, omega: T) -> Result<T> {
    if drive.k0() != T::zero() {
        return Err(Error::Domain(format!(
            "k0 = 0 reference needs k0 = 0, got {}",
            drive.k0()
        )));
    }
    if !(omega > T::zero() && omega.is_finite()) {
        return Err(Error::Domain(format!("Omega must be > 0, got {omega}")));
    }
    let w0 = drive.omega0();
    if omega >= w0 {
        return Ok(T::zero());
    }
    let r = (w0 - omega) / omega;
    let c = T::one() - r * r;
    let lo = if c > T::zero() { c.sqrt() } else { T::zero() };
    let (integral, _) = tanh_sinh(
        |mu: T| {
            // mu^2 - c factored to keep precision near the lower edge
            let rad = (mu - lo) * (mu + lo) + (lo * lo - c);
            mu * mu * rad.max(T::zero()).sqrt()
        },
        lo,
        T::one(),
        T::lit(1e-13).max(T::epsilon() * T::lit(16.0)),
        14,
    );
    let two = T::one() + T::one();
    let d = drive.d();
    Ok(d * d * omega.powi(4) / (two * T::PI() * T::PI()) * integral)
}
