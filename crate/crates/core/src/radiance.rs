//! Pointwise radiated-power densities.
//!
//! The kernel couples a detected photon `(Omega, theta, phi)` to one Fourier
//! component `(q, omega)` of the deformation:
//!
//! ```text
//! K = (Omega / 2 pi^3) (Omega^2 - k^2) sqrt((omega - Omega)^2 - |q - k|^2)
//! ```
//!
//! with `k = Omega sin(theta) (cos(phi), sin(phi))`, and zero unless both
//! `omega > Omega` and the radicand is positive. A single cosine mode of
//! amplitude `d` contributes `(d^2 / 2) K` per unit area and time.

use serde::Serialize;

use crate::kinematics::{admissible, transfer_sq, MirrorDrive};
use crate::real::Real;
use crate::{Error, Result};

/// Detected photon frequency and direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmissionQuery<T> {
    omega: T,
    theta: T,
    phi: T,
}

impl<T: Real> EmissionQuery<T> {
    pub fn new(omega: T, theta: T, phi: T) -> Result<Self> {
        if !(omega > T::zero() && omega.is_finite()) {
            return Err(Error::Domain(format!("Omega must be > 0, got {omega}")));
        }
        if !(theta >= T::zero() && theta <= T::FRAC_PI_2()) {
            return Err(Error::Domain(format!(
                "theta must lie in [0, pi/2], got {theta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::Domain(format!("phi must be finite, got {phi}")));
        }
        Ok(Self { omega, theta, phi })
    }

    /// Skips validation; callers guarantee `theta` in `[0, pi/2]`.
    pub(crate) fn new_unchecked(omega: T, theta: T, phi: T) -> Self {
        Self { omega, theta, phi }
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// In-plane photon wavevector `Omega sin(theta) (cos(phi), sin(phi))`.
    pub fn in_plane_wavevector(&self) -> [T; 2] {
        let k = self.omega * self.theta.sin();
        let (s, c) = self.phi.sin_cos();
        [k * c, k * s]
    }

    /// `Omega^2 - |k|^2`, evaluated as `Omega^2 cos^2(theta)`; exactly zero
    /// at grazing emission.
    fn normal_weight(&self) -> T {
        if self.theta >= T::FRAC_PI_2() {
            return T::zero();
        }
        let c = self.theta.cos();
        self.omega * self.omega * c * c
    }
}

fn pi_cubed<T: Real>() -> T {
    T::PI() * T::PI() * T::PI()
}

/// Response kernel for one deformation component `(q, omega)`.
pub fn kernel<T: Real>(query: &EmissionQuery<T>, q: [T; 2], omega: T) -> T {
    let gap = omega - query.omega;
    if !(gap > T::zero()) {
        return T::zero();
    }
    let k = query.in_plane_wavevector();
    let (dx, dy) = (q[0] - k[0], q[1] - k[1]);
    let radicand = gap * gap - dx * dx - dy * dy;
    if !(radicand > T::zero()) {
        return T::zero();
    }
    let two = T::one() + T::one();
    query.omega / (two * pi_cubed::<T>()) * query.normal_weight() * radicand.sqrt()
}

/// Photons per unit time, plate area, frequency and `d(cos theta) d(phi)` for
/// the monochromatic traveling wave.
pub fn angular_power_mono<T: Real>(drive: &MirrorDrive<T>, query: &EmissionQuery<T>) -> T {
    let (omega, theta, phi) = (query.omega, query.theta, query.phi);
    if !admissible(drive, omega, theta, phi) {
        return T::zero();
    }
    let two = T::one() + T::one();
    let gap = drive.omega0() - omega;
    let radicand = gap * gap - transfer_sq(drive.k0(), omega, theta, phi);
    let four = two * two;
    drive.d() * drive.d() * omega / (four * pi_cubed::<T>())
        * query.normal_weight()
        * radicand.max(T::zero()).sqrt()
}

/// One cosine component `amplitude * cos(q . x - frequency t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mode<T> {
    pub amplitude: T,
    pub wavevector: [T; 2],
    pub frequency: T,
}

impl<T: Real> Mode<T> {
    /// The equivalent single-mode drive (wavevector rotated onto `x1`).
    pub fn as_drive(&self) -> Result<MirrorDrive<T>> {
        let [a, b] = self.wavevector;
        MirrorDrive::new(self.frequency, a.hypot(b), self.amplitude)
    }
}

/// Spectral density of the deformation on a rectilinear `(q1, q2, omega)`
/// grid, normalised per unit area and time so that a cosine mode of
/// amplitude `d` carries weight `(d^2 / 2) (2 pi)^3`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedDensity<T> {
    q1: Vec<T>,
    q2: Vec<T>,
    omega: Vec<T>,
    /// Row-major: index `(i * q2.len() + j) * omega.len() + k`.
    density: Vec<T>,
}

fn check_axis<T: Real>(name: &str, axis: &[T]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::InvalidSpectrum(format!(
            "axis {name} needs at least 2 points, got {}",
            axis.len()
        )));
    }
    if axis.iter().any(|x| !x.is_finite()) || axis.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSpectrum(format!(
            "axis {name} must be finite and strictly increasing"
        )));
    }
    Ok(())
}

/// Trapezoid weights of a sorted axis.
fn trapezoid_weights<T: Real>(axis: &[T]) -> Vec<T> {
    let two = T::one() + T::one();
    let n = axis.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 {
                axis[i] - axis[i - 1]
            } else {
                T::zero()
            };
            let right = if i + 1 < n {
                axis[i + 1] - axis[i]
            } else {
                T::zero()
            };
            (left + right) / two
        })
        .collect()
}

/// Index `i` with `axis[i] <= x <= axis[i + 1]` and the fractional offset.
fn locate<T: Real>(axis: &[T], x: T) -> Option<(usize, T)> {
    if !(x >= axis[0] && x <= axis[axis.len() - 1]) {
        return None;
    }
    let i = axis
        .partition_point(|&a| a <= x)
        .saturating_sub(1)
        .min(axis.len() - 2);
    Some((i, (x - axis[i]) / (axis[i + 1] - axis[i])))
}

impl<T: Real> TabulatedDensity<T> {
    pub fn new(q1: Vec<T>, q2: Vec<T>, omega: Vec<T>, density: Vec<T>) -> Result<Self> {
        check_axis("q1", &q1)?;
        check_axis("q2", &q2)?;
        check_axis("omega", &omega)?;
        let expected = q1.len() * q2.len() * omega.len();
        if density.len() != expected {
            return Err(Error::InvalidSpectrum(format!(
                "density has {} values, grid needs {expected}",
                density.len()
            )));
        }
        if density.iter().any(|s| !(s.is_finite() && *s >= T::zero())) {
            return Err(Error::InvalidSpectrum(
                "density values must be finite and >= 0".into(),
            ));
        }
        Ok(Self {
            q1,
            q2,
            omega,
            density,
        })
    }

    /// Builds from a nested `[q1][q2][omega]` array.
    pub fn from_nested(
        q1: Vec<T>,
        q2: Vec<T>,
        omega: Vec<T>,
        nested: Vec<Vec<Vec<T>>>,
    ) -> Result<Self> {
        let shape_ok = nested.len() == q1.len()
            && nested.iter().all(|plane| {
                plane.len() == q2.len() && plane.iter().all(|row| row.len() == omega.len())
            });
        if !shape_ok {
            return Err(Error::InvalidSpectrum(format!(
                "density shape must be [{}][{}][{}]",
                q1.len(),
                q2.len(),
                omega.len()
            )));
        }
        let flat = nested.into_iter().flatten().flatten().collect();
        Self::new(q1, q2, omega, flat)
    }

    pub fn q1_axis(&self) -> &[T] {
        &self.q1
    }

    pub fn q2_axis(&self) -> &[T] {
        &self.q2
    }

    pub fn omega_axis(&self) -> &[T] {
        &self.omega
    }

    fn at(&self, i: usize, j: usize, k: usize) -> T {
        self.density[(i * self.q2.len() + j) * self.omega.len() + k]
    }

    /// Trilinear interpolation; zero outside the grid.
    pub fn value_at(&self, q: [T; 2], omega: T) -> T {
        let (Some((i, fx)), Some((j, fy)), Some((k, fz))) = (
            locate(&self.q1, q[0]),
            locate(&self.q2, q[1]),
            locate(&self.omega, omega),
        ) else {
            return T::zero();
        };
        let mut acc = T::zero();
        for (di, wx) in [(0, T::one() - fx), (1, fx)] {
            for (dj, wy) in [(0, T::one() - fy), (1, fy)] {
                for (dk, wz) in [(0, T::one() - fz), (1, fz)] {
                    acc = acc + wx * wy * wz * self.at(i + di, j + dj, k + dk);
                }
            }
        }
        acc
    }

    /// Grid nodes with nonzero density as `(q, omega, trapezoid weight * density)`.
    pub fn weighted_nodes(&self) -> Vec<([T; 2], T, T)> {
        let (w1, w2, w3) = (
            trapezoid_weights(&self.q1),
            trapezoid_weights(&self.q2),
            trapezoid_weights(&self.omega),
        );
        let mut out = Vec::new();
        for (i, &a) in self.q1.iter().enumerate() {
            for (j, &b) in self.q2.iter().enumerate() {
                for (k, &w) in self.omega.iter().enumerate() {
                    let s = self.at(i, j, k);
                    if s > T::zero() {
                        out.push(([a, b], w, w1[i] * w2[j] * w3[k] * s));
                    }
                }
            }
        }
        out
    }
}

/// General deformation input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DeformationSpectrum<T> {
    Modes(Vec<Mode<T>>),
    Tabulated(TabulatedDensity<T>),
}

impl<T: Real> DeformationSpectrum<T> {
    /// Validated list of distinct positive-frequency modes.
    pub fn modes(modes: Vec<Mode<T>>) -> Result<Self> {
        for m in &modes {
            if !(m.amplitude > T::zero() && m.amplitude.is_finite()) {
                return Err(Error::InvalidSpectrum(format!(
                    "mode amplitude must be > 0, got {}",
                    m.amplitude
                )));
            }
            if !(m.frequency > T::zero() && m.frequency.is_finite()) {
                return Err(Error::InvalidSpectrum(format!(
                    "mode frequency must be > 0, got {}",
                    m.frequency
                )));
            }
            if m.wavevector.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSpectrum(
                    "mode wavevector must be finite".into(),
                ));
            }
        }
        for (i, a) in modes.iter().enumerate() {
            if modes[..i]
                .iter()
                .any(|b| a.wavevector == b.wavevector && a.frequency == b.frequency)
            {
                return Err(Error::InvalidSpectrum(format!(
                    "duplicate mode at q={:?}, omega={}; merge coinciding modes first",
                    a.wavevector, a.frequency
                )));
            }
        }
        Ok(Self::Modes(modes))
    }

    pub fn tabulated(density: TabulatedDensity<T>) -> Self {
        Self::Tabulated(density)
    }

    /// Largest frequency present; photons above it are not emitted.
    pub fn max_frequency(&self) -> T {
        match self {
            Self::Modes(m) => m.iter().map(|m| m.frequency).fold(T::zero(), T::max),
            Self::Tabulated(t) => t.omega[t.omega.len() - 1],
        }
    }
}

/// Angular power for an arbitrary deformation spectrum.
///
/// Modes add incoherently: cross terms between distinct `(q, omega)` have
/// disjoint support and drop out per unit area and time.
pub fn angular_power_general<T: Real>(
    spec: &DeformationSpectrum<T>,
    query: &EmissionQuery<T>,
) -> T {
    let two = T::one() + T::one();
    match spec {
        DeformationSpectrum::Modes(modes) => modes.iter().fold(T::zero(), |acc, m| {
            acc + m.amplitude * m.amplitude / two * kernel(query, m.wavevector, m.frequency)
        }),
        DeformationSpectrum::Tabulated(t) => {
            let norm = (two * T::PI()).powi(3);
            t.weighted_nodes()
                .into_iter()
                .fold(T::zero(), |acc, (q, w, ws)| acc + ws * kernel(query, q, w))
                / norm
        }
    }
}
