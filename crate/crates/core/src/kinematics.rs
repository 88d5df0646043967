//! Emission kinematics in the reduced plane.
//!
//! A photon of frequency `Omega` leaving the plate in direction
//! `(theta, phi)` is allowed when
//!
//! ```text
//! (omega0 - Omega)^2 > k0^2 + Omega^2 sin^2(theta) - 2 k0 Omega sin(theta) cos(phi)
//! ```
//!
//! With `r = (omega0 - Omega)/Omega` and `kappa = k0/Omega` this is the
//! interior of a cylinder of radius `r` whose axis sits at `x = kappa`,
//! intersected with the unit sphere. Writing `s = sin(theta)`, the boundary
//! is the pair of roots `s = kappa cos(phi) +- sqrt(r^2 - kappa^2 sin^2(phi))`.

use std::fmt;

use serde::Serialize;

use crate::real::{clamp_unit, Real};
use crate::{Error, Result};

/// Traveling-wave deformation `h(x, t) = d cos(k0 x1 - omega0 t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MirrorDrive<T> {
    omega0: T,
    k0: T,
    d: T,
}

impl<T: Real> MirrorDrive<T> {
    pub fn new(omega0: T, k0: T, d: T) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > T::zero()) {
            return Err(Error::InvalidDrive(format!(
                "omega0 must be > 0, got {omega0}"
            )));
        }
        if !(k0.is_finite() && k0 >= T::zero()) {
            return Err(Error::InvalidDrive(format!("k0 must be >= 0, got {k0}")));
        }
        if !(d.is_finite() && d > T::zero()) {
            return Err(Error::InvalidDrive(format!("d must be > 0, got {d}")));
        }
        Ok(Self { omega0, k0, d })
    }

    pub fn omega0(&self) -> T {
        self.omega0
    }

    pub fn k0(&self) -> T {
        self.k0
    }

    pub fn d(&self) -> T {
        self.d
    }

    /// Same drive with a different amplitude.
    pub fn with_amplitude(&self, d: T) -> Result<Self> {
        Self::new(self.omega0, self.k0, d)
    }

    /// Phase velocity `omega0 / k0` in units of c (infinite for `k0 = 0`).
    pub fn phase_velocity(&self) -> T {
        if self.k0 == T::zero() {
            T::infinity()
        } else {
            self.omega0 / self.k0
        }
    }

    /// Radiation requires a superluminal phase velocity.
    pub fn radiates(&self) -> bool {
        self.omega0 > self.k0
    }

    /// Second-order perturbation theory needs `d omega0 << 1`. This is a
    /// warning flag only; the threshold is 0.1.
    pub fn is_perturbative(&self) -> bool {
        self.d * self.omega0 < T::lit(0.1)
    }
}

/// Dimensionless coordinates of the regime plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint<T> {
    r: T,
    kappa: T,
}

impl<T: Real> ReducedPoint<T> {
    pub fn new(r: T, kappa: T) -> Result<Self> {
        if !(r.is_finite() && r >= T::zero() && kappa.is_finite() && kappa >= T::zero()) {
            return Err(Error::Domain(format!(
                "reduced point needs finite r >= 0 and kappa >= 0, got r={r}, kappa={kappa}"
            )));
        }
        Ok(Self { r, kappa })
    }

    /// Cylinder radius `(omega0 - Omega) / Omega`.
    pub fn r(&self) -> T {
        self.r
    }

    /// Cylinder axis offset `k0 / Omega`.
    pub fn kappa(&self) -> T {
        self.kappa
    }
}

/// Maps a detected frequency onto the regime plane.
///
/// Returns `Ok(None)` when `Omega > omega0` (nothing is emitted there) and a
/// domain error for `Omega <= 0`.
pub fn reduce<T: Real>(drive: &MirrorDrive<T>, omega: T) -> Result<Option<ReducedPoint<T>>> {
    if !(omega > T::zero()) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "Omega must be finite and > 0, got {omega}"
        )));
    }
    if omega > drive.omega0 {
        return Ok(None);
    }
    let r = (drive.omega0 - omega) / omega;
    let kappa = drive.k0 / omega;
    ReducedPoint::new(r, kappa).map(Some)
}

/// `|q - k|^2` for `q = (k0, 0)` and `k = Omega sin(theta) (cos(phi), sin(phi))`,
/// by components so that it stays accurate when both vectors nearly coincide.
pub(crate) fn transfer_sq<T: Real>(k0: T, omega: T, theta: T, phi: T) -> T {
    let k = omega * theta.sin();
    let (sp, cp) = phi.sin_cos();
    let dx = k0 - k * cp;
    let dy = k * sp;
    dx * dx + dy * dy
}

/// The raw emission inequality; the ground truth every window construction
/// is checked against.
pub fn admissible<T: Real>(drive: &MirrorDrive<T>, omega: T, theta: T, phi: T) -> bool {
    if !(omega > T::zero() && omega < drive.omega0) {
        return false;
    }
    if !(theta >= T::zero() && theta <= T::FRAC_PI_2()) {
        return false;
    }
    let gap = drive.omega0 - omega;
    gap * gap > transfer_sq(drive.k0, omega, theta, phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegimeId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    NoEmission,
}

impl RegimeId {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeId::R1 => "R1",
            RegimeId::R2 => "R2",
            RegimeId::R3 => "R3",
            RegimeId::R4 => "R4",
            RegimeId::R5 => "R5",
            RegimeId::R6 => "R6",
            RegimeId::R7 => "R7",
            RegimeId::NoEmission => "NoEmission",
        }
    }

    /// True for regimes whose window is empty.
    pub fn is_dark(&self) -> bool {
        matches!(self, RegimeId::R5 | RegimeId::NoEmission)
    }
}

impl fmt::Display for RegimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Regime of a reduced point.
///
/// Predicates are tested in the order R5, R4, R3, R6, R2, R7, R1 with
/// non-strict comparisons; the first match wins. `r = 0` (`Omega = omega0`)
/// is `NoEmission`.
pub fn classify<T: Real>(p: &ReducedPoint<T>) -> RegimeId {
    let (r, k) = (p.r, p.kappa);
    let one = T::one();
    if !(r > T::zero()) || !k.is_finite() {
        return RegimeId::NoEmission;
    }
    if k >= one && r <= k - one {
        RegimeId::R5
    } else if r >= one + k {
        RegimeId::R4
    } else if r >= one - k && r >= k && r <= k + one {
        RegimeId::R3
    } else if k >= one && r >= k - one && r <= k {
        RegimeId::R6
    } else if k <= one && r >= one - k && r <= k {
        RegimeId::R2
    } else if k <= one && r >= k && r <= one - k {
        RegimeId::R7
    } else if k <= one && r <= one - k && r <= k {
        RegimeId::R1
    } else {
        // the seven predicates cover the closed quadrant
        RegimeId::NoEmission
    }
}

/// Roots `s- <= s+` in `sin(theta)` of the window boundary at azimuth `phi`,
/// or `None` when the cylinder misses this azimuth.
fn sin_roots<T: Real>(p: &ReducedPoint<T>, phi: T) -> Option<(T, T)> {
    let (sp, cp) = phi.abs().sin_cos();
    let disc = p.r * p.r - p.kappa * p.kappa * sp * sp;
    if !(disc > T::zero()) {
        return None;
    }
    let half_width = disc.sqrt();
    let centre = p.kappa * cp;
    Some((centre - half_width, centre + half_width))
}

/// Polar bounds `(theta_lo, theta_hi)` of the window at azimuth `phi`.
///
/// Exactly symmetric in `phi`. Empty when the azimuth is outside the
/// support or both roots fall outside `[0, 1]`.
pub fn theta_bounds<T: Real>(p: &ReducedPoint<T>, phi: T) -> Option<(T, T)> {
    let (lo, hi) = sin_roots(p, phi)?;
    if hi <= T::zero() || lo >= T::one() {
        return None;
    }
    let lo = lo.max(T::zero()).min(T::one());
    let hi = hi.max(T::zero()).min(T::one());
    Some((lo.asin(), hi.asin()))
}

/// Azimuth where the cylinder wall crosses the unit circle in the plate
/// plane: `acos[(1 - r^2 + kappa^2) / (2 kappa)]`.
pub fn phi_critical<T: Real>(p: &ReducedPoint<T>) -> Option<T> {
    if !(p.kappa > T::zero()) {
        return None;
    }
    let two = T::one() + T::one();
    let arg = (T::one() - p.r * p.r + p.kappa * p.kappa) / (two * p.kappa);
    clamp_unit(arg).map(|a| a.acos())
}

/// Half-width `asin(r / kappa)` of the azimuthal support when the cylinder
/// footprint excludes the origin. `None` when `r > kappa` (full circle).
pub fn phi_max<T: Real>(p: &ReducedPoint<T>) -> Option<T> {
    if !(p.kappa > T::zero()) || p.r > p.kappa {
        return None;
    }
    Some((p.r / p.kappa).min(T::one()).asin())
}

/// Which surface bounds the window in theta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PolarBound {
    /// `theta = 0`, the plate normal.
    Normal,
    /// `theta = pi/2`, grazing emission.
    Grazing,
    /// `asin(s-)`.
    LowerRoot,
    /// `asin(s+)`.
    UpperRoot,
}

/// An azimuthal slab of the window on which the bound types do not change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiInterval<T> {
    pub start: T,
    pub end: T,
    pub lower: PolarBound,
    pub upper: PolarBound,
}

/// Region of the upper hemisphere into which photons of one frequency can
/// be emitted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularWindow<T> {
    point: ReducedPoint<T>,
    regime: RegimeId,
    intervals: Vec<PhiInterval<T>>,
    phi_max: Option<T>,
    phi_c: Option<T>,
    theta_beam: Option<T>,
}

impl<T: Real> AngularWindow<T> {
    pub fn point(&self) -> &ReducedPoint<T> {
        &self.point
    }

    pub fn regime(&self) -> RegimeId {
        self.regime
    }

    /// Sorted, disjoint azimuthal slabs covering the support in `[-pi, pi]`.
    pub fn intervals(&self) -> &[PhiInterval<T>] {
        &self.intervals
    }

    pub fn phi_max(&self) -> Option<T> {
        self.phi_max
    }

    pub fn phi_c(&self) -> Option<T> {
        self.phi_c
    }

    /// `asin(kappa)` for `kappa < 1`: the direction the window collapses onto
    /// as `Omega -> omega0`.
    pub fn theta_beam(&self) -> Option<T> {
        self.theta_beam
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full_hemisphere(&self) -> bool {
        self.intervals.len() == 1 && {
            let iv = &self.intervals[0];
            iv.start <= -T::PI()
                && iv.end >= T::PI()
                && iv.lower == PolarBound::Normal
                && iv.upper == PolarBound::Grazing
        }
    }

    /// `(phi_lo, phi_hi)` of the azimuthal support.
    pub fn azimuthal_support(&self) -> Option<(T, T)> {
        Some((self.intervals.first()?.start, self.intervals.last()?.end))
    }

    fn interval_at(&self, phi: T) -> Option<&PhiInterval<T>> {
        self.intervals
            .iter()
            .find(|iv| phi >= iv.start && phi <= iv.end)
    }

    /// Polar bounds at `phi`, or `None` outside the support.
    pub fn bounds_at(&self, phi: T) -> Option<(T, T)> {
        let phi = wrap_angle(phi);
        self.interval_at(phi)?;
        theta_bounds(&self.point, phi)
    }

    /// Membership of a direction. Clamped bounds (`theta = 0`, `pi/2`) are
    /// inclusive, root bounds are strict.
    pub fn contains(&self, theta: T, phi: T) -> bool {
        if !(theta >= T::zero() && theta <= T::FRAC_PI_2()) {
            return false;
        }
        let phi = wrap_angle(phi);
        let Some(iv) = self.interval_at(phi) else {
            return false;
        };
        let Some((lo, hi)) = theta_bounds(&self.point, phi) else {
            return false;
        };
        let above = match iv.lower {
            PolarBound::Normal => theta >= lo,
            _ => theta > lo,
        };
        let below = match iv.upper {
            PolarBound::Grazing => theta <= hi,
            _ => theta < hi,
        };
        above && below
    }
}

/// Wraps an azimuth into `[-pi, pi]`.
fn wrap_angle<T: Real>(phi: T) -> T {
    if phi >= -T::PI() && phi <= T::PI() {
        return phi;
    }
    let tau = T::PI() + T::PI();
    let mut w = phi % tau;
    if w > T::PI() {
        w = w - tau;
    } else if w < -T::PI() {
        w = w + tau;
    }
    w
}

/// Builds the emission window from the boundary roots.
///
/// The azimuthal support is `|phi| <= phi_max` when `r <= kappa`, otherwise the
/// full circle; it is cut at `+-phi_c`, where a root crosses `sin(theta) = 1`.
/// Within each slab the bound types are fixed and read off at the midpoint.
pub fn window<T: Real>(p: &ReducedPoint<T>) -> AngularWindow<T> {
    let regime = classify(p);
    let phi_c = phi_critical(p);
    let pmax = phi_max(p);
    let theta_beam = if p.kappa < T::one() {
        Some(p.kappa.asin())
    } else {
        None
    };
    let mut out = AngularWindow {
        point: *p,
        regime,
        intervals: Vec::new(),
        phi_max: pmax,
        phi_c,
        theta_beam,
    };
    if regime.is_dark() {
        return out;
    }

    let end = pmax.unwrap_or(T::PI());
    let mut cuts = vec![-end, end];
    if let Some(c) = phi_c {
        if c > T::zero() && c < end {
            cuts.push(-c);
            cuts.push(c);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite cut"));

    let two = T::one() + T::one();
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if !(b > a) {
            continue;
        }
        let Some((lo, hi)) = sin_roots(p, (a + b) / two) else {
            continue;
        };
        if hi <= T::zero() || lo >= T::one() {
            continue;
        }
        out.intervals.push(PhiInterval {
            start: a,
            end: b,
            lower: if lo <= T::zero() {
                PolarBound::Normal
            } else {
                PolarBound::LowerRoot
            },
            upper: if hi >= T::one() {
                PolarBound::Grazing
            } else {
                PolarBound::UpperRoot
            },
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySegment<T> {
    pub start: T,
    pub end: T,
    pub regime: RegimeId,
}

/// Sequence of regimes met by a fixed drive as `Omega` sweeps `(0, omega0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeTrajectory<T> {
    drive: MirrorDrive<T>,
    segments: Vec<TrajectorySegment<T>>,
}

impl<T: Real> RegimeTrajectory<T> {
    pub fn drive(&self) -> &MirrorDrive<T> {
        &self.drive
    }

    pub fn segments(&self) -> &[TrajectorySegment<T>] {
        &self.segments
    }

    pub fn regimes(&self) -> Vec<RegimeId> {
        self.segments.iter().map(|s| s.regime).collect()
    }

    /// Frequencies where the regime changes.
    pub fn crossings(&self) -> Vec<T> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    /// Samples the trajectory as a polyline in the `(kappa, r)` plane,
    /// clipped to `kappa <= kappa_max`, `r <= r_max`.
    pub fn polyline(&self, kappa_max: T, r_max: T, resolution: usize) -> Vec<RegimeCell<T>> {
        let w0 = self.drive.omega0;
        let mut lo = w0 / (T::one() + r_max);
        if self.drive.k0 > T::zero() && kappa_max > T::zero() {
            lo = lo.max(self.drive.k0 / kappa_max);
        }
        if resolution < 2 || !(lo < w0) {
            return Vec::new();
        }
        let steps = T::from_usize_lossy(resolution - 1);
        (0..resolution)
            .map(|i| {
                let omega = lo + (w0 - lo) * T::from_usize_lossy(i) / steps;
                let p = ReducedPoint {
                    r: ((w0 - omega) / omega).max(T::zero()),
                    kappa: self.drive.k0 / omega,
                };
                RegimeCell {
                    kappa: p.kappa,
                    r: p.r,
                    regime: classify(&p),
                }
            })
            .collect()
    }
}

/// Solves the boundary crossings `r = kappa + 1`, `r = kappa`,
/// `r = 1 - kappa` and `kappa = 1` along `r(Omega) = omega0/Omega - 1`,
/// `kappa(Omega) = k0/Omega`, and labels the pieces.
pub fn trajectory<T: Real>(drive: &MirrorDrive<T>) -> RegimeTrajectory<T> {
    let (w0, k0) = (drive.omega0, drive.k0);
    let two = T::one() + T::one();
    if !drive.radiates() {
        return RegimeTrajectory {
            drive: *drive,
            segments: vec![TrajectorySegment {
                start: T::zero(),
                end: w0,
                regime: RegimeId::NoEmission,
            }],
        };
    }
    let mut cuts: Vec<T> = [(w0 - k0) / two, w0 - k0, (w0 + k0) / two, k0]
        .into_iter()
        .filter(|&x| x > T::zero() && x < w0)
        .collect();
    cuts.push(T::zero());
    cuts.push(w0);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite crossing"));
    cuts.dedup();

    let mut segments: Vec<TrajectorySegment<T>> = Vec::new();
    for pair in cuts.windows(2) {
        let mid = (pair[0] + pair[1]) / two;
        let regime = reduce(drive, mid)
            .ok()
            .flatten()
            .map(|p| classify(&p))
            .unwrap_or(RegimeId::NoEmission);
        match segments.last_mut() {
            Some(last) if last.regime == regime => last.end = pair[1],
            _ => segments.push(TrajectorySegment {
                start: pair[0],
                end: pair[1],
                regime,
            }),
        }
    }
    RegimeTrajectory {
        drive: *drive,
        segments,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeCell<T> {
    pub kappa: T,
    pub r: T,
    pub regime: RegimeId,
}

/// Regime labels on a `grid x grid` lattice over `[0, kappa_max] x [0, r_max]`,
/// kappa-major.
pub fn regime_map<T: Real>(r_max: T, kappa_max: T, grid: usize) -> Result<Vec<RegimeCell<T>>> {
    if grid < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid must be >= 2, got {grid}"
        )));
    }
    if !(r_max > T::zero() && r_max.is_finite() && kappa_max > T::zero() && kappa_max.is_finite()) {
        return Err(Error::InvalidConfig(
            "r_max and kappa_max must be finite and > 0".into(),
        ));
    }
    let steps = T::from_usize_lossy(grid - 1);
    let mut cells = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let kappa = kappa_max * T::from_usize_lossy(i) / steps;
        for j in 0..grid {
            let r = r_max * T::from_usize_lossy(j) / steps;
            let p = ReducedPoint { r, kappa };
            cells.push(RegimeCell {
                kappa,
                r,
                regime: classify(&p),
            });
        }
    }
    Ok(cells)
}
