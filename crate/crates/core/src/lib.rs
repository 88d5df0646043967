//! Motion-induced radiation from a plate carrying a harmonic traveling-wave
//! deformation `h(x, t) = d cos(k0 x1 - omega0 t)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`kinematics`]: reduced coordinates `(r, kappa)`, the admissibility
//!   predicate, regime classification and the analytic emission window.
//! - [`radiance`]: pointwise radiated-power densities.
//! - [`quadrature`]: adaptive Gauss-Kronrod with square-root edge
//!   substitution, plus a tanh-sinh rule.
//! - [`spectrum`]: solid-angle integration, sweeps, energy bookkeeping and
//!   closed-form references.
//! - [`oracle`]: Monte Carlo estimate that only uses the raw inequality.
//!
//! All math is generic over [`Real`]; natural units (`c = 1`) throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kinematics;
pub mod oracle;
pub mod quadrature;
pub mod radiance;
pub mod real;
pub mod spectrum;

pub use error::{Error, Result};
pub use kinematics::{
    admissible, classify, phi_critical, phi_max, reduce, regime_map, theta_bounds, trajectory,
    window, AngularWindow, MirrorDrive, PhiInterval, PolarBound, ReducedPoint, RegimeCell,
    RegimeId, RegimeTrajectory, TrajectorySegment,
};
pub use oracle::{mc_oracle, McConfig, McEstimate};
pub use quadrature::{Integral, QuadratureConfig};
pub use radiance::{
    angular_power_general, angular_power_mono, kernel, DeformationSpectrum, EmissionQuery, Mode,
    TabulatedDensity,
};
pub use real::Real;
pub use spectrum::{
    dissipation_rate_closed, energy_report, k0zero_reference, photon_count_si, photon_rate_closed,
    spectral_density, spectral_density_general, spectrum_sweep, sweep_grid, EnergyReport,
    SpectralDensity, SpectrumCurve, SpectrumSample, SPEED_OF_LIGHT,
};

pub type MirrorDriveF64 = MirrorDrive<f64>;
pub type MirrorDriveF32 = MirrorDrive<f32>;
pub type ReducedPointF64 = ReducedPoint<f64>;
pub type ReducedPointF32 = ReducedPoint<f32>;
pub type AngularWindowF64 = AngularWindow<f64>;
pub type EmissionQueryF64 = EmissionQuery<f64>;
pub type DeformationSpectrumF64 = DeformationSpectrum<f64>;
pub type QuadratureConfigF64 = QuadratureConfig<f64>;
pub type QuadratureConfigF32 = QuadratureConfig<f32>;
pub type SpectrumCurveF64 = SpectrumCurve<f64>;
pub type EnergyReportF64 = EnergyReport<f64>;
