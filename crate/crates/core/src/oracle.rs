//! Monte Carlo estimate of `P(Omega)` that decides support with the raw
//! emission inequality only: no regime labels, no window bounds.
//!
//! Directions are drawn uniformly in `(mu, phi) in (0, 1] x (-pi, pi]`. The
//! generator is ChaCha8 keyed by the seed; sample `i` reads words
//! `[4i, 4i + 4)` of the keystream, so every sample is addressable on its
//! own and the estimate does not depend on how the work is split.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::kinematics::MirrorDrive;
use crate::radiance::{angular_power_mono, EmissionQuery};
use crate::real::Real;
use crate::{Error, Result};

const CHUNK: u64 = 1 << 14;
const WORDS_PER_SAMPLE: u128 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub sample_count: u64,
    pub seed: u64,
}

impl McConfig {
    pub const MIN_SAMPLES: u64 = 10_000;

    pub fn new(sample_count: u64, seed: u64) -> Result<Self> {
        if sample_count < Self::MIN_SAMPLES {
            return Err(Error::InvalidConfig(format!(
                "sample_count must be >= {}, got {sample_count}",
                Self::MIN_SAMPLES
            )));
        }
        Ok(Self { sample_count, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate<T> {
    pub estimate: T,
    pub standard_error: T,
    pub samples: u64,
}

impl<T: Real> McEstimate<T> {
    /// Distance to `value` in standard errors.
    pub fn z_score(&self, value: T) -> T {
        if self.standard_error == T::zero() {
            if value == self.estimate {
                T::zero()
            } else {
                T::infinity()
            }
        } else {
            (value - self.estimate).abs() / self.standard_error
        }
    }
}

fn unit_interval(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The two uniforms in `[0, 1)` of sample `index`.
pub fn sample_uniforms(seed: u64, index: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(WORDS_PER_SAMPLE * index as u128);
    (unit_interval(rng.next_u64()), unit_interval(rng.next_u64()))
}

pub fn mc_oracle<T: Real>(
    drive: &MirrorDrive<T>,
    omega: T,
    mc: &McConfig,
) -> Result<McEstimate<T>> {
    if !(omega > T::zero() && omega.is_finite()) {
        return Err(Error::Domain(format!("Omega must be > 0, got {omega}")));
    }
    McConfig::new(mc.sample_count, mc.seed)?;
    let n = mc.sample_count;
    let tau = T::PI() + T::PI();
    let chunks = n.div_ceil(CHUNK);

    let partials: Vec<(T, T)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_word_pos(WORDS_PER_SAMPLE * start as u128);
            let (mut sum, mut sum_sq) = (T::zero(), T::zero());
            for _ in start..end {
                let u = T::lit(unit_interval(rng.next_u64()));
                let v = T::lit(unit_interval(rng.next_u64()));
                let mu = T::one() - u;
                let phi = T::PI() - tau * v;
                let q = EmissionQuery::new_unchecked(omega, mu.min(T::one()).acos(), phi);
                let f = tau * angular_power_mono(drive, &q);
                sum = sum + f;
                sum_sq = sum_sq + f * f;
            }
            (sum, sum_sq)
        })
        .collect();

    let (sum, sum_sq) = partials
        .into_iter()
        .fold((T::zero(), T::zero()), |(a, b), (x, y)| (a + x, b + y));
    let nf = T::lit(n as f64);
    let mean = sum / nf;
    let var = ((sum_sq - nf * mean * mean) / (nf - T::one())).max(T::zero());
    Ok(McEstimate {
        estimate: mean,
        standard_error: (var / nf).sqrt(),
        samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_sample_addressing_matches_stream() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..10 {
            let a = unit_interval(rng.next_u64());
            let b = unit_interval(rng.next_u64());
            assert_eq!(sample_uniforms(7, i), (a, b));
        }
        assert_ne!(sample_uniforms(7, 0), sample_uniforms(8, 0));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let d = MirrorDrive::new(1.0f64, 0.2, 1.0).unwrap();
        let mc = McConfig::new(100_000, 42).unwrap();
        let a = mc_oracle(&d, 0.5, &mc).unwrap();
        let b = mc_oracle(&d, 0.5, &mc).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let d = MirrorDrive::new(1.0f64, 0.4, 1.0).unwrap();
        let mc = McConfig::new(70_000, 3).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_oracle(&d, 0.3, &mc).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    }

    #[test]
    fn above_cutoff_is_zero() {
        let d = MirrorDrive::new(1.0, 0.6, 1.0).unwrap();
        let mc = McConfig::new(10_000, 1).unwrap();
        let e = mc_oracle(&d, 1.2, &mc).unwrap();
        assert_eq!((e.estimate, e.standard_error), (0.0, 0.0));
    }

    #[test]
    fn config_and_domain_errors() {
        assert!(McConfig::new(9_999, 0).is_err());
        let d = MirrorDrive::new(1.0, 0.6, 1.0).unwrap();
        assert!(mc_oracle(
            &d,
            0.0,
            &McConfig {
                sample_count: 10_000,
                seed: 0
            }
        )
        .is_err());
        assert!(mc_oracle(
            &d,
            0.5,
            &McConfig {
                sample_count: 10,
                seed: 0
            }
        )
        .is_err());
    }
}
