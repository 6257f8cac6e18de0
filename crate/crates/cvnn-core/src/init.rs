//! Seeded weight initialisation.
//!
//! All draws go through a fixed PRNG (ChaCha8) so a `(seed, shape, scheme)`
//! triple produces bitwise-identical weights on every platform. Each layer
//! derives its own stream from the run seed so same-shaped layers never
//! share weights.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::complex::ComplexTensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitScheme {
    /// Rayleigh magnitude with `sigma = sqrt(1/fan)` and uniform phase, the
    /// complex generalisation of variance-scaled initialisation. Gives
    /// `E[|w|^2] = 2/fan`.
    ComplexVarianceScaled,
    /// Uniform on `+-sqrt(6/(fan_in + fan_out))`.
    RealGlorot,
    Zeros,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FanMode {
    FanIn,
    FanAvg,
}

impl FanMode {
    fn fan(self, fan_in: usize, fan_out: usize) -> f64 {
        match self {
            FanMode::FanIn => fan_in as f64,
            FanMode::FanAvg => (fan_in + fan_out) as f64 / 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitSpec {
    pub scheme: InitScheme,
    pub fan_mode: FanMode,
    pub seed: u64,
}

impl InitSpec {
    pub fn complex_variance_scaled(seed: u64) -> Self {
        Self {
            scheme: InitScheme::ComplexVarianceScaled,
            fan_mode: FanMode::FanIn,
            seed,
        }
    }

    pub fn real_glorot(seed: u64) -> Self {
        Self {
            scheme: InitScheme::RealGlorot,
            fan_mode: FanMode::FanIn,
            seed,
        }
    }
}

impl std::str::FromStr for InitScheme {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "complex_variance_scaled" => Ok(InitScheme::ComplexVarianceScaled),
            "real_glorot" => Ok(InitScheme::RealGlorot),
            "zeros" => Ok(InitScheme::Zeros),
            other => Err(crate::Error::InvalidConfig(format!(
                "unknown init scheme {other:?}"
            ))),
        }
    }
}

impl std::str::FromStr for FanMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "fan_in" => Ok(FanMode::FanIn),
            "fan_avg" => Ok(FanMode::FanAvg),
            other => Err(crate::Error::InvalidConfig(format!("unknown fan mode {other:?}"))),
        }
    }
}

/// Derives an independent stream seed from a run seed, SplitMix64-style.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Complex variance-scaled initialisation of an `(fan_in x fan_out)` weight
/// matrix: magnitude `r ~ Rayleigh(sqrt(1/fan))`, phase uniform on
/// `(-pi, pi]`, entry `r * (cos phi + i sin phi)`.
pub fn init_complex(fan_in: usize, fan_out: usize, fan_mode: FanMode, seed: u64) -> ComplexTensor {
    let sigma = (1.0 / fan_mode.fan(fan_in, fan_out)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut re = Array2::zeros((fan_in, fan_out));
    let mut im = Array2::zeros((fan_in, fan_out));
    for i in 0..fan_in {
        for j in 0..fan_out {
            // Rayleigh by inverse CDF: u in [0, 1) keeps the log argument in (0, 1]
            let u: f64 = rng.random();
            let r = sigma * (-2.0 * (1.0 - u).ln()).sqrt();
            let phi = PI - TAU * rng.random::<f64>(); // (-pi, pi]
            re[[i, j]] = r * phi.cos();
            im[[i, j]] = r * phi.sin();
        }
    }
    ComplexTensor::from_planes(re, im).expect("planes share a shape")
}

/// Glorot uniform initialisation of an `(fan_in x fan_out)` real matrix.
pub fn init_real(fan_in: usize, fan_out: usize, seed: u64) -> Array2<f64> {
    let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Array2::zeros((fan_in, fan_out));
    for v in out.iter_mut() {
        *v = rng.random_range(-bound..bound);
    }
    out
}

pub fn init_zeros(rows: usize, cols: usize) -> ComplexTensor {
    ComplexTensor::zeros(rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_init_is_deterministic() {
        let a = init_complex(4, 4, FanMode::FanIn, 99);
        let b = init_complex(4, 4, FanMode::FanIn, 99);
        assert_eq!(a, b);
        let c = init_complex(4, 4, FanMode::FanIn, 100);
        assert_ne!(a, c);
    }

    #[test]
    fn complex_init_moments() {
        // E[|w|^2] = 2 sigma^2 = 2/fan_in; Var(Re) + Var(Im) = E[|w|^2].
        let fan = 100;
        let t = init_complex(fan, 10_000, FanMode::FanIn, 7);
        let n = (fan * 10_000) as f64;
        let mean_sq: f64 = t
            .re()
            .iter()
            .zip(t.im().iter())
            .map(|(r, i)| r * r + i * i)
            .sum::<f64>()
            / n;
        let expected = 2.0 / fan as f64;
        assert!(
            (mean_sq - expected).abs() / expected < 0.05,
            "E[|w|^2] = {mean_sq}, expected {expected}"
        );
        let mean_re = t.re().sum() / n;
        let mean_im = t.im().sum() / n;
        assert!(mean_re.abs() < 3e-3 && mean_im.abs() < 3e-3);
    }

    #[test]
    fn complex_init_fan_avg_moments() {
        let t = init_complex(60, 140, FanMode::FanAvg, 11);
        let n = (60 * 140) as f64;
        let mean_sq: f64 = t
            .re()
            .iter()
            .zip(t.im().iter())
            .map(|(r, i)| r * r + i * i)
            .sum::<f64>()
            / n;
        let expected = 2.0 / 100.0; // fan_avg = (60 + 140) / 2
        assert!((mean_sq - expected).abs() / expected < 0.05);
    }

    #[test]
    fn complex_init_phase_is_uniform() {
        // chi-square over 16 bins at p > 0.01 (critical value 30.58 for 15
        // degrees of freedom)
        let t = init_complex(200, 500, FanMode::FanIn, 3);
        let mut bins = [0u64; 16];
        for (r, i) in t.re().iter().zip(t.im().iter()) {
            let phi = i.atan2(*r); // [-pi, pi]
            let idx = (((phi + PI) / TAU) * 16.0).floor().clamp(0.0, 15.0) as usize;
            bins[idx] += 1;
        }
        let n = (200 * 500) as f64;
        let expected = n / 16.0;
        let chi2: f64 = bins
            .iter()
            .map(|&b| (b as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 30.58, "chi-square {chi2} too large for uniform phase");
    }

    #[test]
    fn glorot_bounds_and_variance() {
        let (fan_in, fan_out) = (500, 2000);
        let w = init_real(fan_in, fan_out, 5);
        let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
        assert!(w.iter().all(|v| v.abs() <= bound));
        let n = (fan_in * fan_out) as f64;
        let mean = w.sum() / n;
        let var = w.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let expected = 2.0 / (fan_in + fan_out) as f64;
        assert!((var - expected).abs() / expected < 0.05, "var {var} vs {expected}");
        assert_eq!(w, init_real(fan_in, fan_out, 5));
    }

    #[test]
    fn zeros_are_zero() {
        let t = init_zeros(3, 7);
        assert!(t.re().iter().all(|&v| v == 0.0));
        assert!(t.im().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn derived_streams_do_not_collide() {
        for seed in 0..100u64 {
            let a = init_complex(3, 3, FanMode::FanIn, derive_seed(seed, 0));
            let b = init_complex(3, 3, FanMode::FanIn, derive_seed(seed, 1));
            assert_ne!(a.get(0, 0), b.get(0, 0), "collision at seed {seed}");
        }
    }
}
