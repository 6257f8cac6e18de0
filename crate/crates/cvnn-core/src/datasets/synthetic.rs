//! Synthetic classification over the quadrant of a feature sum.
//!
//! Each sample is a `d`-dimensional complex vector whose entries share a
//! drawn mean and carry Gaussian noise per real component. The class is the
//! region of the realised sum `sum_i x_i`: one of the four quadrants, or the
//! disc around the origin. Labels are assigned from the realised sum, so
//! they are exactly consistent with the region rule by construction; sums
//! falling into the ambiguous annulus around the disc boundary are redrawn.
//!
//! `RealProjection` mode drops the imaginary plane of the very same draws
//! and relabels by the real-axis region of the realised real sum (positive,
//! negative, near zero).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use super::{one_hot, Dataset, DatasetMeta};
use crate::complex::ComplexTensor;
use crate::error::{Error, Result};
use crate::init::derive_seed;

const STREAM_SPLIT: u64 = 0x5350_4C49; // "SPLI"

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticMode {
    Complex,
    RealProjection,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_samples: usize,
    pub dims: usize,
    pub sigma: f64,
    pub mode: SyntheticMode,
    pub origin_radius: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            dims: 25,
            sigma: 0.2,
            mode: SyntheticMode::Complex,
            origin_radius: 5.0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.sigma <= 0.0 {
            return Err(Error::InvalidDatasetSpec(format!("sigma {} must be > 0", self.sigma)));
        }
        if self.dims == 0 {
            return Err(Error::InvalidDatasetSpec("dims must be >= 1".into()));
        }
        if self.origin_radius <= 0.0 {
            return Err(Error::InvalidDatasetSpec(format!(
                "origin_radius {} must be > 0",
                self.origin_radius
            )));
        }
        if self.n_samples < 5 {
            return Err(Error::InvalidDatasetSpec("need at least 5 samples".into()));
        }
        Ok(())
    }
}

/// Complex-mode classes: quadrants counter-clockwise from `(+,+)`, then the
/// origin disc.
pub fn complex_region(sum_re: f64, sum_im: f64, origin_radius: f64) -> usize {
    if sum_re.hypot(sum_im) < origin_radius {
        return 4;
    }
    match (sum_re > 0.0, sum_im > 0.0) {
        (true, true) => 0,
        (false, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
    }
}

/// Real-mode classes: positive, negative, near zero.
pub fn real_region(sum_re: f64, origin_radius: f64) -> usize {
    if sum_re.abs() < origin_radius {
        2
    } else if sum_re > 0.0 {
        0
    } else {
        1
    }
}

pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let r0 = spec.origin_radius;
    let d = spec.dims;
    let noise = Normal::new(0.0, spec.sigma).expect("positive sigma");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut features_re = Vec::with_capacity(spec.n_samples * d);
    let mut features_im = Vec::with_capacity(spec.n_samples * d);
    let mut sums = Vec::with_capacity(spec.n_samples);
    let mut rejected = 0u64;

    let mut sample_re = vec![0.0; d];
    let mut sample_im = vec![0.0; d];
    while sums.len() < spec.n_samples {
        if rejected > 9 * spec.n_samples as u64 + 100 {
            return Err(Error::InvalidDatasetSpec(format!(
                "rejection rate above 90% ({rejected} rejections), geometry is degenerate"
            )));
        }
        // target sum: quadrant ring or origin disc, classes drawn uniformly
        let class = rng.random_range(0..5u32);
        let (target_re, target_im) = if class < 4 {
            let theta = (class as f64 + rng.random::<f64>()) * FRAC_PI_2;
            let radius = rng.random_range(2.0 * r0..4.0 * r0);
            (radius * theta.cos(), radius * theta.sin())
        } else {
            let radius = 0.8 * r0 * rng.random::<f64>().sqrt();
            let theta = rng.random::<f64>() * TAU;
            (radius * theta.cos(), radius * theta.sin())
        };

        let (base_re, base_im) = (target_re / d as f64, target_im / d as f64);
        let (mut sum_re, mut sum_im) = (0.0, 0.0);
        for j in 0..d {
            let re = base_re + noise.sample(&mut rng);
            let im = base_im + noise.sample(&mut rng);
            sample_re[j] = re;
            sample_im[j] = im;
            sum_re += re;
            sum_im += im;
        }

        // ambiguous annulus around the disc boundary: redraw
        if (sum_re.hypot(sum_im) - r0).abs() < 0.1 * r0 {
            rejected += 1;
            continue;
        }

        features_re.extend_from_slice(&sample_re);
        features_im.extend_from_slice(&sample_im);
        sums.push((sum_re, sum_im));
    }

    let n = spec.n_samples;
    let re = ndarray::Array2::from_shape_vec((n, d), features_re).expect("row-major fill");
    let im = ndarray::Array2::from_shape_vec((n, d), features_im).expect("row-major fill");

    // labels from the realised sums
    let (x, labels, n_classes, name) = match spec.mode {
        SyntheticMode::Complex => {
            let labels: Vec<usize> = sums
                .iter()
                .map(|&(sr, si)| complex_region(sr, si, r0))
                .collect();
            let x = ComplexTensor::from_planes(re, im)?;
            (x, labels, 5, "synthetic_complex")
        }
        SyntheticMode::RealProjection => {
            let labels: Vec<usize> = sums.iter().map(|&(sr, _)| real_region(sr, r0)).collect();
            let x = ComplexTensor::from_real(re);
            (x, labels, 3, "synthetic_real")
        }
    };

    // seeded 80/20 split
    let mut order: Vec<usize> = (0..n).collect();
    {
        use rand::seq::SliceRandom;
        let mut split_rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, STREAM_SPLIT));
        order.shuffle(&mut split_rng);
    }
    let n_train = (n * 4) / 5;
    let (train_idx, test_idx) = order.split_at(n_train);

    let y = one_hot(&labels, n_classes)?;
    Ok(Dataset {
        x_train: x.select_rows(train_idx),
        y_train: y.select(ndarray::Axis(0), train_idx),
        x_test: x.select_rows(test_idx),
        y_test: y.select(ndarray::Axis(0), test_idx),
        n_features: d,
        n_classes,
        metadata: DatasetMeta::Synthetic {
            name: name.into(),
            spec: *spec,
        },
    })
}
