//! Activation functions for complex and real dense layers.
//!
//! Entrywise activations map a complex tensor to a complex tensor; the
//! intensity-based output heads (`sigmoid(|z|^2)`, row-wise `softmax(|z|^2)`)
//! map to real probabilities and are only valid as the last layer. Every
//! activation ships its vector-Jacobian product in the real-pair basis so
//! the backward pass can treat `Re` and `Im` as independent real variables.

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::complex::{ComplexScalar, ComplexTensor};
use crate::error::{Error, Result};

/// Denominator guard for the complex tanh; below this the input is treated
/// as sitting on a pole and the evaluation fails loudly instead of
/// returning infinities.
pub const TANH_POLE_GUARD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivationId {
    Identity,
    Tanh,
    SplitRelu,
    Intensity,
    Magnitude,
    SigmoidIntensity,
    SoftmaxIntensity,
}

impl ActivationId {
    /// Output heads squash complex pre-activations to real probabilities and
    /// may not appear in hidden layers.
    pub fn is_head(self) -> bool {
        matches!(self, ActivationId::SigmoidIntensity | ActivationId::SoftmaxIntensity)
    }

    /// Whether the output of this activation always has a zero imaginary plane.
    pub fn maps_to_real(self) -> bool {
        matches!(
            self,
            ActivationId::Intensity
                | ActivationId::Magnitude
                | ActivationId::SigmoidIntensity
                | ActivationId::SoftmaxIntensity
        )
    }

    pub fn apply(self, z: &ComplexTensor) -> Result<ComplexTensor> {
        match self {
            ActivationId::Identity => Ok(z.clone()),
            ActivationId::Tanh => try_map(z, ctanh),
            ActivationId::SplitRelu => Ok(z.map(|re, im| (re.max(0.0), im.max(0.0)))),
            ActivationId::Intensity => Ok(z.map(|re, im| (re * re + im * im, 0.0))),
            ActivationId::Magnitude => Ok(z.map(|re, im| (re.hypot(im), 0.0))),
            ActivationId::SigmoidIntensity => {
                Ok(z.map(|re, im| (1.0 / (1.0 + (-(re * re + im * im)).exp()), 0.0)))
            }
            ActivationId::SoftmaxIntensity => Ok(softmax_intensity(z)),
        }
    }

    /// Vector-Jacobian product: given upstream gradients with respect to the
    /// activation output (`go_re`, `go_im`), returns gradients with respect
    /// to the pre-activation planes.
    pub fn vjp(
        self,
        z: &ComplexTensor,
        out: &ComplexTensor,
        go_re: &Array2<f64>,
        go_im: &Array2<f64>,
    ) -> (Array2<f64>, Array2<f64>) {
        match self {
            ActivationId::Identity => (go_re.clone(), go_im.clone()),
            ActivationId::Tanh => {
                // Holomorphic with f'(z) = 1 - tanh(z)^2 = p + iq; the real
                // Jacobian of (u, v) wrt (x, y) is [[p, -q], [q, p]].
                let mut gz_re = go_re.clone();
                let mut gz_im = go_im.clone();
                ndarray::Zip::from(&mut gz_re)
                    .and(&mut gz_im)
                    .and(out.re())
                    .and(out.im())
                    .for_each(|gr, gi, &or, &oi| {
                        let p = 1.0 - (or * or - oi * oi);
                        let q = -2.0 * or * oi;
                        let (ur, ui) = (*gr, *gi);
                        *gr = ur * p + ui * q;
                        *gi = -ur * q + ui * p;
                    });
                (gz_re, gz_im)
            }
            ActivationId::SplitRelu => {
                // Subgradient 0 at the kink keeps zero planes exactly zero.
                let gz_re = ndarray::Zip::from(go_re)
                    .and(z.re())
                    .map_collect(|&g, &x| if x > 0.0 { g } else { 0.0 });
                let gz_im = ndarray::Zip::from(go_im)
                    .and(z.im())
                    .map_collect(|&g, &y| if y > 0.0 { g } else { 0.0 });
                (gz_re, gz_im)
            }
            ActivationId::Intensity => {
                let gz_re = ndarray::Zip::from(go_re)
                    .and(z.re())
                    .map_collect(|&g, &x| g * 2.0 * x);
                let gz_im = ndarray::Zip::from(go_re)
                    .and(z.im())
                    .map_collect(|&g, &y| g * 2.0 * y);
                (gz_re, gz_im)
            }
            ActivationId::Magnitude => {
                // d|z|/dx = x/|z|, gradient at the origin defined as zero.
                let grad = |g: f64, c: f64, r: f64| if r == 0.0 { 0.0 } else { g * c / r };
                let gz_re = ndarray::Zip::from(go_re)
                    .and(z.re())
                    .and(out.re())
                    .map_collect(|&g, &x, &r| grad(g, x, r));
                let gz_im = ndarray::Zip::from(go_re)
                    .and(z.im())
                    .and(out.re())
                    .map_collect(|&g, &y, &r| grad(g, y, r));
                (gz_re, gz_im)
            }
            ActivationId::SigmoidIntensity => {
                let gz_re = ndarray::Zip::from(go_re)
                    .and(z.re())
                    .and(out.re())
                    .map_collect(|&g, &x, &s| g * s * (1.0 - s) * 2.0 * x);
                let gz_im = ndarray::Zip::from(go_re)
                    .and(z.im())
                    .and(out.re())
                    .map_collect(|&g, &y, &s| g * s * (1.0 - s) * 2.0 * y);
                (gz_re, gz_im)
            }
            ActivationId::SoftmaxIntensity => {
                // dL/dI_k = p_k (g_k - sum_j g_j p_j), then chain through
                // I = x^2 + y^2.
                let p = out.re();
                let mut gz_re = Array2::zeros(z.dim());
                let mut gz_im = Array2::zeros(z.dim());
                for row in 0..z.rows() {
                    let mut dot = 0.0;
                    for col in 0..z.cols() {
                        dot += go_re[[row, col]] * p[[row, col]];
                    }
                    for col in 0..z.cols() {
                        let d_int = p[[row, col]] * (go_re[[row, col]] - dot);
                        gz_re[[row, col]] = d_int * 2.0 * z.re()[[row, col]];
                        gz_im[[row, col]] = d_int * 2.0 * z.im()[[row, col]];
                    }
                }
                (gz_re, gz_im)
            }
        }
    }
}

impl std::fmt::Display for ActivationId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ActivationId::Identity => "identity",
            ActivationId::Tanh => "tanh",
            ActivationId::SplitRelu => "relu",
            ActivationId::Intensity => "abs2",
            ActivationId::Magnitude => "abs",
            ActivationId::SigmoidIntensity => "sigmoid_intensity",
            ActivationId::SoftmaxIntensity => "softmax_intensity",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for ActivationId {
    type Err = Error;

    /// Parses the hidden-layer activation names accepted by configs.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(ActivationId::Identity),
            "tanh" => Ok(ActivationId::Tanh),
            "relu" => Ok(ActivationId::SplitRelu),
            "abs2" => Ok(ActivationId::Intensity),
            "abs" => Ok(ActivationId::Magnitude),
            other => Err(Error::InvalidConfig(format!(
                "unknown activation {other:?}, expected one of identity, tanh, relu, abs2, abs"
            ))),
        }
    }
}

/// Complex hyperbolic tangent evaluated as
/// `tanh(x+iy) = (sinh 2x + i sin 2y) / (cosh 2x + cos 2y)`.
///
/// The denominator vanishes exactly at the poles `z = i(pi/2 + k*pi)`;
/// inputs closer than the guard fail with [`Error::NearPole`] so a training
/// run can record the failure instead of propagating infinities.
pub fn ctanh(re: f64, im: f64) -> Result<(f64, f64)> {
    let tx = 2.0 * re;
    let ty = 2.0 * im;
    if tx.abs() > 40.0 {
        // cosh(2x) dominates everything; tanh saturates to +-1.
        return Ok((tx.signum(), 2.0 * ty.sin() * (-tx.abs()).exp()));
    }
    let denom = tx.cosh() + ty.cos();
    if denom < TANH_POLE_GUARD {
        let k = ((im - FRAC_PI_2) / PI).round();
        let pole_im = FRAC_PI_2 + k * PI;
        return Err(Error::NearPole {
            re,
            im,
            pole_im,
            distance: re.hypot(im - pole_im),
        });
    }
    Ok((tx.sinh() / denom, ty.sin() / denom))
}

fn try_map(z: &ComplexTensor, f: impl Fn(f64, f64) -> Result<(f64, f64)>) -> Result<ComplexTensor> {
    let mut out = ComplexTensor::zeros(z.rows(), z.cols());
    for i in 0..z.rows() {
        for j in 0..z.cols() {
            let (re, im) = f(z.re()[[i, j]], z.im()[[i, j]])?;
            out.set(i, j, ComplexScalar::new(re, im));
        }
    }
    Ok(out)
}

/// Row-wise `softmax` over the squared magnitudes, computed with
/// max-subtraction. Output rows are non-negative and sum to one.
fn softmax_intensity(z: &ComplexTensor) -> ComplexTensor {
    let mut probs = Array2::zeros(z.dim());
    for row in 0..z.rows() {
        let mut max_int = f64::NEG_INFINITY;
        for col in 0..z.cols() {
            let x = z.re()[[row, col]];
            let y = z.im()[[row, col]];
            max_int = max_int.max(x * x + y * y);
        }
        let mut sum = 0.0;
        for col in 0..z.cols() {
            let x = z.re()[[row, col]];
            let y = z.im()[[row, col]];
            let e = (x * x + y * y - max_int).exp();
            probs[[row, col]] = e;
            sum += e;
        }
        for col in 0..z.cols() {
            probs[[row, col]] /= sum;
        }
    }
    ComplexTensor::from_real(probs)
}
