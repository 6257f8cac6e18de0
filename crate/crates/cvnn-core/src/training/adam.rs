//! Adam applied independently to every real parameter plane.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::autodiff::{GradientSet, Model};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamParams {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

struct PlaneMoments {
    m: Array2<f64>,
    v: Array2<f64>,
}

impl PlaneMoments {
    fn new(dim: (usize, usize)) -> Self {
        Self {
            m: Array2::zeros(dim),
            v: Array2::zeros(dim),
        }
    }
}

struct LayerMoments {
    w_re: PlaneMoments,
    w_im: PlaneMoments,
    b_re: PlaneMoments,
    b_im: PlaneMoments,
}

/// First/second moment estimates for every plane of every layer plus the
/// step counter used for bias correction.
pub struct AdamState {
    params: AdamParams,
    layers: Vec<LayerMoments>,
    step: u64,
}

impl AdamState {
    pub fn new(model: &Model, params: AdamParams) -> Self {
        let layers = model
            .layers()
            .iter()
            .map(|layer| LayerMoments {
                w_re: PlaneMoments::new(layer.weights().dim()),
                w_im: PlaneMoments::new(layer.weights().dim()),
                b_re: PlaneMoments::new(layer.bias().dim()),
                b_im: PlaneMoments::new(layer.bias().dim()),
            })
            .collect();
        Self {
            params,
            layers,
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// One bias-corrected update of every plane. Non-finite gradients abort
    /// without touching the parameters so the caller can mark the run failed.
    pub fn step(&mut self, model: &mut Model, grads: &GradientSet) -> Result<()> {
        if !grads.is_finite() {
            return Err(Error::NonFinite("gradient in optimiser step".into()));
        }
        self.step += 1;
        let t = self.step;
        let p = self.params;
        for (layer, (moments, grad)) in model
            .layers_mut()
            .iter_mut()
            .zip(self.layers.iter_mut().zip(&grads.layers))
        {
            update_plane(layer.weights_mut().re_mut(), &mut moments.w_re, &grad.w_re, p, t);
            update_plane(layer.weights_mut().im_mut(), &mut moments.w_im, &grad.w_im, p, t);
            update_plane(layer.bias_mut().re_mut(), &mut moments.b_re, &grad.b_re, p, t);
            update_plane(layer.bias_mut().im_mut(), &mut moments.b_im, &grad.b_im, p, t);
        }
        Ok(())
    }
}

fn update_plane(
    values: &mut Array2<f64>,
    moments: &mut PlaneMoments,
    grad: &Array2<f64>,
    p: AdamParams,
    t: u64,
) {
    let m_corr = 1.0 - p.beta1.powi(t as i32);
    let v_corr = 1.0 - p.beta2.powi(t as i32);
    ndarray::Zip::from(values)
        .and(&mut moments.m)
        .and(&mut moments.v)
        .and(grad)
        .for_each(|theta, m, v, &g| {
            *m = p.beta1 * *m + (1.0 - p.beta1) * g;
            *v = p.beta2 * *v + (1.0 - p.beta2) * g * g;
            let m_hat = *m / m_corr;
            let v_hat = *v / v_corr;
            *theta -= p.learning_rate * m_hat / (v_hat.sqrt() + p.epsilon);
        });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activations::ActivationId;
    use crate::autodiff::{DenseLayer, LayerGradients};
    use crate::complex::{ComplexScalar, ComplexTensor};
    use crate::Domain;

    fn tiny_model(w: f64) -> Model {
        let layer = DenseLayer::new(
            ComplexTensor::from_scalar(ComplexScalar::new(w, 0.0)),
            ComplexTensor::from_scalar(ComplexScalar::ZERO),
            ActivationId::Identity,
            Domain::Complex,
        )
        .unwrap();
        Model::new(vec![layer]).unwrap()
    }

    fn grad_of(g: f64) -> GradientSet {
        GradientSet {
            layers: vec![LayerGradients {
                w_re: Array2::from_elem((1, 1), g),
                w_im: Array2::zeros((1, 1)),
                b_re: Array2::zeros((1, 1)),
                b_im: Array2::zeros((1, 1)),
            }],
        }
    }

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut model = tiny_model(0.5);
        let mut state = AdamState::new(&model, AdamParams::default());
        state.step(&mut model, &grad_of(0.0)).unwrap();
        assert_eq!(model.layers()[0].weights().get(0, 0).re, 0.5);
    }

    #[test]
    fn first_step_is_signed_learning_rate() {
        // At t=1 the bias-corrected update is lr * g / (|g| + eps')
        let p = AdamParams::default();
        for g in [3.0, -0.25, 1e-6] {
            let mut model = tiny_model(1.0);
            let mut state = AdamState::new(&model, p);
            state.step(&mut model, &grad_of(g)).unwrap();
            let delta = model.layers()[0].weights().get(0, 0).re - 1.0;
            let expected = -p.learning_rate * g / (g.abs() + p.epsilon);
            assert!(
                (delta - expected).abs() < 1e-12,
                "g={g}: delta {delta}, expected {expected}"
            );
        }
    }

    #[test]
    fn constant_gradient_step_approaches_learning_rate() {
        let p = AdamParams::default();
        let mut model = tiny_model(10.0);
        let mut state = AdamState::new(&model, p);
        let mut prev = 10.0;
        for _ in 0..200 {
            state.step(&mut model, &grad_of(2.0)).unwrap();
            let now = model.layers()[0].weights().get(0, 0).re;
            prev = now;
            let _ = prev;
        }
        let before = model.layers()[0].weights().get(0, 0).re;
        state.step(&mut model, &grad_of(2.0)).unwrap();
        let delta = model.layers()[0].weights().get(0, 0).re - before;
        assert!((delta + p.learning_rate).abs() < 1e-5, "delta {delta}");
    }

    #[test]
    fn non_finite_gradient_is_rejected() {
        let mut model = tiny_model(1.0);
        let mut state = AdamState::new(&model, AdamParams::default());
        let err = state.step(&mut model, &grad_of(f64::NAN)).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
        // parameters untouched
        assert_eq!(model.layers()[0].weights().get(0, 0).re, 1.0);
    }
}
