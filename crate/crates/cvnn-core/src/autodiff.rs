//! Forward and backward passes for complex dense layers.
//!
//! Gradients are computed in the real-pair basis: every complex parameter is
//! treated as two independent real parameters and each complex operation is
//! expanded into its real/imaginary components before reverse accumulation.
//! For a real-valued loss this is equivalent to following `2 * dL/d(conj z)`
//! from Wirtinger calculus read as a `(Re, Im)` vector, and
//! [`wirtinger_consistency`] verifies that equivalence numerically.

use ndarray::{Array2, Axis};

use crate::activations::ActivationId;
use crate::capacity::NetworkPlan;
use crate::complex::{ComplexScalar, ComplexTensor};
use crate::error::{Error, Result};
use crate::init::{self, InitScheme, InitSpec};
use crate::training::loss;
use crate::Domain;

/// Pre-activations closer than this to a ReLU seam or a magnitude kink make
/// finite differences meaningless; consistency checks refuse such points.
pub const SEAM_TOLERANCE: f64 = 1e-3;

/// One dense layer `o = activation(x W + b)`.
#[derive(Clone, Debug)]
pub struct DenseLayer {
    weights: ComplexTensor,
    bias: ComplexTensor,
    activation: ActivationId,
    domain: Domain,
}

impl DenseLayer {
    pub fn new(
        weights: ComplexTensor,
        bias: ComplexTensor,
        activation: ActivationId,
        domain: Domain,
    ) -> Result<Self> {
        if bias.rows() != 1 || bias.cols() != weights.cols() {
            return Err(Error::DimensionMismatch {
                op: "dense layer bias",
                left_rows: weights.rows(),
                left_cols: weights.cols(),
                right_rows: bias.rows(),
                right_cols: bias.cols(),
            });
        }
        Ok(Self {
            weights,
            bias,
            activation,
            domain,
        })
    }

    /// `(z, o)` with `z = x W + b` broadcast over batch rows and
    /// `o = activation(z)`.
    pub fn forward(&self, x: &ComplexTensor) -> Result<(ComplexTensor, ComplexTensor)> {
        let z = x.matmul(&self.weights)?.add_row(&self.bias)?;
        let o = self.activation.apply(&z)?;
        Ok((z, o))
    }

    pub fn weights(&self) -> &ComplexTensor {
        &self.weights
    }

    pub fn bias(&self) -> &ComplexTensor {
        &self.bias
    }

    pub fn weights_mut(&mut self) -> &mut ComplexTensor {
        &mut self.weights
    }

    pub fn bias_mut(&mut self) -> &mut ComplexTensor {
        &mut self.bias
    }

    pub fn activation(&self) -> ActivationId {
        self.activation
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn input_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.weights.cols()
    }
}

/// Ordered dense layers; the last layer's activation is the output head.
#[derive(Clone, Debug)]
pub struct Model {
    layers: Vec<DenseLayer>,
}

/// Forward intermediates of one pass: the input batch plus `(z, o)` per layer.
#[derive(Clone, Debug)]
pub struct Tape {
    input: ComplexTensor,
    records: Vec<(ComplexTensor, ComplexTensor)>,
}

impl Tape {
    pub fn layer_pre(&self, layer: usize) -> &ComplexTensor {
        &self.records[layer].0
    }

    pub fn layer_post(&self, layer: usize) -> &ComplexTensor {
        &self.records[layer].1
    }

    pub fn layer_input(&self, layer: usize) -> &ComplexTensor {
        if layer == 0 {
            &self.input
        } else {
            &self.records[layer - 1].1
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Per-layer gradients of a scalar loss with respect to every real plane.
#[derive(Clone, Debug)]
pub struct GradientSet {
    pub layers: Vec<LayerGradients>,
}

#[derive(Clone, Debug)]
pub struct LayerGradients {
    pub w_re: Array2<f64>,
    pub w_im: Array2<f64>,
    pub b_re: Array2<f64>,
    pub b_im: Array2<f64>,
}

impl GradientSet {
    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(|l| {
            l.w_re.iter().all(|v| v.is_finite())
                && l.w_im.iter().all(|v| v.is_finite())
                && l.b_re.iter().all(|v| v.is_finite())
                && l.b_im.iter().all(|v| v.is_finite())
        })
    }
}

impl Model {
    pub fn new(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidPlan("model needs at least one layer".into()));
        }
        for w in layers.windows(2) {
            if w[0].output_dim() != w[1].input_dim() {
                return Err(Error::DimensionMismatch {
                    op: "layer chaining",
                    left_rows: w[0].input_dim(),
                    left_cols: w[0].output_dim(),
                    right_rows: w[1].input_dim(),
                    right_cols: w[1].output_dim(),
                });
            }
            if w[0].activation().is_head() {
                return Err(Error::InvalidPlan(format!(
                    "activation {} is only valid as the output head",
                    w[0].activation()
                )));
            }
        }
        Ok(Self { layers })
    }

    /// Builds a model from a width plan with seeded initialisation. Hidden
    /// layers use `hidden`, the last layer uses `head`. Weights draw from a
    /// per-layer stream derived from `init.seed`; biases start at zero.
    pub fn from_plan(
        plan: &NetworkPlan,
        hidden: ActivationId,
        head: ActivationId,
        init_spec: &InitSpec,
    ) -> Result<Self> {
        plan.validate()?;
        if hidden.is_head() {
            return Err(Error::InvalidPlan(format!(
                "activation {hidden} is only valid as the output head"
            )));
        }
        if plan.domain == Domain::Real && init_spec.scheme == InitScheme::ComplexVarianceScaled {
            return Err(Error::InvalidPlan(
                "complex initialisation would put non-zero imaginary weights in a real-domain plan".into(),
            ));
        }
        let dims = plan.layer_dims();
        let last = dims.len() - 1;
        let mut layers = Vec::with_capacity(dims.len());
        for (l, (n_in, n_out)) in dims.into_iter().enumerate() {
            let seed = init::derive_seed(init_spec.seed, l as u64);
            let weights = match init_spec.scheme {
                InitScheme::ComplexVarianceScaled => {
                    init::init_complex(n_in, n_out, init_spec.fan_mode, seed)
                }
                InitScheme::RealGlorot => ComplexTensor::from_real(init::init_real(n_in, n_out, seed)),
                InitScheme::Zeros => init::init_zeros(n_in, n_out),
            };
            let bias = init::init_zeros(1, n_out);
            let activation = if l == last { head } else { hidden };
            layers.push(DenseLayer::new(weights, bias, activation, plan.domain)?);
        }
        Model::new(layers)
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer] {
        &mut self.layers
    }

    pub fn head(&self) -> ActivationId {
        self.layers.last().expect("non-empty").activation()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("non-empty").output_dim()
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().expect("non-empty").input_dim()
    }

    /// Full forward pass recording intermediates for the backward pass.
    pub fn forward(&self, x: &ComplexTensor) -> Result<(Tape, ComplexTensor)> {
        let mut records = Vec::with_capacity(self.layers.len());
        let mut current = x.clone();
        for layer in &self.layers {
            let (z, o) = layer.forward(&current)?;
            current = o.clone();
            records.push((z, o));
        }
        Ok((
            Tape {
                input: x.clone(),
                records,
            },
            current,
        ))
    }

    /// Forward pass without a tape, for evaluation.
    pub fn forward_output(&self, x: &ComplexTensor) -> Result<ComplexTensor> {
        let mut current = x.clone();
        for layer in &self.layers {
            let (_, o) = layer.forward(&current)?;
            current = o;
        }
        Ok(current)
    }
}

/// Reverse accumulation from a gradient on the real plane of the model
/// output; the imaginary plane of the output is treated as unused by the
/// loss. See [`backward_full`] for losses that also read the imaginary plane.
pub fn backward(tape: &Tape, model: &Model, dl_dout: &Array2<f64>) -> Result<GradientSet> {
    let zeros = Array2::zeros(dl_dout.dim());
    backward_full(tape, model, dl_dout.clone(), zeros)
}

/// Reverse accumulation from gradients on both output planes.
///
/// For layers tagged [`Domain::Real`] the imaginary-plane gradients are
/// identically zero: those planes are not parameters of a real network.
pub fn backward_full(
    tape: &Tape,
    model: &Model,
    go_re: Array2<f64>,
    go_im: Array2<f64>,
) -> Result<GradientSet> {
    if tape.len() != model.layers.len() {
        return Err(Error::TapeMismatch {
            tape_layers: tape.len(),
            model_layers: model.layers.len(),
        });
    }
    let out_dim = tape.layer_post(tape.len() - 1).dim();
    if go_re.dim() != out_dim || go_im.dim() != out_dim {
        return Err(Error::DimensionMismatch {
            op: "backward output gradient",
            left_rows: out_dim.0,
            left_cols: out_dim.1,
            right_rows: go_re.nrows(),
            right_cols: go_re.ncols(),
        });
    }

    let mut grads = Vec::with_capacity(model.layers.len());
    let mut go_re = go_re;
    let mut go_im = go_im;
    for l in (0..model.layers.len()).rev() {
        let layer = &model.layers[l];
        let (gz_re, gz_im) = layer
            .activation()
            .vjp(tape.layer_pre(l), tape.layer_post(l), &go_re, &go_im);

        let input = tape.layer_input(l);
        // z = xW + b in planes:
        //   z_re = x_re W_re - x_im W_im + b_re
        //   z_im = x_im W_re + x_re W_im + b_im
        let mut w_re = input.re().t().dot(&gz_re) + input.im().t().dot(&gz_im);
        let mut w_im = input.re().t().dot(&gz_im) - input.im().t().dot(&gz_re);
        let mut b_re = gz_re.sum_axis(Axis(0)).insert_axis(Axis(0));
        let mut b_im = gz_im.sum_axis(Axis(0)).insert_axis(Axis(0));

        if layer.domain() == Domain::Real {
            w_im.fill(0.0);
            b_im.fill(0.0);
        }

        if l > 0 {
            let w = layer.weights();
            let next_re = gz_re.dot(&w.re().t()) + gz_im.dot(&w.im().t());
            let next_im = gz_im.dot(&w.re().t()) - gz_re.dot(&w.im().t());
            go_re = next_re;
            go_im = next_im;
        }

        grads.push(LayerGradients { w_re, w_im, b_re, b_im });
    }
    grads.reverse();
    Ok(GradientSet { layers: grads })
}

/// Numerical Wirtinger derivatives of a real-valued function of one complex
/// variable: `df/dz = (f_x - i f_y) / 2`, `df/d(conj z) = (f_x + i f_y) / 2`
/// with the partials estimated by central differences of step `h`.
pub fn wirtinger_grads(
    f: impl Fn(ComplexScalar) -> f64,
    z: ComplexScalar,
    h: f64,
) -> Result<(ComplexScalar, ComplexScalar)> {
    let eval = |p: ComplexScalar| -> Result<f64> {
        let v = f(p);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("f({p}) in Wirtinger derivative")));
        }
        Ok(v)
    };
    let fx = (eval(ComplexScalar::new(z.re + h, z.im))? - eval(ComplexScalar::new(z.re - h, z.im))?)
        / (2.0 * h);
    let fy = (eval(ComplexScalar::new(z.re, z.im + h))? - eval(ComplexScalar::new(z.re, z.im - h))?)
        / (2.0 * h);
    Ok((
        ComplexScalar::new(fx / 2.0, -fy / 2.0),
        ComplexScalar::new(fx / 2.0, fy / 2.0),
    ))
}

/// Loss implied by a model's output head: cross entropy for the probability
/// heads, otherwise squared error against the target on both planes
/// (imaginary target zero), averaged over the batch.
pub fn head_loss(head: ActivationId, output: &ComplexTensor, targets: &Array2<f64>) -> Result<f64> {
    match head {
        ActivationId::SoftmaxIntensity => loss::categorical_ce(output.re(), targets),
        ActivationId::SigmoidIntensity => loss::binary_ce(output.re(), targets),
        _ => {
            if output.dim() != targets.dim() {
                return Err(Error::DimensionMismatch {
                    op: "squared error",
                    left_rows: output.rows(),
                    left_cols: output.cols(),
                    right_rows: targets.nrows(),
                    right_cols: targets.ncols(),
                });
            }
            let batch = output.rows() as f64;
            let mut total = 0.0;
            for ((&o_re, &o_im), &t) in output.re().iter().zip(output.im()).zip(targets) {
                let d = o_re - t;
                total += d * d + o_im * o_im;
            }
            Ok(total / batch)
        }
    }
}

/// Loss together with its gradient on both output planes.
pub fn head_loss_grad(
    head: ActivationId,
    output: &ComplexTensor,
    targets: &Array2<f64>,
) -> Result<(f64, Array2<f64>, Array2<f64>)> {
    match head {
        ActivationId::SoftmaxIntensity => {
            let (value, d_re) = loss::categorical_ce_grad(output.re(), targets)?;
            Ok((value, d_re, Array2::zeros(output.dim())))
        }
        ActivationId::SigmoidIntensity => {
            let (value, d_re) = loss::binary_ce_grad(output.re(), targets)?;
            Ok((value, d_re, Array2::zeros(output.dim())))
        }
        _ => {
            let value = head_loss(head, output, targets)?;
            let batch = output.rows() as f64;
            let d_re = (output.re() - targets) * (2.0 / batch);
            let d_im = output.im() * (2.0 / batch);
            Ok((value, d_re, d_im))
        }
    }
}

/// Loss of a model on a batch under its head-implied loss.
pub fn model_loss(model: &Model, x: &ComplexTensor, targets: &Array2<f64>) -> Result<f64> {
    let output = model.forward_output(x)?;
    head_loss(model.head(), &output, targets)
}

/// Relative deviation guarded against vanishing denominators; deviations of
/// magnitudes below the floor are measured against the floor instead.
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-3)
}

/// Rejects forward passes whose pre-activations sit on a non-differentiable
/// seam of their activation.
fn check_seams(model: &Model, tape: &Tape) -> Result<()> {
    for (l, layer) in model.layers.iter().enumerate() {
        let z = tape.layer_pre(l);
        let min_abs = match layer.activation() {
            ActivationId::SplitRelu => z
                .re()
                .iter()
                .chain(z.im().iter())
                .fold(f64::INFINITY, |acc, v| acc.min(v.abs())),
            ActivationId::Magnitude => z
                .re()
                .iter()
                .zip(z.im().iter())
                .fold(f64::INFINITY, |acc, (r, i)| acc.min(r.hypot(*i))),
            _ => continue,
        };
        if min_abs < SEAM_TOLERANCE {
            return Err(Error::SeamTooClose { layer: l, min_abs });
        }
    }
    Ok(())
}

/// Compares the real-pair backward gradients against the Wirtinger steepest
/// descent direction `2 * dL/d(conj z)` — estimated by central differences
/// per parameter — and returns the maximum [`relative_deviation`] over all
/// parameters. For real-domain layers only the real planes are parameters.
pub fn wirtinger_consistency(
    model: &Model,
    x: &ComplexTensor,
    targets: &Array2<f64>,
    h: f64,
) -> Result<f64> {
    let (tape, output) = model.forward(x)?;
    check_seams(model, &tape)?;
    let (_, d_re, d_im) = head_loss_grad(model.head(), &output, targets)?;
    let grads = backward_full(&tape, model, d_re, d_im)?;

    let mut probe = model.clone();
    let mut worst: f64 = 0.0;
    for l in 0..model.layers.len() {
        let complex_plane = model.layers[l].domain() == Domain::Complex;
        for weights in [true, false] {
            let (rows, cols) = if weights {
                model.layers[l].weights().dim()
            } else {
                model.layers[l].bias().dim()
            };
            for i in 0..rows {
                for j in 0..cols {
                    let planes: &[bool] = if complex_plane { &[true, false] } else { &[true] };
                    for &re_plane in planes {
                        let read = |m: &Model| {
                            let t = if weights {
                                m.layers[l].weights()
                            } else {
                                m.layers[l].bias()
                            };
                            if re_plane {
                                t.re()[[i, j]]
                            } else {
                                t.im()[[i, j]]
                            }
                        };
                        let write = |m: &mut Model, v: f64| {
                            let t = if weights {
                                m.layers_mut()[l].weights_mut()
                            } else {
                                m.layers_mut()[l].bias_mut()
                            };
                            if re_plane {
                                t.re_mut()[[i, j]] = v;
                            } else {
                                t.im_mut()[[i, j]] = v;
                            }
                        };

                        let base = read(&probe);
                        write(&mut probe, base + h);
                        let up = model_loss(&probe, x, targets)?;
                        write(&mut probe, base - h);
                        let down = model_loss(&probe, x, targets)?;
                        write(&mut probe, base);
                        if !up.is_finite() || !down.is_finite() {
                            return Err(Error::NonFinite(format!(
                                "loss while probing layer {l} entry ({i},{j})"
                            )));
                        }
                        let fd = (up - down) / (2.0 * h);

                        let lg = &grads.layers[l];
                        let bp = match (weights, re_plane) {
                            (true, true) => lg.w_re[[i, j]],
                            (true, false) => lg.w_im[[i, j]],
                            (false, true) => lg.b_re[[i, j]],
                            (false, false) => lg.b_im[[i, j]],
                        };
                        worst = worst.max(relative_deviation(bp, fd));
                    }
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activations::ActivationId;

    fn scalar_layer(w: ComplexScalar, b: ComplexScalar, act: ActivationId) -> DenseLayer {
        DenseLayer::new(
            ComplexTensor::from_scalar(w),
            ComplexTensor::from_scalar(b),
            act,
            Domain::Complex,
        )
        .unwrap()
    }

    #[test]
    fn scalar_identity_forward() {
        let layer = scalar_layer(
            ComplexScalar::new(1.0, 1.0),
            ComplexScalar::ZERO,
            ActivationId::Identity,
        );
        let x = ComplexTensor::from_scalar(ComplexScalar::ONE);
        let (_, o) = layer.forward(&x).unwrap();
        assert_eq!(o.get(0, 0), ComplexScalar::new(1.0, 1.0));
    }

    #[test]
    fn zero_input_yields_bias() {
        let layer = scalar_layer(
            ComplexScalar::new(2.0, -3.0),
            ComplexScalar::new(0.5, 0.25),
            ActivationId::Identity,
        );
        let x = ComplexTensor::from_scalar(ComplexScalar::ZERO);
        let (z, _) = layer.forward(&x).unwrap();
        assert_eq!(z.get(0, 0), ComplexScalar::new(0.5, 0.25));
    }

    #[test]
    fn real_input_pre_activation_splits_per_simplified_product() {
        // For Im(x) = 0: Im(z) = Re(x) Im(W) + Im(b)
        let w = init::init_complex(4, 3, crate::FanMode::FanIn, 17);
        let mut bias = ComplexTensor::zeros(1, 3);
        bias.set(0, 1, ComplexScalar::new(0.0, 0.75));
        let layer = DenseLayer::new(w.clone(), bias.clone(), ActivationId::Identity, Domain::Complex).unwrap();
        let x = ComplexTensor::from_real(init::init_real(2, 4, 23));
        let (z, _) = layer.forward(&x).unwrap();
        let expected_im = x.re().dot(w.im()) + bias.im().row(0);
        assert_eq!(z.im(), &expected_im);
    }

    #[test]
    fn backward_single_identity_layer() {
        // loss = Re(o) summed, real input: dRe(W) = Re(x)^T * 1, dIm(W) = 0
        let w = ComplexScalar::new(0.3, -0.8);
        let layer = scalar_layer(w, ComplexScalar::ZERO, ActivationId::Identity);
        let model = Model::new(vec![layer]).unwrap();
        let x = ComplexTensor::from_scalar(ComplexScalar::new(2.5, 0.0));
        let (tape, _) = model.forward(&x).unwrap();
        let grads = backward(&tape, &model, &Array2::ones((1, 1))).unwrap();
        assert_eq!(grads.layers[0].w_re[[0, 0]], 2.5);
        assert_eq!(grads.layers[0].w_im[[0, 0]], 0.0);
        assert_eq!(grads.layers[0].b_re[[0, 0]], 1.0);
    }

    #[test]
    fn backward_intensity_head_gives_conjugate_pair() {
        // loss = |x w|^2 with x = 1: gradients (2a, 2b)
        let (a, b) = (0.7, -0.4);
        let layer = scalar_layer(ComplexScalar::new(a, b), ComplexScalar::ZERO, ActivationId::Intensity);
        let model = Model::new(vec![layer]).unwrap();
        let x = ComplexTensor::from_scalar(ComplexScalar::ONE);
        let (tape, _) = model.forward(&x).unwrap();
        let grads = backward(&tape, &model, &Array2::ones((1, 1))).unwrap();
        assert!((grads.layers[0].w_re[[0, 0]] - 2.0 * a).abs() < 1e-14);
        assert!((grads.layers[0].w_im[[0, 0]] - 2.0 * b).abs() < 1e-14);
    }

    #[test]
    fn backward_is_additive_in_output_gradient() {
        let plan = NetworkPlan::new(Domain::Complex, 3, vec![4], 2);
        let model = Model::from_plan(
            &plan,
            ActivationId::Tanh,
            ActivationId::Identity,
            &InitSpec::complex_variance_scaled(5),
        )
        .unwrap();
        let x = ComplexTensor::from_planes(init::init_real(2, 3, 7), init::init_real(2, 3, 8)).unwrap();
        let (tape, out) = model.forward(&x).unwrap();

        let g1 = Array2::from_shape_fn(out.dim(), |(i, j)| (i + 2 * j) as f64 * 0.25);
        let g2 = Array2::from_shape_fn(out.dim(), |(i, j)| 1.0 - (i as f64) + (j as f64) * 0.5);
        let sum = &g1 + &g2;

        let ga = backward(&tape, &model, &g1).unwrap();
        let gb = backward(&tape, &model, &g2).unwrap();
        let gs = backward(&tape, &model, &sum).unwrap();
        for l in 0..gs.layers.len() {
            let combined = &ga.layers[l].w_re + &gb.layers[l].w_re;
            let diff = &gs.layers[l].w_re - &combined;
            assert!(diff.iter().all(|d| d.abs() < 1e-12));
            let combined_im = &ga.layers[l].w_im + &gb.layers[l].w_im;
            let diff_im = &gs.layers[l].w_im - &combined_im;
            assert!(diff_im.iter().all(|d| d.abs() < 1e-12));
        }
    }

    #[test]
    fn wirtinger_grads_of_intensity() {
        // d|z|^2/dz = conj(z)
        let (dz, dzbar) = wirtinger_grads(|z| z.intensity(), ComplexScalar::new(3.0, 4.0), 1e-6).unwrap();
        assert!((dz.re - 3.0).abs() < 1e-6);
        assert!((dz.im + 4.0).abs() < 1e-6);
        assert!((dzbar.re - 3.0).abs() < 1e-6);
        assert!((dzbar.im - 4.0).abs() < 1e-6);
    }

    #[test]
    fn wirtinger_grads_of_real_part() {
        let (dz, dzbar) = wirtinger_grads(|z| z.re, ComplexScalar::new(-2.0, 5.0), 1e-6).unwrap();
        assert!((dz.re - 0.5).abs() < 1e-9 && dz.im.abs() < 1e-9);
        assert!((dzbar.re - 0.5).abs() < 1e-9 && dzbar.im.abs() < 1e-9);
    }

    #[test]
    fn wirtinger_grads_of_magnitude() {
        // d|z|/dz at 3+4i is (3 - 4i) / 10
        let (dz, _) = wirtinger_grads(|z| z.magnitude(), ComplexScalar::new(3.0, 4.0), 1e-6).unwrap();
        assert!((dz.re - 0.3).abs() < 1e-7);
        assert!((dz.im + 0.4).abs() < 1e-7);
    }

    #[test]
    fn wirtinger_consistency_linear_model() {
        let plan = NetworkPlan::new(Domain::Complex, 3, vec![4], 2);
        let model = Model::from_plan(
            &plan,
            ActivationId::Identity,
            ActivationId::Identity,
            &InitSpec::complex_variance_scaled(21),
        )
        .unwrap();
        let x = ComplexTensor::from_planes(init::init_real(4, 3, 31), init::init_real(4, 3, 32)).unwrap();
        let y = Array2::from_shape_fn((4, 2), |(i, j)| ((i + j) % 2) as f64);
        let dev = wirtinger_consistency(&model, &x, &y, 1e-6).unwrap();
        assert!(dev < 1e-8, "deviation {dev}");
    }

    #[test]
    fn tape_model_mismatch_is_reported() {
        let layer = scalar_layer(ComplexScalar::ONE, ComplexScalar::ZERO, ActivationId::Identity);
        let model = Model::new(vec![layer.clone()]).unwrap();
        let bigger = Model::new(vec![layer.clone(), layer]).unwrap();
        let x = ComplexTensor::from_scalar(ComplexScalar::ONE);
        let (tape, _) = model.forward(&x).unwrap();
        let err = backward(&tape, &bigger, &Array2::ones((1, 1))).unwrap_err();
        assert!(matches!(err, Error::TapeMismatch { .. }));
    }

    #[test]
    fn head_activation_rejected_in_hidden_position() {
        let plan = NetworkPlan::new(Domain::Complex, 3, vec![4], 2);
        let err = Model::from_plan(
            &plan,
            ActivationId::SoftmaxIntensity,
            ActivationId::SoftmaxIntensity,
            &InitSpec::complex_variance_scaled(1),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidPlan(_)));
    }

    #[test]
    fn real_domain_rejects_complex_init() {
        let plan = NetworkPlan::new(Domain::Real, 3, vec![4], 2);
        let err = Model::from_plan(
            &plan,
            ActivationId::SplitRelu,
            ActivationId::SoftmaxIntensity,
            &InitSpec::complex_variance_scaled(1),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidPlan(_)));
    }
}
