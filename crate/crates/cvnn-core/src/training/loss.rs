//! Cross-entropy losses over probability outputs.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::activations::ActivationId;
use crate::error::{Error, Result};

/// Floor added to probabilities before taking logs.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    CategoricalCe,
    BinaryCe,
}

impl LossKind {
    /// The output head this loss expects.
    pub fn head(self) -> ActivationId {
        match self {
            LossKind::CategoricalCe => ActivationId::SoftmaxIntensity,
            LossKind::BinaryCe => ActivationId::SigmoidIntensity,
        }
    }

    pub fn eval(self, probs: &Array2<f64>, targets: &Array2<f64>) -> Result<f64> {
        match self {
            LossKind::CategoricalCe => categorical_ce(probs, targets),
            LossKind::BinaryCe => binary_ce(probs, targets),
        }
    }

    pub fn eval_grad(self, probs: &Array2<f64>, targets: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
        match self {
            LossKind::CategoricalCe => categorical_ce_grad(probs, targets),
            LossKind::BinaryCe => binary_ce_grad(probs, targets),
        }
    }
}

fn check_shapes(probs: &Array2<f64>, targets: &Array2<f64>, op: &'static str) -> Result<()> {
    if probs.dim() != targets.dim() {
        return Err(Error::DimensionMismatch {
            op,
            left_rows: probs.nrows(),
            left_cols: probs.ncols(),
            right_rows: targets.nrows(),
            right_cols: targets.ncols(),
        });
    }
    Ok(())
}

/// Mean over the batch of `-sum_j y_j log(p_j + floor)`.
pub fn categorical_ce(probs: &Array2<f64>, targets: &Array2<f64>) -> Result<f64> {
    check_shapes(probs, targets, "categorical cross entropy")?;
    let batch = probs.nrows() as f64;
    let mut total = 0.0;
    for (&p, &y) in probs.iter().zip(targets.iter()) {
        if y != 0.0 {
            total -= y * (p + PROB_FLOOR).ln();
        }
    }
    Ok(total / batch)
}

/// Loss value plus its gradient with respect to the probabilities.
pub fn categorical_ce_grad(probs: &Array2<f64>, targets: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
    let value = categorical_ce(probs, targets)?;
    let batch = probs.nrows() as f64;
    let grad = ndarray::Zip::from(probs)
        .and(targets)
        .map_collect(|&p, &y| if y == 0.0 { 0.0 } else { -y / (p + PROB_FLOOR) / batch });
    Ok((value, grad))
}

/// Mean over the batch of `-sum_j [y log(p) + (1-y) log(1-p)]` per entry.
pub fn binary_ce(probs: &Array2<f64>, targets: &Array2<f64>) -> Result<f64> {
    check_shapes(probs, targets, "binary cross entropy")?;
    let batch = probs.nrows() as f64;
    let mut total = 0.0;
    for (&p, &y) in probs.iter().zip(targets.iter()) {
        total -= y * (p + PROB_FLOOR).ln() + (1.0 - y) * (1.0 - p + PROB_FLOOR).ln();
    }
    Ok(total / batch)
}

pub fn binary_ce_grad(probs: &Array2<f64>, targets: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
    let value = binary_ce(probs, targets)?;
    let batch = probs.nrows() as f64;
    let grad = ndarray::Zip::from(probs).and(targets).map_collect(|&p, &y| {
        (-y / (p + PROB_FLOOR) + (1.0 - y) / (1.0 - p + PROB_FLOOR)) / batch
    });
    Ok((value, grad))
}

/// Fraction of rows whose argmax prediction matches the argmax target.
pub fn accuracy(probs: &Array2<f64>, targets: &Array2<f64>) -> f64 {
    let mut correct = 0usize;
    for (p_row, t_row) in probs.rows().into_iter().zip(targets.rows()) {
        let pred = argmax(p_row.iter().copied());
        let truth = argmax(t_row.iter().copied());
        if pred == truth {
            correct += 1;
        }
    }
    correct as f64 / probs.nrows() as f64
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_value {
            best_value = v;
            best = i;
        }
    }
    best
}
