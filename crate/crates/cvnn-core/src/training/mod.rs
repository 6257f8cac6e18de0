//! Seeded training runs and weight-trajectory diagnostics.
//!
//! A run is fully determined by `(plan, dataset, config, seed)`: the seed
//! derives the initialisation streams and the per-epoch shuffles. Runs that
//! hit a pole of the activation or produce non-finite losses are marked
//! failed and keep their truncated diagnostics instead of being retried.

mod adam;
pub mod loss;

pub use adam::{AdamParams, AdamState};
pub use loss::LossKind;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::activations::ActivationId;
use crate::autodiff::{backward, Model};
use crate::capacity::NetworkPlan;
use crate::complex::ComplexTensor;
use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::init::{derive_seed, FanMode, InitScheme, InitSpec};
use crate::Domain;

/// Stream tags for per-run seed derivation.
const STREAM_INIT: u64 = 1;
const STREAM_SHUFFLE: u64 = 2;

/// Batch size used by every experiment.
pub const DEFAULT_BATCH_SIZE: usize = 128;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamParams,
    pub loss: LossKind,
    pub runs: usize,
    pub base_seed: u64,
    pub hidden_activation: ActivationId,
    pub init_scheme: InitScheme,
    pub fan_mode: FanMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            batch_size: DEFAULT_BATCH_SIZE,
            adam: AdamParams::default(),
            loss: LossKind::CategoricalCe,
            runs: 10,
            base_seed: 0,
            hidden_activation: ActivationId::SplitRelu,
            init_scheme: InitScheme::ComplexVarianceScaled,
            fan_mode: FanMode::FanIn,
        }
    }
}

impl TrainConfig {
    /// Initialisation spec for one run of a plan: real-domain plans always
    /// use Glorot, complex-domain plans use the configured scheme.
    pub fn init_for(&self, domain: Domain, run_seed: u64) -> InitSpec {
        let scheme = match domain {
            Domain::Real => InitScheme::RealGlorot,
            Domain::Complex => self.init_scheme,
        };
        InitSpec {
            scheme,
            fan_mode: self.fan_mode,
            seed: derive_seed(run_seed, STREAM_INIT),
        }
    }

    /// Seeds of the independent runs of one experiment.
    pub fn run_seeds(&self) -> Vec<u64> {
        (0..self.runs as u64).map(|i| self.base_seed + i).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochDiagnostics {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    pub test_acc: f64,
    pub mean_abs_re: f64,
    pub mean_abs_im: f64,
    pub mean_magnitude: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub diagnostics: Vec<EpochDiagnostics>,
    pub failed: bool,
    pub failure_reason: Option<String>,
}

impl RunResult {
    /// Test accuracy after the last completed epoch; `None` for failed or
    /// empty runs, which never contribute to best-of selection.
    pub fn final_test_acc(&self) -> Option<f64> {
        if self.failed {
            return None;
        }
        self.diagnostics.last().map(|d| d.test_acc)
    }
}

/// Mean `|Re|`, mean `|Im|` and mean `|z|` pooled over all entries of all
/// weight matrices (biases excluded).
pub fn weight_stats(model: &Model) -> (f64, f64, f64) {
    let mut count = 0usize;
    let (mut sum_re, mut sum_im, mut sum_mag) = (0.0, 0.0, 0.0);
    for layer in model.layers() {
        let w = layer.weights();
        for (&re, &im) in w.re().iter().zip(w.im().iter()) {
            sum_re += re.abs();
            sum_im += im.abs();
            sum_mag += re.hypot(im);
            count += 1;
        }
    }
    let n = count as f64;
    (sum_re / n, sum_im / n, sum_mag / n)
}

/// Evaluates mean loss and accuracy over a split in fixed-size chunks.
pub fn evaluate(
    model: &Model,
    x: &ComplexTensor,
    y: &Array2<f64>,
    loss: LossKind,
    chunk: usize,
) -> Result<(f64, f64)> {
    let n = x.rows();
    let mut total_loss = 0.0;
    let mut correct_weighted = 0.0;
    let mut start = 0;
    while start < n {
        let end = (start + chunk).min(n);
        let idx: Vec<usize> = (start..end).collect();
        let xb = x.select_rows(&idx);
        let yb = y.select(ndarray::Axis(0), &idx);
        let out = model.forward_output(&xb)?;
        let batch_loss = loss.eval(out.re(), &yb)?;
        let batch_acc = loss::accuracy(out.re(), &yb);
        let weight = (end - start) as f64;
        total_loss += batch_loss * weight;
        correct_weighted += batch_acc * weight;
        start = end;
    }
    Ok((total_loss / n as f64, correct_weighted / n as f64))
}

/// Trains one seeded run of `plan` on `dataset`.
///
/// Minibatch order reshuffles every epoch from a stream derived from the run
/// seed; diagnostics are recorded after each epoch with weight statistics
/// pooled over all layers. Identical inputs produce identical results.
pub fn train_run(
    plan: &NetworkPlan,
    dataset: &Dataset,
    config: &TrainConfig,
    seed: u64,
) -> Result<RunResult> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let head = config.loss.head();
    let mut model = Model::from_plan(
        plan,
        config.hidden_activation,
        head,
        &config.init_for(plan.domain, seed),
    )?;
    let mut optimizer = AdamState::new(&model, config.adam);

    let n_train = dataset.x_train.rows();
    let mut order: Vec<usize> = (0..n_train).collect();
    let mut diagnostics = Vec::with_capacity(config.epochs);
    let mut failure: Option<String> = None;

    'epochs: for epoch in 0..config.epochs {
        let mut rng =
            rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_SHUFFLE + epoch as u64));
        order.shuffle(&mut rng);

        for batch in order.chunks(config.batch_size) {
            let xb = dataset.x_train.select_rows(batch);
            let yb = dataset.y_train.select(ndarray::Axis(0), batch);
            let step = (|| -> Result<()> {
                let (tape, out) = model.forward(&xb)?;
                let (loss_value, d_probs) = config.loss.eval_grad(out.re(), &yb)?;
                if !loss_value.is_finite() {
                    return Err(Error::NonFinite("training loss".into()));
                }
                let grads = backward(&tape, &model, &d_probs)?;
                optimizer.step(&mut model, &grads)
            })();
            if let Err(e) = step {
                failure = Some(format!("epoch {epoch}: {e}"));
                break 'epochs;
            }
        }

        let eval = (|| -> Result<EpochDiagnostics> {
            let (train_loss, train_acc) = evaluate(
                &model,
                &dataset.x_train,
                &dataset.y_train,
                config.loss,
                EVAL_CHUNK,
            )?;
            let (_, test_acc) = evaluate(
                &model,
                &dataset.x_test,
                &dataset.y_test,
                config.loss,
                EVAL_CHUNK,
            )?;
            let (mean_abs_re, mean_abs_im, mean_magnitude) = weight_stats(&model);
            Ok(EpochDiagnostics {
                epoch,
                train_loss,
                train_acc,
                test_acc,
                mean_abs_re,
                mean_abs_im,
                mean_magnitude,
            })
        })();
        match eval {
            Ok(diag) => diagnostics.push(diag),
            Err(e) => {
                failure = Some(format!("epoch {epoch} evaluation: {e}"));
                break 'epochs;
            }
        }
    }

    Ok(RunResult {
        seed,
        diagnostics,
        failed: failure.is_some(),
        failure_reason: failure,
    })
}

const EVAL_CHUNK: usize = 512;

/// The non-failed run with the highest final test accuracy; ties break
/// towards the lower seed.
pub fn best_of_runs(results: &[RunResult]) -> Result<&RunResult> {
    results
        .iter()
        .filter_map(|r| r.final_test_acc().map(|acc| (r, acc)))
        .max_by(|(ra, aa), (rb, ab)| {
            aa.partial_cmp(ab)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(rb.seed.cmp(&ra.seed))
        })
        .map(|(r, _)| r)
        .ok_or(Error::AllRunsFailed {
            total: results.len(),
        })
}

/// How closely the imaginary weight trajectory follows the real one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FollowScore {
    /// Pearson correlation of the per-epoch increments of mean `|Re|` and
    /// mean `|Im|`; `None` when either series is constant.
    pub delta_correlation: Option<f64>,
    /// Convergence epoch of the imaginary series minus that of the real
    /// series; `None` when either never settles.
    pub convergence_lag: Option<i64>,
}

/// Relative threshold used to call a per-epoch increment "settled".
const CONVERGENCE_EPSILON_REL: f64 = 1e-4;

/// Computes the follow diagnostics over a trajectory of at least 10 epochs.
pub fn follow_score(diagnostics: &[EpochDiagnostics]) -> Result<FollowScore> {
    if diagnostics.len() < 10 {
        return Err(Error::InsufficientDiagnostics {
            required: 10,
            got: diagnostics.len(),
        });
    }
    let re: Vec<f64> = diagnostics.iter().map(|d| d.mean_abs_re).collect();
    let im: Vec<f64> = diagnostics.iter().map(|d| d.mean_abs_im).collect();
    let d_re = increments(&re);
    let d_im = increments(&im);

    Ok(FollowScore {
        delta_correlation: pearson(&d_re, &d_im),
        convergence_lag: match (convergence_epoch(&re), convergence_epoch(&im)) {
            (Some(r), Some(i)) => Some(i as i64 - r as i64),
            _ => None,
        },
    })
}

fn increments(series: &[f64]) -> Vec<f64> {
    series.windows(2).map(|w| w[1] - w[0]).collect()
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - mean_a) * (y - mean_b);
        var_a += (x - mean_a) * (x - mean_a);
        var_b += (y - mean_b) * (y - mean_b);
    }
    if var_a == 0.0 || var_b == 0.0 {
        return None;
    }
    Some(cov / (var_a.sqrt() * var_b.sqrt()))
}

/// First epoch `t` such that the increments at `t`, `t+1`, `t+2` all stay
/// below `1e-4` of the series range.
fn convergence_epoch(series: &[f64]) -> Option<usize> {
    let range = series.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - series.iter().cloned().fold(f64::INFINITY, f64::min);
    let eps = CONVERGENCE_EPSILON_REL * range;
    let deltas = increments(series);
    deltas
        .windows(3)
        .position(|w| w.iter().all(|d| d.abs() < eps))
        .map(|i| i + 1) // increment i belongs to epoch i+1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_series(re: &[f64], im: &[f64]) -> Vec<EpochDiagnostics> {
        re.iter()
            .zip(im)
            .enumerate()
            .map(|(epoch, (&r, &i))| EpochDiagnostics {
                epoch,
                train_loss: 0.0,
                train_acc: 0.0,
                test_acc: 0.0,
                mean_abs_re: r,
                mean_abs_im: i,
                mean_magnitude: r.hypot(i),
            })
            .collect()
    }

    #[test]
    fn shifted_copy_correlates_perfectly() {
        // im is the re series delayed by one epoch: identical increments
        let re: Vec<f64> = (0..30).map(|t| 1.0 - (-0.3 * t as f64).exp()).collect();
        let mut im = vec![0.0];
        im.extend(re.iter().take(29).cloned());
        let score = follow_score(&diag_series(&re, &im)).unwrap();
        let corr = score.delta_correlation.unwrap();
        assert!(corr > 0.9, "correlation {corr}");
    }

    #[test]
    fn independent_random_walks_decorrelate() {
        // deterministic pseudo-random walks
        let mut state = 0x12345678u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state as f64 / u64::MAX as f64) - 0.5
        };
        let mut re = vec![0.0];
        let mut im = vec![0.0];
        for _ in 0..100 {
            re.push(re.last().unwrap() + next());
            im.push(im.last().unwrap() + next());
        }
        let score = follow_score(&diag_series(&re, &im)).unwrap();
        let corr = score.delta_correlation.unwrap().abs();
        assert!(corr < 0.3, "correlation {corr}");
    }

    #[test]
    fn constant_series_has_no_correlation() {
        let re = vec![0.5; 20];
        let im: Vec<f64> = (0..20).map(|t| t as f64 * 0.01).collect();
        let score = follow_score(&diag_series(&re, &im)).unwrap();
        assert_eq!(score.delta_correlation, None);
    }

    #[test]
    fn convergence_lag_detects_delay() {
        // re settles at epoch 10, im at epoch 14
        let settle = |at: usize| -> Vec<f64> {
            (0..40)
                .map(|t| if t < at { t as f64 / at as f64 } else { 1.0 })
                .collect()
        };
        let score = follow_score(&diag_series(&settle(10), &settle(14))).unwrap();
        assert_eq!(score.convergence_lag, Some(4));
    }

    #[test]
    fn too_few_epochs_is_an_error() {
        let err = follow_score(&diag_series(&[1.0; 5], &[1.0; 5])).unwrap_err();
        assert!(matches!(err, Error::InsufficientDiagnostics { .. }));
    }

    #[test]
    fn best_of_runs_selection() {
        let run = |seed: u64, acc: f64, failed: bool| RunResult {
            seed,
            diagnostics: vec![EpochDiagnostics {
                epoch: 0,
                train_loss: 1.0,
                train_acc: acc,
                test_acc: acc,
                mean_abs_re: 0.0,
                mean_abs_im: 0.0,
                mean_magnitude: 0.0,
            }],
            failed,
            failure_reason: failed.then(|| "pole".to_string()),
        };
        let runs = vec![run(0, 0.3, false), run(1, 0.9, false), run(2, 0.7, false)];
        assert_eq!(best_of_runs(&runs).unwrap().seed, 1);

        // single run selects itself
        assert_eq!(best_of_runs(&runs[..1]).unwrap().seed, 0);

        // ties break towards the lower seed
        let tied = vec![run(5, 0.8, false), run(3, 0.8, false)];
        assert_eq!(best_of_runs(&tied).unwrap().seed, 3);

        // failed runs never win, even with the top accuracy
        let with_failure = vec![run(0, 0.99, true), run(1, 0.5, false)];
        assert_eq!(best_of_runs(&with_failure).unwrap().seed, 1);

        let all_failed = vec![run(0, 0.9, true)];
        assert!(matches!(
            best_of_runs(&all_failed),
            Err(Error::AllRunsFailed { total: 1 })
        ));
    }

    #[test]
    fn best_of_n_is_nondecreasing_in_n() {
        let accs = [0.4, 0.8, 0.6, 0.9, 0.5, 0.7];
        let runs: Vec<RunResult> = accs
            .iter()
            .enumerate()
            .map(|(i, &acc)| RunResult {
                seed: i as u64,
                diagnostics: vec![EpochDiagnostics {
                    epoch: 0,
                    train_loss: 0.0,
                    train_acc: acc,
                    test_acc: acc,
                    mean_abs_re: 0.0,
                    mean_abs_im: 0.0,
                    mean_magnitude: 0.0,
                }],
                failed: false,
                failure_reason: None,
            })
            .collect();
        let mut prev = 0.0;
        for n in 1..=runs.len() {
            let best = best_of_runs(&runs[..n]).unwrap().final_test_acc().unwrap();
            assert!(best >= prev);
            prev = best;
        }
    }
}
