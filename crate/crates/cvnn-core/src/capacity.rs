//! Parameter counting and construction of parameter-matched real/complex
//! architecture plans.
//!
//! A complex weight carries two real parameters, so a complex layer costs
//! twice its real counterpart. Matched pairs are built either with a fixed
//! width (constant `m` for the real net, alternating `m/2, m, m/2, ...` for
//! the complex net, which equalises the real-parameter count of every single
//! layer) or with a fixed total budget of real parameters solved for the
//! constant width in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Domain;

/// Layer-width plan for one network.
///
/// `hidden_widths` lists the output width of the input layer followed by the
/// `k` hidden layers (length `k + 1`); the output layer is fixed by
/// `output_dim`. Parameter totals are reported without biases by default,
/// models still carry trainable biases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkPlan {
    pub domain: Domain,
    pub input_dim: usize,
    pub hidden_widths: Vec<usize>,
    pub output_dim: usize,
    pub include_bias: bool,
}

impl NetworkPlan {
    pub fn new(domain: Domain, input_dim: usize, hidden_widths: Vec<usize>, output_dim: usize) -> Self {
        Self {
            domain,
            input_dim,
            hidden_widths,
            output_dim,
            include_bias: false,
        }
    }

    /// Number of hidden layers `k` (the first width belongs to the input layer).
    pub fn hidden_layers(&self) -> usize {
        self.hidden_widths.len().saturating_sub(1)
    }

    /// `(input, output)` dimensions of every dense layer, input layer through
    /// output layer.
    pub fn layer_dims(&self) -> Vec<(usize, usize)> {
        let mut dims = Vec::with_capacity(self.hidden_widths.len() + 1);
        let mut prev = self.input_dim;
        for &w in &self.hidden_widths {
            dims.push((prev, w));
            prev = w;
        }
        dims.push((prev, self.output_dim));
        dims
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.output_dim == 0 {
            return Err(Error::InvalidPlan(format!(
                "zero dimension: input_dim={}, output_dim={}",
                self.input_dim, self.output_dim
            )));
        }
        if self.hidden_widths.is_empty() {
            return Err(Error::InvalidPlan("empty width list".into()));
        }
        if let Some(w) = self.hidden_widths.iter().find(|&&w| w == 0) {
            return Err(Error::InvalidPlan(format!("zero width {w} in plan")));
        }
        Ok(())
    }
}

/// How a matched pair of plans is constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum WidthMode {
    /// Constant real width `m`, alternating complex widths.
    Fixed { width: usize },
    /// Total budget of real-valued parameters shared by both plans.
    Budget { params: u64 },
}

/// Real-parameter count of one dense layer.
///
/// Real: `n*m` (+`m` with bias). Complex: `2*n*m` (+`2m` with bias).
pub fn count_dense_params(n: usize, m: usize, domain: Domain, bias: bool) -> Result<u64> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidPlan(format!("zero layer dimension {n}x{m}")));
    }
    let factor = match domain {
        Domain::Real => 1,
        Domain::Complex => 2,
    };
    let mut count = factor * (n as u64) * (m as u64);
    if bias {
        count += factor * m as u64;
    }
    Ok(count)
}

/// Total real-parameter count of a plan, honouring its `include_bias` flag.
pub fn count_mlp_params(plan: &NetworkPlan) -> Result<u64> {
    plan.validate()?;
    plan.layer_dims()
        .into_iter()
        .map(|(n, m)| count_dense_params(n, m, plan.domain, plan.include_bias))
        .sum()
}

/// Parameter totals of a plan without and with biases.
pub fn param_counts(plan: &NetworkPlan) -> Result<(u64, u64)> {
    let mut without = plan.clone();
    without.include_bias = false;
    let mut with = plan.clone();
    with.include_bias = true;
    Ok((count_mlp_params(&without)?, count_mlp_params(&with)?))
}

/// Width list for the fixed-width scheme.
///
/// Real plans use `m` everywhere. Complex plans alternate `m/2, m, m/2, ...`
/// starting at `m/2`, which makes the real-parameter count of every layer
/// equal to the corresponding real layer's, with no rounding slack.
pub fn alternating_widths(m: usize, k: usize, domain: Domain) -> Result<Vec<usize>> {
    if m == 0 || m % 2 != 0 {
        return Err(Error::InvalidPlan(format!("width m={m} must be even and positive")));
    }
    if k % 2 != 0 {
        return Err(Error::InvalidPlan(format!("hidden layer count k={k} must be even")));
    }
    let widths = match domain {
        Domain::Real => vec![m; k + 1],
        Domain::Complex => (0..=k).map(|i| if i % 2 == 0 { m / 2 } else { m }).collect(),
    };
    Ok(widths)
}

/// Unrounded root of the total-parameter equation for a constant-width MLP.
///
/// The total without bias is `n*m + k*m^2 + m*c` real parameters (doubled in
/// the complex case), so the width solves `k*m^2 + (n+c)*m = p_eff` with
/// `p_eff = p` for real and `p/2` for complex plans.
pub fn budget_width_exact(p: u64, n: usize, c: usize, k: usize, domain: Domain) -> Result<f64> {
    if k % 2 != 0 {
        return Err(Error::InvalidPlan(format!("hidden layer count k={k} must be even")));
    }
    if n == 0 || c == 0 {
        return Err(Error::InvalidPlan(format!("zero dimension n={n}, c={c}")));
    }
    if p < (n + c) as u64 {
        return Err(Error::BudgetTooSmall {
            budget: p,
            input_dim: n,
            output_dim: c,
            hidden_layers: k,
        });
    }
    let p_eff = match domain {
        Domain::Real => p as f64,
        Domain::Complex => p as f64 / 2.0,
    };
    let nc = (n + c) as f64;
    let width = if k == 0 {
        p_eff / nc
    } else {
        let kf = k as f64;
        let half = nc / (2.0 * kf);
        -half + (half * half + p_eff / kf).sqrt()
    };
    Ok(width)
}

fn budget_width(p: u64, n: usize, c: usize, k: usize, domain: Domain) -> Result<usize> {
    let width = budget_width_exact(p, n, c, k, domain)?.round();
    if width < 1.0 {
        return Err(Error::BudgetTooSmall {
            budget: p,
            input_dim: n,
            output_dim: c,
            hidden_layers: k,
        });
    }
    Ok(width as usize)
}

/// Constant width of a real MLP fitting the parameter budget `p`, rounded
/// half-up to the nearest integer.
pub fn budget_width_real(p: u64, n: usize, c: usize, k: usize) -> Result<usize> {
    budget_width(p, n, c, k, Domain::Real)
}

/// Constant width of a complex MLP fitting the same real-parameter budget.
pub fn budget_width_complex(p: u64, n: usize, c: usize, k: usize) -> Result<usize> {
    budget_width(p, n, c, k, Domain::Complex)
}

/// Builds the matched `(real, complex)` pair of plans for `k` hidden layers
/// over `n` input features and `c` classes.
pub fn build_matched_pair(
    mode: WidthMode,
    n: usize,
    c: usize,
    k: usize,
) -> Result<(NetworkPlan, NetworkPlan)> {
    let (real_widths, complex_widths) = match mode {
        WidthMode::Fixed { width } => (
            alternating_widths(width, k, Domain::Real)?,
            alternating_widths(width, k, Domain::Complex)?,
        ),
        WidthMode::Budget { params } => {
            if k % 2 != 0 {
                return Err(Error::InvalidPlan(format!("hidden layer count k={k} must be even")));
            }
            (
                vec![budget_width_real(params, n, c, k)?; k + 1],
                vec![budget_width_complex(params, n, c, k)?; k + 1],
            )
        }
    };
    let real = NetworkPlan::new(Domain::Real, n, real_widths, c);
    let complex = NetworkPlan::new(Domain::Complex, n, complex_widths, c);
    real.validate()?;
    complex.validate()?;
    Ok((real, complex))
}

/// Serialisable description of a plan for reports: widths and realised
/// totals with and without bias, plus the deviation from a budget when one
/// was used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSummary {
    pub domain: Domain,
    pub input_dim: usize,
    pub widths: Vec<usize>,
    pub output_dim: usize,
    pub params_without_bias: u64,
    pub params_with_bias: u64,
    /// `realised - budget` in real parameters, when built against a budget.
    pub budget_deviation: Option<i64>,
}

pub fn summarize_plan(plan: &NetworkPlan, budget: Option<u64>) -> Result<PlanSummary> {
    let (without, with) = param_counts(plan)?;
    Ok(PlanSummary {
        domain: plan.domain,
        input_dim: plan.input_dim,
        widths: plan.hidden_widths.clone(),
        output_dim: plan.output_dim,
        params_without_bias: without,
        params_with_bias: with,
        budget_deviation: budget.map(|b| without as i64 - b as i64),
    })
}
