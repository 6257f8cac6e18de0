use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch, left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("non-finite value while evaluating {0}")]
    NonFinite(String),

    #[error("tanh input {re}+{im}i is {distance:.3e} from the pole at {pole_im:.9}i")]
    NearPole {
        re: f64,
        im: f64,
        pole_im: f64,
        distance: f64,
    },

    #[error("tape has {tape_layers} records but the model has {model_layers} layers")]
    TapeMismatch {
        tape_layers: usize,
        model_layers: usize,
    },

    #[error("pre-activation of layer {layer} is within {min_abs:.3e} of a non-differentiable seam, resample the input")]
    SeamTooClose { layer: usize, min_abs: f64 },

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("parameter budget {budget} too small for input_dim={input_dim}, output_dim={output_dim}, hidden_layers={hidden_layers}")]
    BudgetTooSmall {
        budget: u64,
        input_dim: usize,
        output_dim: usize,
        hidden_layers: usize,
    },

    #[error("invalid dataset spec: {0}")]
    InvalidDatasetSpec(String),

    #[error("{path}: bad IDX data at byte offset {offset}: {message}")]
    IdxFormat {
        path: String,
        offset: u64,
        message: String,
    },

    #[error("label {index} out of range for {classes} classes")]
    LabelOutOfRange { index: usize, classes: usize },

    #[error("all {total} runs failed")]
    AllRunsFailed { total: usize },

    #[error("need at least {required} epochs of diagnostics, got {got}")]
    InsufficientDiagnostics { required: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
