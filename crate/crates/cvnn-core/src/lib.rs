//! Complex-valued multi-layer perceptrons and the tooling to compare them
//! against parameter-matched real-valued networks.
//!
//! The crate is organised around a single dense-layer engine that stores
//! every tensor as a pair of real planes (`Re`, `Im`). Real networks are the
//! degenerate case with an all-zero imaginary plane, which keeps the two
//! model families bit-comparable. On top of the engine sit:
//!
//! - [`complex`]: scalar/matrix arithmetic in Cartesian and polar form, the
//!   augmented real-matrix representation, and numerical complex-
//!   differentiability checks,
//! - [`activations`]: split and magnitude-based non-linearities plus the
//!   intensity output heads,
//! - [`autodiff`]: forward/backward passes in the real-pair basis with a
//!   Wirtinger-calculus cross-check,
//! - [`capacity`]: parameter counting and construction of matched
//!   real/complex architecture plans,
//! - [`init`]: seeded Glorot and complex variance-scaled initialisation,
//! - [`training`]: losses, Adam, seeded multi-run training and the
//!   weight-trajectory diagnostics,
//! - [`datasets`]: synthetic quadrant-classification generators and an
//!   MNIST IDX loader.

pub mod activations;
pub mod autodiff;
pub mod capacity;
pub mod complex;
pub mod datasets;
pub mod error;
pub mod init;
pub mod training;

pub use activations::ActivationId;
pub use autodiff::{DenseLayer, GradientSet, Model, Tape};
pub use capacity::{NetworkPlan, WidthMode};
pub use complex::{AugmentedMatrix, ComplexScalar, ComplexTensor, Polar};
pub use datasets::Dataset;
pub use error::{Error, Result};
pub use init::{FanMode, InitScheme, InitSpec};
pub use training::{EpochDiagnostics, RunResult, TrainConfig};

use serde::{Deserialize, Serialize};

/// Number domain a layer or network plan lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Real,
    Complex,
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Domain::Real => write!(f, "real"),
            Domain::Complex => write!(f, "complex"),
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Domain::Real),
            "complex" => Ok(Domain::Complex),
            other => Err(Error::InvalidConfig(format!(
                "unknown domain {other:?}, expected \"real\" or \"complex\""
            ))),
        }
    }
}
