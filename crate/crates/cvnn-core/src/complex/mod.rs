//! Complex scalars and matrices stored as paired real planes, the augmented
//! real-matrix representation, and a numerical Cauchy-Riemann check.

mod diff;
mod scalar;
mod tensor;

pub use diff::{cauchy_riemann_check, CauchyRiemannCheck};
pub use scalar::{wrap_phase, ComplexScalar, Polar};
pub use tensor::{AugmentedMatrix, ComplexTensor};
