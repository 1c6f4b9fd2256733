//! Exact scalars and torus coefficient functions.

pub mod cyclo;
pub mod exact;
pub mod fourier;
pub mod numeric;

pub use cyclo::Cyclo;
pub use exact::{q, ExactScalar, DEFAULT_MODULUS};
pub use fourier::{fourier_arith, two_pi_i, FourierFunction, FourierOp};
pub use numeric::NumericValue;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("inverse only defined for a single nonzero term")]
    InvNotSupported,
    #[error("torus dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("Gamma has a pole at {0}/4")]
    GammaPole(i64),
}

/// Binary scalar operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Mul,
    /// Inverse of the first operand; the second is ignored.
    Inv,
}

pub fn scalar_arith(
    a: &ExactScalar,
    b: &ExactScalar,
    op: ScalarOp,
) -> Result<ExactScalar, ScalarError> {
    match op {
        ScalarOp::Add => Ok(a.add_ref(b)),
        ScalarOp::Mul => Ok(a.mul_ref(b)),
        ScalarOp::Inv => a.inv(),
    }
}
