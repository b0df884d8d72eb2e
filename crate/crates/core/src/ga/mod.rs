//! Cl(3,0) multivector kernel.
//!
//! The pseudoscalar is fixed as the right-handed `I = e123`. Everything here
//! is a pure function over `Copy` values.

mod format;
mod multivector;
pub mod table;
mod vector;

use thiserror::Error;

pub use format::format_g17;
pub use multivector::{Bivector, Multivector, Trivector, COEFF_TOLERANCE};
pub use vector::{UnitVector3, Vector3, UNIT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("grade {0} out of range 0..=3")]
    GradeOutOfRange(usize),
    #[error("expected a pure bivector")]
    NotBivector,
    #[error("multivector is not invertible (residual {residual:e})")]
    NonInvertible { residual: f64 },
    #[error("expected a unit vector, got norm {norm}")]
    NonUnit { norm: f64 },
    #[error("non-finite component")]
    NonFinite,
}
