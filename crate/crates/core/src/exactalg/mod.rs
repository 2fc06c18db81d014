//! Exact scalar arithmetic: rationals, the four quadratic fields, and the
//! degree-8 tower over Q(i, sqrt(-6)) that carries the square-root branch of
//! the class-number-two characters.

mod quad;
mod rational;
mod ring;
mod tower;

pub use quad::{QuadElement, QuadField};
pub use rational::Rational;
pub use ring::Ring;
pub use tower::{Biquad, TowerElement, TowerParam};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(QuadField, QuadField),
    #[error("tower elements carry different parameters")]
    TowerParamMismatch,
    #[error("{0} does not embed in Q(i, sqrt(-6))")]
    NotEmbeddable(QuadField),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("unknown ring tag {0:?}")]
    UnknownRing(String),
}
