//! Truncated q-series over the exact rings, and eta-quotient expansion.

mod eta;
mod io;
mod series;

pub(crate) use eta::apply_eta_factor;
pub use eta::{eta_factor, eta_quotient_expand, pentagonal_terms, EtaQuotient};
pub use io::SeriesJson;
pub use series::QSeries;

use thiserror::Error;

use crate::exactalg::{AlgebraError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series operands live in different coefficient rings")]
    RingMismatch,
    #[error("series shape invalid: valuation {valuation}, truncation {truncation}, {len} coefficients")]
    Shape { valuation: usize, truncation: usize, len: usize },
    #[error("coefficient needed below q^{needed} but the series is only known below q^{available}")]
    InsufficientTruncation { needed: usize, available: usize },
    #[error("eta quotient has non-integral valuation {0}")]
    NonIntegralValuation(Rational),
    #[error("eta quotient has negative valuation {0}")]
    NegativeValuation(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
