//! The colored Burau representation over `F_p` and its evaluated form.

mod eval;
mod field;
mod laurent;
mod symbolic;

pub use eval::{star_commute_check, EvalPoint, EvaluatedPair, FpMatrix};
pub use field::PrimeField;
pub use laurent::LaurentPoly;
pub use symbolic::{phi, CBElement, CBMatrix, DEFAULT_TERM_CAP};
