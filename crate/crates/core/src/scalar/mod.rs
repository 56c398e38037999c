//! Exact arithmetic in Q(q) and q-combinatorics.

pub mod int;
pub mod modp;
mod parse;
pub mod poly;
mod qnum;
#[allow(clippy::module_inception)]
mod scalar;
mod series;

pub use int::Int;
pub use poly::IntPoly;
pub use qnum::{q_binom, q_binom_signed, q_fact, q_int, q_int_signed};
pub use scalar::Scalar;
pub use series::{check_series_cone, expand_series, LaurentSeries};
