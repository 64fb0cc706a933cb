//! Rank-1 valuations on two-dimensional regular local rings over finite fields.
//!
//! - [`values`]: exact values and cyclic value groups
//! - [`algebra`]: `F_q`, sparse bivariate polynomials, truncated series
//! - [`genseq`]: generating sequences, expansions, valuations, semigroups
//! - [`transforms`]: composite quadratic transforms, stable forms, defect
//! - [`monomial`]: exponent-matrix reductions and graded presentations
//! - [`towers`]: the Artin-Schreier tower `K -> K1 -> K*`
//! - [`report`]: run configuration and report rendering

pub mod algebra;
pub mod error;
pub mod genseq;
pub mod monomial;
pub mod report;
pub mod towers;
pub mod transforms;
pub mod values;

pub use error::{Error, Result};
