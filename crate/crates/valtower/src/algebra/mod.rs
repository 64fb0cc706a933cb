//! Coefficient fields, bivariate polynomials, truncated series and the text grammar.

pub mod field;
pub mod parse;
pub mod poly;
pub mod series;

pub use field::{Field, FieldElem};
pub use parse::parse_poly;
pub use poly::{Mono, Poly2};
pub use series::{invert_unit, XSeries};
