//! Polynomials and dense square matrices over a [`Field`](crate::numeric::Field).
//!
//! Provides the characteristic and minimal polynomials, exact and clustered
//! root extraction, and the repeated-squaring power oracle the rest of the
//! crate is checked against.

mod matrix;
mod polynomial;
mod roots;

pub use matrix::{char_poly, minimal_poly, minimal_poly_report, DenseMatrix, MinimalPolyReport};
pub use polynomial::Polynomial;
pub use roots::{RootField, RootMultiset};
