//! Closed forms for matrix power sequences.
//!
//! The entries of `(A^k)_{k>=0}` are linear recurrence sequences. When the
//! minimal polynomial of `A` splits over the working field, the whole power
//! sequence decomposes uniquely into a finitely supported part (Kronecker
//! delta atoms) plus a combination of geometric-times-binomial atoms
//! `lambda^k * C(k,i)`. This crate computes that canonical form, reads the
//! index, minimal polynomial, and spectral projections off it, and obtains
//! the Drazin inverse and all of its powers by substituting `-k` for `k` in
//! the geometric part.
//!
//! Two scalar backends are supported: exact rationals and complex doubles
//! with a tolerance policy. The [`numeric::Field`] trait is the seam between
//! them; everything downstream is generic.
//!
//! See the `examples/` directory for runnable tours of each capability, and
//! the `pcanon` binary for a file-driven command line.

pub mod cli;
pub mod drazin;
pub mod error;
pub mod numeric;
pub mod pcf;
pub mod polymat;
pub mod seqalg;
pub mod spectra;

pub use error::Error;
pub use numeric::{field_equal, ApproxComplex, Field, Rational, TolerancePolicy};
pub use polymat::{DenseMatrix, Polynomial, RootField, RootMultiset};
