//! Central values of Dedekind zeta functions and quadratic Dirichlet
//! L-functions at `s = 1/2`, with rigorous error radii.
//!
//! The functional equation `ζ_K(1 - s) = A_K(s) ζ_K(s)` ties `ζ_K'(1/2)` to
//! `ζ_K(1/2)` through the closed form of `A_K'(1/2)`; the [`dedekind`] module
//! certifies when that factor is nonzero, and [`lfunc`] evaluates the
//! quadratic-field values it multiplies.

pub mod arith;
pub mod cli;
pub mod dedekind;
pub mod error;
pub mod hurwitz;
pub mod lfunc;
pub mod mpreal;
pub mod survey;

pub use error::{Error, Result};
pub use mpreal::{BoundedReal, PrecisionContext};
