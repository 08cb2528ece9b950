//! Exact computations for representation-directed bound quiver algebras
//! over prime fields: AR-quiver knitting, Hall polynomials by point
//! counting, and the Lie algebras spanned by the indecomposables.

pub mod algebra;
pub mod error;
pub mod ffla;
pub mod hall;
pub mod knit;
pub mod liealg;
pub mod reps;

pub use error::{Error, ErrorClass, Result};
