//! Numerical laboratory for L-functions of small conductor.
//!
//! The crate evaluates Dirichlet L-functions and the L-function of the
//! discriminant modular form, locates and certifies their zeros, and checks
//! the identities and bounds that tie large partial sums of Dirichlet
//! coefficients to zeros near the line `Re(s) = 1`: a Plancherel identity,
//! Halász-type mean value quantities, and a hybrid Euler–Hadamard product.

pub mod arith;
pub mod characters;
pub mod constants;
pub mod error;
pub mod eval;
pub mod identities;
pub mod instances;
pub mod meanvalue;
pub mod report;
pub mod special;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;
