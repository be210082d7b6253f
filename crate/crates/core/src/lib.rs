//! Numerical laboratory for Bergman kernels, pluricomplex Green functions,
//! invariant Finsler metrics and Busemann volume forms on model domains.

pub mod error;
pub mod green;
pub mod metrics;
pub mod geometry;
pub mod quadrature;
pub mod sampling;
pub mod special;
pub mod teich_model;

pub use error::{Error, Result};
pub mod bergman;
pub mod verifier;
