//! Expectations, variances and covariances of logarithms of positive random
//! variables, computed from moment generating functions through
//! `ln x = ∫₀^∞ (e^{-u} − e^{-ux}) du/u`.

pub mod cauchy_entropy;
pub mod error;
pub mod log_moments;
pub mod mgf;
pub mod oracles;
pub mod quadrature;
pub mod simo_capacity;
pub mod special_functions;
pub mod universal_coding;
pub mod validation;

pub use error::{Error, Result};
pub use quadrature::{QuadConfig, QuadError, QuadResult};
