//! Multiple Dedekind zeta values over cones in totally real number fields.
//!
//! The crate evaluates the nested series
//!
//! ```text
//! zeta_{K;C}(s_1,...,s_m) = sum over beta_1,...,beta_m in C of
//!     N(beta_1)^{-s_1} N(beta_1+beta_2)^{-s_2} ... N(beta_1+...+beta_m)^{-s_m}
//! ```
//!
//! where C = N{e_1,...,e_n} is a simplicial cone of totally positive
//! algebraic integers, and independently evaluates the same quantity as an
//! iterated integral of geometric-series densities over a product of ordered
//! simplices. Agreement of the two routes, together with the exact identities
//! they rest on (the regular-representation exponent calculus, the closed
//! form of the cone generating function, the embedding-determinant Jacobian
//! factor, tangential base point limits, and the boundary-divisor catalog),
//! is the content of the test suite.
//!
//! Exact data (norms, regular representations, discriminants, divisor
//! counts) is computed over arbitrary-precision integers and rationals.
//! Transcendental evaluation uses MPFR floats at a per-field working
//! precision; the bulk series and quadrature engines run in `f64` with
//! compensated accumulation, which is far more accurate than the rigorous
//! truncation bounds they report.

pub mod algexp;
pub mod catalog;
pub mod checks;
pub mod cone;
mod error;
pub mod field;
pub mod fixtures;
pub mod hp;
pub mod membrane;
pub mod poly;
pub mod quad;
pub mod series;

pub use error::{Error, Result};
