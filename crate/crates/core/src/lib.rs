//! Exact and high-precision numerics for the Taylor coefficients of the Jacobi
//! theta function `theta_3(q)`: cumulant and moment polynomials of the discrete
//! normal distribution, the integer sequence `d(n)` and its generalisations, and
//! numeric verification of the identities tying them to theta series.

pub mod combinatorics;
pub mod cumulants;
pub mod error;
pub mod exactalg;
pub mod moments;
pub mod numkernel;
pub mod verify;

pub use error::{Error, Result};
pub use numkernel::{HPFloat, ModulusContext, ModulusSpec, DEFAULT_DIGITS};
