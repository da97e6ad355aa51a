//! SINR and spectral efficiency of a multi-antenna linear-MMSE receiver in a
//! network whose interferers follow a power-law intensity `ρ r^ε`.
//!
//! Two independent routes to the same quantities:
//!
//! - [`simulate`] samples networks and channels and evaluates the exact MMSE
//!   output SINR trial by trial;
//! - [`asymptotic`] solves the large-system fixed-point equation (numerically
//!   for any limiting power distribution, or in closed form for power laws)
//!   and provides the simple large-network approximations used for planning.
//!
//! The `nonhom` binary wraps both behind `solve`, `approx`, `plan`,
//! `simulate` and `figures` subcommands (see [`cli`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod cli;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod rng;
pub mod simulate;
pub mod specfun;

pub use error::{Error, Result};
