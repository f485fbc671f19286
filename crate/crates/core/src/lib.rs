//! Transmission-capacity models for SDMA in Poisson wireless ad hoc networks.
//!
//! The crate has two halves that check each other:
//!
//! * [`analytic`] evaluates closed-form outage probabilities, maximum
//!   contention densities and area spectral efficiency for dirty-paper coding,
//!   zero-forcing, receive antenna selection and block diagonalization;
//! * [`channel`] and [`mc`] simulate the same networks: a Poisson field of
//!   multi-antenna interferers, explicit precoders and receive filters, and
//!   Monte Carlo outage estimation with stochastic bisection on density.
//!
//! [`kernels`] holds the special functions both halves rely on and [`cli`]
//! the command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kernels;

pub use error::{Error, Result};
pub mod analytic;
pub mod channel;
pub mod cli;
pub mod mc;
pub mod params;
pub mod scheme;

pub use params::NetworkParams;
pub use scheme::{Scheme, SignalLaw};
