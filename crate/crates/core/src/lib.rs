#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Analysis toolkit for the numerical anisotropy of finite-difference schemes.
//!
//! The crate is organised around the life of a scheme:
//!
//! * [`scheme`] holds coefficient sets (explicit, compact, prefactored,
//!   multidimensional and free-form 2D stencils) and checks their order.
//! * [`spectral`] turns a scheme into modified wavenumbers, dispersion
//!   surfaces and direction-dependent phase/group velocities.
//! * [`optimize`] tunes free scheme parameters against anisotropy error
//!   functionals.
//! * [`stability`] evaluates closed-form Courant limits and probes them
//!   empirically.
//! * [`solver`] is a periodic 2D reference solver used to confirm the
//!   spectral predictions by direct simulation.
//! * [`verify`] bundles the invariant checks exposed by the CLI.

pub mod csv;
pub mod error;
pub mod optimize;
pub mod quadrature;
pub mod scheme;
pub mod solver;
pub mod spectral;
pub mod stability;
pub mod verify;

pub use error::{Category, Error, Result};
