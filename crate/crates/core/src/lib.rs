//! Minimal speeds of pulsating Fisher-KPP fronts in one-dimensional periodic
//! media.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! - [`profiles`]: 1-periodic diffusivity and growth-rate profiles, their
//!   means and the two-patch habitat model.
//! - [`eigen`]: the principal eigenvalue `k(λ, L)` of the exponentially
//!   weighted linearised operator, extracted as a Perron pair.
//! - [`speed`]: the variational minimal speed `c*_L = min k(λ, L)/λ` and
//!   sweeps over the period `L`.
//! - [`homog`]: homogenisation limits and the second-order coefficient of
//!   `c*_L` near `L = 0`.
//! - [`patch`]: the closed-form dispersion relation of the patch model and
//!   the fragmentation sweep.
//! - [`simulate`]: a direct finite-difference front simulation used as an
//!   end-to-end check of the computed speeds.
//!
//! File formats and the command-line front end live in the `pulsefront`
//! crate.

#![no_std]

extern crate alloc;

mod error;
mod linalg;
mod math;
pub mod optimize;

pub mod eigen;
pub mod homog;
pub mod patch;
pub mod profiles;
pub mod simulate;
pub mod speed;

pub use error::{Error, ErrorClass, Result};
pub use profiles::{PatchConfig, PeriodicProfile, ProfilePair};
