//! Inversion of Riesz potentials with elementary closed-form reconstructing
//! kernels, and 2D Radon-transform inversion by convolution-backprojection.
//!
//! The kernel family is built around a single reconstructing function
//! `w = (-Delta)^m [(1+|x|^2)^{m-(n+alpha)/2}]` whose Riesz image
//! `h = I^alpha w` is again elementary. That exact pair drives two inversion
//! routes for `g = I^alpha f`:
//!
//! * approximate inversion: `c f = lim_{t->0} (g * t^{-alpha} w_t)`,
//! * scale-integral (wavelet) inversion:
//!   `d f = int_0^inf (g * w~_t) / t^{1+alpha} dt`,
//!
//! and, through the Fuglede identity `R* R = d_{k,n} I^k`, a reconstruction
//! of 2D fields from their Radon transforms.
//!
//! Every numerical operator is validated against the closed forms: see the
//! `examples/` directory for one runnable demonstration per capability and
//! `tests/acceptance.rs` for the tolerance table.

pub mod cli;
pub mod constants;
mod conv;
pub mod error;
pub mod fields;
pub mod inversion;
pub mod io;
pub mod radon;
pub mod kernels;
pub mod riesz;

pub use constants::KernelSpec;
pub use error::{Error, Result};
pub use fields::{GridGeometry, Metrics, Phantom, ScalarField};
pub use kernels::RadialProfile;
pub use radon::Sinogram;
