//! Surface-state electrons on liquid helium as a frequency doubler.
//!
//! The crate covers the whole chain from the image-potential spectrum to the
//! radiated second-harmonic intensity:
//!
//! * [`constants`] and [`model`]: unit conventions, the driven two-level
//!   system and its closed-form effective parameters.
//! * [`hydrogenic`]: the 1D hydrogen-like eigenproblem, dipole matrix
//!   elements and the linear Stark slope.
//! * [`coherent`]: exact lab-frame propagation and the effective (rotating
//!   frame) Rabi solutions.
//! * [`lindblad`]: damped dynamics and the closed-form steady state.
//! * [`radiation`]: second-harmonic polarization, lineshape and spectra.
//!
//! All frequencies are angular (rad/s), lengths are metres, times seconds.

// Guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod constants;
mod error;
pub mod hydrogenic;
pub mod integrate;
pub mod lindblad;
pub mod model;
pub mod quadrature;
pub mod radiation;
pub mod spectral;
mod tridiag;

pub use error::{Error, Result};
