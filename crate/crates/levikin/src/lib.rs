//! Simulation and quadrature toolkit for the motion of a dielectric
//! nanoparticle levitated in vacuum by intense thermal light.
//!
//! The crate models the full measurement chain of a thermal-light levitation
//! experiment at desk scale:
//!
//! * [`photonics`] — Bose-Einstein photon statistics of a broadband diode
//!   source with a chemical potential, spectral intensity profiles and
//!   detector shot-noise scaling.
//! * [`scattering`] — Rayleigh scattering geometry: dipole radiation pattern,
//!   axis-resolved recoil-heating rates (closed form and 5-D quadrature),
//!   Doppler damping force and the photon-bath equilibrium temperature.
//! * [`environment`] — free-molecular gas drag and gas-collision heating.
//! * [`dynamics`] — three-axis stochastic harmonic oscillator with gas,
//!   photon and feedback baths; ensemble simulation and the release–reheat
//!   measurement protocol.
//! * [`analysis`] — Welch power spectral densities, Lorentzian linewidth
//!   fits, weighted linear reheat fits, pressure-sweep decomposition and
//!   shot-noise scaling fits.
//!
//! All operations are pure functions on immutable specs and are safe to call
//! concurrently. Stochastic routines take explicit seeds and derive one
//! counter-based RNG stream per trajectory, so results are bit-exact
//! regardless of thread count.

// validation guards are written `!(x > 0.0)` so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod axis;
pub mod constants;
pub mod dynamics;
pub mod environment;
pub mod error;
pub mod photonics;
pub mod quadrature;
pub mod scattering;

pub use axis::{Axis, PerAxis};
pub use error::{Error, Result};
