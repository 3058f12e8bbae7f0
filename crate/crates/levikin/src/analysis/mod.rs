//! Spectral estimation and fitting: Welch power spectral densities,
//! Lorentzian linewidth fits, weighted linear reheat fits, the
//! pressure-sweep heating decomposition, shot-noise scaling model selection
//! and exponential relaxation fits.

mod fits;
mod psd;
pub mod stats;

pub use fits::{
    exponential_relaxation_fit, linear_reheat_fit, noise_scaling_fit, pressure_sweep_fit,
    ExponentialFit, LinearFitResult, NoiseScalingFit, SweepFitResult, SweepPoint,
};
pub use psd::{
    lorentzian_fit, lorentzian_psd_model, radius_from_linewidth, welch_psd, LorentzianFit,
    PsdEstimate, Window,
};
