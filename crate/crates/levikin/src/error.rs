//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operation is not defined for this source kind (e.g. a Bose occupation
    /// queried on a laser source).
    #[error("unsupported operation for this source kind: {0}")]
    UnsupportedOperation(&'static str),

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid spec or configuration value.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The chemical potential has reached the band edge; the Bose occupation
    /// and the recoil prefactor diverge there (photon-condensate regime).
    #[error("singular prefactor: chemical potential at the emission band edge")]
    SingularPrefactor,

    /// Quadrature grid too coarse for the requested accuracy.
    #[error("quadrature not converged: {details}")]
    Convergence { details: String },

    /// Velocity (or another input) outside the validity regime of a
    /// linearized model.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// Time series too short for the requested estimator accuracy.
    #[error("estimator variance too large: {0}")]
    EstimatorVariance(String),

    /// Integrator stability contract violated.
    #[error("unstable time step: {0}")]
    Stability(String),

    /// Nonlinear fit failed to converge or the data cannot constrain it.
    #[error("fit error: {0}")]
    Fit(String),
}
