//! Numerical laboratory for spiked random matrix models.
//!
//! The crate samples spiked Wigner and Wishart ensembles under configurable
//! spike priors and noise densities, runs spectral and non-spectral detection
//! procedures (PCA, score-transformed PCA, exhaustive MLE, point-mass test),
//! and evaluates the statistical thresholds behind them: likelihood-ratio
//! second moments, subgaussian and conditioning-method constants, Fisher
//! information of the noise, and the Wishart lower/upper bound curves that
//! make up the (β, γ) phase diagram.

pub mod detect;
pub mod ensembles;
mod error;
pub mod io;
pub mod moments;
pub mod noise;
pub mod numeric;
pub mod priors;
pub mod rng;
pub mod thresholds;

pub use detect::{Decision, DetectionReport};
pub use ensembles::{ModelDescriptor, ScaledWignerSample, SymmetricMatrixSample, WishartOutcome};
pub use error::{Error, Result};
pub use moments::MomentEstimate;
pub use noise::NoiseModel;
pub use priors::SpikePrior;
pub use thresholds::{PhasePoint, RateFn, Verdict};

/// Crate version embedded in every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
