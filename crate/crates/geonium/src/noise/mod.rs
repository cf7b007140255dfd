//! Vacuum-noise spectra along classical worldlines.
//!
//! Three producers feed the same [`NoiseSpectrum`] type:
//! the exact Planck response of a uniformly accelerated detector, the
//! numerical Wightman transform for any supported worldline, and the
//! truncated closed-form circular-motion spectral energy density driven by
//! an external coefficient table.

mod ksy;
mod spectrum;
mod worldline;

pub use ksy::{ksy_spectral_density, ksy_spectrum, CoefficientTable, KsyParameters, DEFAULT_KSY_ORDER};
pub use spectrum::{
    find_local_maxima, kms_deviation, planck_response, planck_spectrum, response_spectrum,
    NoiseSpectrum, RegularizationSettings, SpectrumGrid, SpectrumProducer,
};
pub use worldline::{unruh_temperature, wightman_correlator, Worldline};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NoiseError {
    #[error("invalid worldline: {0}")]
    InvalidWorldline(String),
    #[error("invalid spectrum grid: {0}")]
    InvalidGrid(String),
    #[error("invalid regularization settings: {0}")]
    InvalidSettings(String),
    /// Node doubling moved a spectrum value by more than the stability gate.
    #[error(
        "quadrature not converged: max node-doubling change {max_change:.3e} exceeds {tol:.3e}; \
         raise `nodes` or shorten `dtau_max`"
    )]
    QuadratureNotConverged { max_change: f64, tol: f64 },
    /// The KMS check applies only to thermal producers.
    #[error("KMS deviation is defined for linear-worldline numeric spectra and the Planck producer, not {producer}")]
    WrongProducer { producer: String },
    #[error("coefficient table does not cover n <= {n_max}: missing n = {missing_n}")]
    CoefficientTableMissing { n_max: usize, missing_n: usize },
    #[error("invalid KSY parameters: {0}")]
    InvalidKsyParameters(String),
    #[error("coefficient table parse error at line {line}: {message}")]
    TableParse { line: usize, message: String },
}
