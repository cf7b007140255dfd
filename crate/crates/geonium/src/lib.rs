//! Single-electron trap dynamics and vacuum-noise spectra.
//!
//! The crate models an electron in an ideal Penning trap (quadrupole
//! potential plus uniform axial field), evaluates its three eigenmotions
//! analytically and by independent numerical integration, computes the
//! vacuum-fluctuation spectra seen by accelerated detectors (exact Planck
//! form for uniform linear acceleration, numerical Wightman transform for
//! circular orbits, and the truncated closed-form circular spectrum driven
//! by an external coefficient table), and runs the feasibility arithmetic
//! for detecting the circular vacuum noise with a trapped electron coupled
//! to a microwave cavity mode.
//!
//! Modules:
//! - [`trap`]: field model, eigenfrequencies, stability, Landau cell scale
//! - [`dynamics`]: analytic trajectories, amplitude inversion, integrator
//! - [`noise`]: worldlines, Wightman correlator, spectra, KMS check
//! - [`experiment`]: cavity mode, damping, power transfer, detection time
//! - [`presets`]: the built-in parameter sets
//! - [`units`], [`config`], [`export`]: input parsing and reproducible I/O

pub mod bessel;
pub mod config;
pub mod constants;
pub mod dynamics;
pub mod experiment;
pub mod export;
pub mod noise;
pub mod ode;
pub mod presets;
pub mod trap;
pub mod units;

pub use config::{ConfigError, RunConfig};
pub use constants::{PhysicalConstants, CODATA};
pub use dynamics::{
    analytic_state, integrate, solve_amplitudes, ElectronState, IntegratorMethod,
    IntegratorSettings, MotionAmplitudes, Trajectory,
};
pub use experiment::{
    feasibility, AmplifierModel, CavityGeometry, DetectionSettings, DpdfSource, FeasibilityReport,
};
pub use noise::{
    planck_response, response_spectrum, unruh_temperature, NoiseSpectrum, RegularizationSettings,
    SpectrumGrid, Worldline,
};
pub use trap::{
    eigenfrequencies, is_trapped, FieldConfiguration, ModeFrequencies, TrapConfiguration,
    TrapGeometry, TrapKind,
};
