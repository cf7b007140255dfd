//! Detector worldlines and the massless-scalar two-point function
//! evaluated along them.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::NoiseError;
use crate::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};

/// A stationary classical detector trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Worldline {
    /// Detector at rest. A uniformly moving detector sees the same
    /// correlator as a function of proper time, so no velocity parameter
    /// is carried.
    Inertial,
    /// Uniform proper acceleration `a` (m/s^2) along a fixed direction.
    LinearAcceleration { a: f64 },
    /// Circular orbit at lab angular frequency `omega_lab` (rad/s) with
    /// speed `beta` (units of c).
    Circular { omega_lab: f64, beta: f64 },
}

impl Worldline {
    pub fn validate(&self) -> Result<(), NoiseError> {
        match *self {
            Worldline::Inertial => Ok(()),
            Worldline::LinearAcceleration { a } => {
                if a > 0.0 && a.is_finite() {
                    Ok(())
                } else {
                    Err(NoiseError::InvalidWorldline(format!("acceleration must be > 0, got {a}")))
                }
            }
            Worldline::Circular { omega_lab, beta } => {
                if !(omega_lab > 0.0) || !omega_lab.is_finite() {
                    return Err(NoiseError::InvalidWorldline(format!(
                        "omega_lab must be > 0, got {omega_lab}"
                    )));
                }
                if !(0.0..1.0).contains(&beta) {
                    return Err(NoiseError::InvalidWorldline(format!(
                        "beta must satisfy 0 <= beta < 1, got {beta}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Lorentz factor; 1 for inertial and linear kinds (the linear
    /// detector is described in its instantaneous rest frame).
    pub fn gamma(&self) -> f64 {
        match *self {
            Worldline::Circular { beta, .. } => 1.0 / (1.0 - beta * beta).sqrt(),
            _ => 1.0,
        }
    }

    /// Lab-frame orbit radius beta c / omega_lab, circular kind only.
    pub fn orbit_radius(&self) -> Option<f64> {
        match *self {
            Worldline::Circular { omega_lab, beta } => Some(beta * SPEED_OF_LIGHT / omega_lab),
            _ => None,
        }
    }

    /// Magnitude of the proper acceleration (m/s^2).
    pub fn proper_acceleration(&self) -> f64 {
        match *self {
            Worldline::Inertial => 0.0,
            Worldline::LinearAcceleration { a } => a,
            Worldline::Circular { omega_lab, beta } => {
                let gamma = self.gamma();
                gamma * gamma * beta * SPEED_OF_LIGHT * omega_lab
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Worldline::Inertial => "inertial",
            Worldline::LinearAcceleration { .. } => "linear",
            Worldline::Circular { .. } => "circular",
        }
    }
}

/// Temperature parameter of uniformly accelerated vacuum noise,
/// `hbar a / (2 pi c k_B)` in kelvin.
pub fn unruh_temperature(a: f64) -> f64 {
    HBAR * a / (2.0 * PI * SPEED_OF_LIGHT * BOLTZMANN)
}

/// Massless-scalar Wightman function between two points of the worldline
/// separated by proper time `dtau`, with the usual i-epsilon prescription
/// on the time difference:
///
/// G(dtau) = -1 / (4 pi^2 [ (c dt - i c eps)^2 - |dx|^2 ]),   units 1/m^2.
///
/// dt and |dx| follow from the worldline kind; stationarity makes the
/// result depend on the separation only.
pub fn wightman_correlator(w: &Worldline, dtau: f64, eps: f64) -> Complex64 {
    let c = SPEED_OF_LIGHT;
    let interval = match *w {
        Worldline::Inertial => {
            let dt = dtau;
            Complex64::new(c * dt, -c * eps).powi(2)
        }
        Worldline::LinearAcceleration { a } => {
            // Points tau +- dtau/2 of t = (c/a) sinh(a tau / c),
            // x = (c^2/a) cosh(a tau / c): dx = 0 and
            // dt = (2c/a) sinh(a dtau / 2c).
            let u = a * dtau / (2.0 * c);
            if u.abs() > 350.0 {
                // sinh overflows; the correlator underflows to zero.
                return Complex64::new(0.0, 0.0);
            }
            let dt = (2.0 * c / a) * u.sinh();
            Complex64::new(c * dt, -c * eps).powi(2)
        }
        Worldline::Circular { omega_lab, beta } => {
            let gamma = w.gamma();
            let rho = beta * c / omega_lab;
            let dt = gamma * dtau;
            let dx = 2.0 * rho * (omega_lab * dt / 2.0).sin();
            Complex64::new(c * dt, -c * eps).powi(2) - dx * dx
        }
    };
    -1.0 / (4.0 * PI * PI * interval)
}
