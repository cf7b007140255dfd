//! Physical constants, CODATA 2018 values (SI).
//!
//! The 2019 SI redefinition makes `e`, `h` (hence `hbar`), `k_B` and `c`
//! exact; the electron mass and the vacuum permittivity keep their CODATA
//! uncertainties, which are far below anything this crate resolves.

use serde::Serialize;

/// Elementary charge (C), exact.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Electron mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_7015e-31;
/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant (J s), from the exact h = 6.62607015e-34 J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), exact.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Standard gravity (m/s^2), conventional exact value.
pub const STANDARD_GRAVITY: f64 = 9.806_65;
/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_8128e-12;

/// The constants bundle used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Elementary charge (C).
    pub e: f64,
    /// Electron mass (kg).
    pub m_e: f64,
    /// Speed of light (m/s).
    pub c: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Standard gravity (m/s^2).
    pub g_earth: f64,
    /// Vacuum permittivity (F/m).
    pub epsilon_0: f64,
}

/// CODATA values; every operation in this crate uses these.
pub const CODATA: PhysicalConstants = PhysicalConstants {
    e: ELEMENTARY_CHARGE,
    m_e: ELECTRON_MASS,
    c: SPEED_OF_LIGHT,
    hbar: HBAR,
    k_b: BOLTZMANN,
    g_earth: STANDARD_GRAVITY,
    epsilon_0: VACUUM_PERMITTIVITY,
};

/// Classical electron radius e^2 / (4 pi eps0 m c^2), in meters.
pub fn classical_electron_radius() -> f64 {
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE
        / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * ELECTRON_MASS * SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_strictly_positive() {
        let c = CODATA;
        for v in [c.e, c.m_e, c.c, c.hbar, c.k_b, c.g_earth, c.epsilon_0] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn classical_radius_value() {
        // 2.8179403262e-15 m
        let r = classical_electron_radius();
        assert!((r - 2.8179403262e-15).abs() / 2.8179403262e-15 < 1e-9);
    }

    #[test]
    fn charge_to_mass_ratio() {
        let em = ELEMENTARY_CHARGE / ELECTRON_MASS;
        assert!((em - 1.75882001076e11).abs() / 1.75882001076e11 < 1e-9);
    }
}
