//! Ideal Penning-trap field model: quadrupole potential, characteristic
//! frequencies, stability classification, and the Landau momentum-cell scale.
//!
//! Everything here is expressed in SI with angular frequencies (rad/s).
//! The electron charge enters through its magnitude; `u0 > 0` is the
//! confining polarity for electrons.

use serde::Serialize;
use thiserror::Error;

use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};

#[derive(Debug, Error, PartialEq)]
pub enum TrapError {
    /// The applied potential does not produce an axial restoring force.
    #[error("non-confining potential: omega_z^2 = {omega_z_squared:.6e} <= 0")]
    NonConfiningPotential { omega_z_squared: f64 },
    #[error("invalid trap geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid field configuration: {0}")]
    InvalidField(String),
    /// No ring radius reproduces the requested axial frequency at this z0/U0.
    #[error("ring radius not solvable: required r0^2 = {r0_squared:.6e} <= 0")]
    RingRadiusNotSolvable { r0_squared: f64 },
}

/// Electrode shape of the trap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrapKind {
    Hyperbolic,
    Cylindrical,
}

impl std::fmt::Display for TrapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrapKind::Hyperbolic => write!(f, "hyperbolic"),
            TrapKind::Cylindrical => write!(f, "cylindrical"),
        }
    }
}

/// Trap electrode geometry.
///
/// `z0` is half the cap-electrode separation, `r0` the ring inner radius.
/// The cylindrical variant carries the compensation-electrode height ratio
/// and the slit width as informational fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapGeometry {
    pub z0: f64,
    pub r0: f64,
    pub kind: TrapKind,
    /// Delta z_c / z0 for cylindrical traps.
    pub comp_height_ratio: Option<f64>,
    /// Slit width between ring and cap sections (m), cylindrical only.
    pub slit_width: Option<f64>,
}

impl TrapGeometry {
    pub fn hyperbolic(z0: f64, r0: f64) -> Result<Self, TrapError> {
        Self::new(z0, r0, TrapKind::Hyperbolic, None, None)
    }

    pub fn cylindrical(
        z0: f64,
        r0: f64,
        comp_height_ratio: Option<f64>,
        slit_width: Option<f64>,
    ) -> Result<Self, TrapError> {
        Self::new(z0, r0, TrapKind::Cylindrical, comp_height_ratio, slit_width)
    }

    pub fn new(
        z0: f64,
        r0: f64,
        kind: TrapKind,
        comp_height_ratio: Option<f64>,
        slit_width: Option<f64>,
    ) -> Result<Self, TrapError> {
        if !(z0 > 0.0) || !z0.is_finite() {
            return Err(TrapError::InvalidGeometry(format!("z0 must be > 0, got {z0}")));
        }
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(TrapError::InvalidGeometry(format!("r0 must be > 0, got {r0}")));
        }
        if kind == TrapKind::Hyperbolic && (comp_height_ratio.is_some() || slit_width.is_some()) {
            return Err(TrapError::InvalidGeometry(
                "compensation/slit parameters apply to cylindrical traps only".into(),
            ));
        }
        Ok(TrapGeometry { z0, r0, kind, comp_height_ratio, slit_width })
    }

    /// r0^2 + 2 z0^2, the denominator scale of the quadrupole potential.
    pub fn quadrupole_scale(&self) -> f64 {
        self.r0 * self.r0 + 2.0 * self.z0 * self.z0
    }

    /// Whether a cylindrical trap has the nonlinearity-reducing r0 = z0
    /// proportion. `None` for hyperbolic traps.
    pub fn orthogonalized(&self) -> Option<bool> {
        match self.kind {
            TrapKind::Hyperbolic => None,
            TrapKind::Cylindrical => {
                Some((self.r0 - self.z0).abs() <= 1e-12 * self.z0.max(self.r0))
            }
        }
    }
}

/// Static trap fields: cap-ring potential difference and axial flux density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldConfiguration {
    /// Cap-ring potential difference (V); positive confines electrons axially.
    pub u0: f64,
    /// Axial magnetic flux density (T).
    pub b: f64,
}

impl FieldConfiguration {
    pub fn new(u0: f64, b: f64) -> Result<Self, TrapError> {
        if !u0.is_finite() {
            return Err(TrapError::InvalidField(format!("U0 must be finite, got {u0}")));
        }
        if !(b >= 0.0) || !b.is_finite() {
            return Err(TrapError::InvalidField(format!("B must be >= 0, got {b}")));
        }
        Ok(FieldConfiguration { u0, b })
    }
}

/// A complete trap: geometry plus fields, with a label for outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapConfiguration {
    pub geom: TrapGeometry,
    pub field: FieldConfiguration,
    pub label: String,
}

impl TrapConfiguration {
    pub fn new(geom: TrapGeometry, field: FieldConfiguration, label: impl Into<String>) -> Self {
        TrapConfiguration { geom, field, label: label.into() }
    }
}

/// The eigenfrequency quadruple of the ideal trap.
///
/// For a stable configuration the transverse roots satisfy
/// `omega_c_prime + omega_m = omega_c` and
/// `omega_c_prime * omega_m = omega_z^2 / 2`.
/// At the exact stability boundary the degenerate real root
/// `omega_c / 2` is reported with `stable = false`; past it the
/// transverse roots are complex and reported as absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeFrequencies {
    /// Axial angular frequency (rad/s).
    pub omega_z: f64,
    /// Free-space cyclotron angular frequency (rad/s).
    pub omega_c: f64,
    /// Modified (trap-shifted) cyclotron angular frequency (rad/s).
    pub omega_c_prime: Option<f64>,
    /// Magnetron angular frequency (rad/s).
    pub omega_m: Option<f64>,
    pub stable: bool,
}

impl ModeFrequencies {
    /// Splits the transverse motion into its two circular eigenfrequencies.
    ///
    /// The magnetron root is evaluated as `(omega_z^2/2) / omega_c_prime`
    /// rather than by the subtractive formula; in the hierarchical regime
    /// `omega_z << omega_c` the subtraction cancels catastrophically while
    /// the product form keeps both root identities at machine precision.
    pub fn from_axial_cyclotron(omega_z: f64, omega_c: f64) -> Self {
        let half = 0.5 * omega_c;
        let half_disc = half * half - 0.5 * omega_z * omega_z;
        if half_disc > 0.0 {
            let omega_c_prime = half + half_disc.sqrt();
            let omega_m = (0.5 * omega_z * omega_z) / omega_c_prime;
            ModeFrequencies {
                omega_z,
                omega_c,
                omega_c_prime: Some(omega_c_prime),
                omega_m: Some(omega_m),
                stable: true,
            }
        } else if half_disc == 0.0 {
            // Degenerate real roots; periodic solutions are lost, so the
            // boundary itself counts as untrapped.
            ModeFrequencies {
                omega_z,
                omega_c,
                omega_c_prime: Some(half),
                omega_m: Some(half),
                stable: false,
            }
        } else {
            ModeFrequencies { omega_z, omega_c, omega_c_prime: None, omega_m: None, stable: false }
        }
    }

    /// Both transverse roots, present only when they are real and distinct.
    pub fn transverse(&self) -> Option<(f64, f64)> {
        match (self.omega_c_prime, self.omega_m) {
            (Some(p), Some(m)) if self.stable => Some((p, m)),
            _ => None,
        }
    }
}

/// Electric quadrupole potential at a point, in volts:
/// `U0 (2 z^2 - x^2 - y^2) / (2 z0^2 + r0^2)`.
pub fn quadrupole_potential(geom: &TrapGeometry, u0: f64, point: [f64; 3]) -> f64 {
    let [x, y, z] = point;
    u0 * (2.0 * z * z - x * x - y * y) / geom.quadrupole_scale()
}

/// Axial angular frequency `sqrt(4 e U0 / (m (r0^2 + 2 z0^2)))`.
pub fn axial_frequency(geom: &TrapGeometry, field: &FieldConfiguration) -> Result<f64, TrapError> {
    let wz2 = 4.0 * ELEMENTARY_CHARGE * field.u0 / (ELECTRON_MASS * geom.quadrupole_scale());
    if wz2 <= 0.0 {
        return Err(TrapError::NonConfiningPotential { omega_z_squared: wz2 });
    }
    Ok(wz2.sqrt())
}

/// Free-space cyclotron angular frequency `e B / m`.
pub fn cyclotron_frequency(field: &FieldConfiguration) -> f64 {
    ELEMENTARY_CHARGE * field.b / ELECTRON_MASS
}

/// Eigenfrequencies of the trap. Instability is reported through the
/// `stable` flag, not as an error, so parameter sweeps can map the
/// stability region; a non-confining potential is still an error because
/// no axial frequency exists at all.
pub fn eigenfrequencies(
    geom: &TrapGeometry,
    field: &FieldConfiguration,
) -> Result<ModeFrequencies, TrapError> {
    let omega_z = axial_frequency(geom, field)?;
    let omega_c = cyclotron_frequency(field);
    Ok(ModeFrequencies::from_axial_cyclotron(omega_z, omega_c))
}

/// Trapping condition `omega_c^2 > 2 omega_z^2`, strict.
///
/// A non-confining potential has no bounded axial motion, hence `false`.
pub fn is_trapped(geom: &TrapGeometry, field: &FieldConfiguration) -> bool {
    match axial_frequency(geom, field) {
        Ok(omega_z) => {
            let omega_c = cyclotron_frequency(field);
            omega_c * omega_c > 2.0 * omega_z * omega_z
        }
        Err(_) => false,
    }
}

/// Momentum-plane Landau cell area scale `e B hbar`, in (kg m/s)^2.
///
/// `[p_x, p_y] = i e B hbar` for motion transverse to the field, so the
/// momentum plane acquires cells of this area.
pub fn landau_cell_area(b: f64) -> f64 {
    ELEMENTARY_CHARGE * b * HBAR
}

/// Ring radius that yields the requested axial frequency at fixed z0, U0:
/// inversion of the `axial_frequency` formula.
pub fn solve_ring_radius(z0: f64, u0: f64, omega_z: f64) -> Result<f64, TrapError> {
    let r0_squared =
        4.0 * ELEMENTARY_CHARGE * u0 / (ELECTRON_MASS * omega_z * omega_z) - 2.0 * z0 * z0;
    if r0_squared <= 0.0 {
        return Err(TrapError::RingRadiusNotSolvable { r0_squared });
    }
    Ok(r0_squared.sqrt())
}
