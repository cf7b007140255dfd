//! Built-in parameter sets: the high-field single-electron proposal
//! ("rogers"), a representative conventional geonium trap ("dehmelt"),
//! and the cavity-trap with its published frequency triple ("cylindrical").

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::experiment::{AmplifierModel, CavityGeometry, Provenance, CALIBRATED_NOISE_TEMPERATURE};
use crate::trap::{
    solve_ring_radius, FieldConfiguration, TrapConfiguration, TrapGeometry, TrapKind,
};

/// A named configuration with per-field provenance notes.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub trap: TrapConfiguration,
    pub cavity: Option<CavityGeometry>,
    pub beta: Option<f64>,
    pub amplifier: Option<AmplifierModel>,
    pub provenance: BTreeMap<&'static str, Provenance>,
}

// rogers: 2z0 = 2 mm, +-10 kV, 150 kG (= 15 T), beta = 0.6; cavity
// 1 cm x 1.36 cm with Q ~ 1e4. The ring radius is not published and is
// solved from the 10.57 GHz observation line at gamma = 1.25.
pub const ROGERS_Z0: f64 = 1.0e-3;
pub const ROGERS_U0: f64 = 1.0e4;
pub const ROGERS_B: f64 = 15.0;
pub const ROGERS_BETA: f64 = 0.6;
pub const ROGERS_CAVITY_LENGTH: f64 = 1.0e-2;
pub const ROGERS_CAVITY_RADIUS: f64 = 1.36e-2;
pub const ROGERS_CAVITY_Q: f64 = 1.0e4;
pub const ROGERS_OBSERVATION_FREQUENCY: f64 = 10.57e9; // Hz

// dehmelt: 2z0 = 8 mm, a few volts, 5 T. U0 = 10 V and the classic
// r0^2 = 2 z0^2 proportion are representative choices, not published
// values.
pub const DEHMELT_Z0: f64 = 4.0e-3;
pub const DEHMELT_U0: f64 = 10.0;
pub const DEHMELT_B: f64 = 5.0;

// cylindrical: orthogonalized r0 = z0 cavity-trap with compensation
// electrodes of height 0.20 z0 and 0.015 cm slits; its mode triple is
// 166 GHz / 63 MHz / 12 kHz. The absolute scale z0 = 5 mm is a chosen
// representative size; B and U0 are solved from the published cyclotron
// and axial lines.
pub const CYLINDRICAL_Z0: f64 = 5.0e-3;
pub const CYLINDRICAL_F_CYCLOTRON: f64 = 166.0e9; // Hz
pub const CYLINDRICAL_F_AXIAL: f64 = 63.0e6; // Hz
pub const CYLINDRICAL_COMP_HEIGHT_RATIO: f64 = 0.20;
pub const CYLINDRICAL_SLIT_WIDTH: f64 = 0.015e-2;
pub const CYLINDRICAL_CAVITY_Q: f64 = 1.0e4;

pub fn rogers() -> Preset {
    let gamma = 1.0 / (1.0 - ROGERS_BETA * ROGERS_BETA).sqrt();
    let omega_z = TAU * ROGERS_OBSERVATION_FREQUENCY / gamma;
    let r0 = solve_ring_radius(ROGERS_Z0, ROGERS_U0, omega_z)
        .expect("observation line is reachable at the published z0 and U0");
    let geom = TrapGeometry::hyperbolic(ROGERS_Z0, r0).expect("valid geometry");
    let field = FieldConfiguration::new(ROGERS_U0, ROGERS_B).expect("valid field");
    let mut provenance = BTreeMap::new();
    provenance.insert("trap.z0", Provenance::Paper);
    provenance.insert("trap.r0", Provenance::Inferred);
    provenance.insert("trap.u0", Provenance::Paper);
    provenance.insert("trap.b", Provenance::Paper);
    provenance.insert("beta", Provenance::Paper);
    provenance.insert("cavity.radius", Provenance::Paper);
    provenance.insert("cavity.length", Provenance::Paper);
    provenance.insert("cavity.q", Provenance::Paper);
    provenance.insert("amplifier.noise_temperature", Provenance::Calibrated);
    Preset {
        name: "rogers",
        trap: TrapConfiguration::new(geom, field, "rogers"),
        cavity: Some(
            CavityGeometry::new(ROGERS_CAVITY_RADIUS, ROGERS_CAVITY_LENGTH, ROGERS_CAVITY_Q)
                .expect("valid cavity"),
        ),
        beta: Some(ROGERS_BETA),
        amplifier: Some(
            AmplifierModel::new(CALIBRATED_NOISE_TEMPERATURE).expect("valid amplifier"),
        ),
        provenance,
    }
}

pub fn dehmelt() -> Preset {
    let r0 = std::f64::consts::SQRT_2 * DEHMELT_Z0;
    let geom = TrapGeometry::hyperbolic(DEHMELT_Z0, r0).expect("valid geometry");
    let field = FieldConfiguration::new(DEHMELT_U0, DEHMELT_B).expect("valid field");
    let mut provenance = BTreeMap::new();
    provenance.insert("trap.z0", Provenance::Paper);
    provenance.insert("trap.r0", Provenance::Calibrated);
    provenance.insert("trap.u0", Provenance::Calibrated);
    provenance.insert("trap.b", Provenance::Paper);
    Preset {
        name: "dehmelt",
        trap: TrapConfiguration::new(geom, field, "dehmelt"),
        cavity: None,
        beta: None,
        amplifier: None,
        provenance,
    }
}

pub fn cylindrical() -> Preset {
    use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE};
    let z0 = CYLINDRICAL_Z0;
    let geom = TrapGeometry::new(
        z0,
        z0,
        TrapKind::Cylindrical,
        Some(CYLINDRICAL_COMP_HEIGHT_RATIO),
        Some(CYLINDRICAL_SLIT_WIDTH),
    )
    .expect("valid geometry");
    let b = TAU * CYLINDRICAL_F_CYCLOTRON * ELECTRON_MASS / ELEMENTARY_CHARGE;
    let omega_z = TAU * CYLINDRICAL_F_AXIAL;
    // Inversion of the axial-frequency formula with r0 = z0.
    let u0 = omega_z * omega_z * ELECTRON_MASS * geom.quadrupole_scale() / (4.0 * ELEMENTARY_CHARGE);
    let field = FieldConfiguration::new(u0, b).expect("valid field");
    let mut provenance = BTreeMap::new();
    provenance.insert("trap.z0", Provenance::Inferred);
    provenance.insert("trap.r0", Provenance::Paper); // r0 = z0 proportion
    provenance.insert("trap.u0", Provenance::Calibrated);
    provenance.insert("trap.b", Provenance::Calibrated);
    provenance.insert("trap.comp_height_ratio", Provenance::Paper);
    provenance.insert("trap.slit_width", Provenance::Paper);
    provenance.insert("cavity.radius", Provenance::Inferred);
    provenance.insert("cavity.length", Provenance::Inferred);
    provenance.insert("cavity.q", Provenance::Calibrated);
    Preset {
        name: "cylindrical",
        trap: TrapConfiguration::new(geom, field, "cylindrical"),
        // The trap body is itself the microwave cavity.
        cavity: Some(CavityGeometry::new(z0, 2.0 * z0, CYLINDRICAL_CAVITY_Q).expect("valid cavity")),
        beta: None,
        amplifier: None,
        provenance,
    }
}

pub fn by_name(name: &str) -> Option<Preset> {
    match name {
        "rogers" => Some(rogers()),
        "dehmelt" => Some(dehmelt()),
        "cylindrical" => Some(cylindrical()),
        _ => None,
    }
}

pub fn all() -> Vec<Preset> {
    vec![rogers(), dehmelt(), cylindrical()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trap::{axial_frequency, cyclotron_frequency, eigenfrequencies};

    #[test]
    fn rogers_preset_reproduces_observation_line() {
        let p = rogers();
        let omega_z = axial_frequency(&p.trap.geom, &p.trap.field).unwrap();
        let gamma = 1.25;
        assert!((gamma * omega_z / TAU - 10.57e9).abs() / 10.57e9 < 1e-12);
        assert!((p.trap.geom.r0 - 0.70e-3).abs() < 0.01e-3, "r0 = {}", p.trap.geom.r0);
        assert_eq!(p.provenance["trap.r0"], Provenance::Inferred);
    }

    #[test]
    fn cylindrical_preset_reproduces_frequency_triple() {
        let p = cylindrical();
        let f = eigenfrequencies(&p.trap.geom, &p.trap.field).unwrap();
        assert!((f.omega_z / TAU - 63.0e6).abs() / 63.0e6 < 1e-12);
        assert!((f.omega_c / TAU - 166.0e9).abs() / 166.0e9 < 1e-12);
        let (_, wm) = f.transverse().unwrap();
        assert!((11.95e3..=12.0e3).contains(&(wm / TAU)));
        assert_eq!(p.trap.geom.orthogonalized(), Some(true));
    }

    #[test]
    fn dehmelt_preset_is_a_conventional_trap() {
        let p = dehmelt();
        let f = eigenfrequencies(&p.trap.geom, &p.trap.field).unwrap();
        assert!(f.stable);
        // A few tens of MHz axial, ~140 GHz cyclotron.
        let fz = f.omega_z / TAU;
        assert!((2.0e7..1.0e8).contains(&fz), "f_z = {fz:.3e}");
        let fc = cyclotron_frequency(&p.trap.field) / TAU;
        assert!((1.3e11..1.5e11).contains(&fc));
    }

    #[test]
    fn presets_are_deterministic() {
        for name in ["rogers", "dehmelt", "cylindrical"] {
            let a = by_name(name).unwrap();
            let b = by_name(name).unwrap();
            assert_eq!(a.trap, b.trap);
        }
        assert!(by_name("nope").is_none());
        assert_eq!(all().len(), 3);
    }
}
