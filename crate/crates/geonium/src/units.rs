//! Unit-suffixed quantity parsing for configs and CLI flags.
//!
//! Dimensioned inputs must carry an explicit unit suffix ("15 T", "150 kG",
//! "10 kV"); bare numbers parse as dimensionless only. Rejecting bare
//! magnitudes on dimensioned keys prevents silent kG-vs-T style errors.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum UnitError {
    #[error("empty quantity")]
    Empty,
    #[error("cannot parse number from `{0}`")]
    BadNumber(String),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("expected a {expected} (e.g. `{example}`), got {got}")]
    WrongDimension { expected: &'static str, example: &'static str, got: String },
    #[error("value must be finite, got {0}")]
    NotFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Dimensionless,
    MagneticField,
    Voltage,
    Length,
    Frequency,
    Temperature,
    Time,
    Acceleration,
    Velocity,
}

impl Dimension {
    pub fn name(&self) -> &'static str {
        match self {
            Dimension::Dimensionless => "dimensionless number",
            Dimension::MagneticField => "magnetic field",
            Dimension::Voltage => "voltage",
            Dimension::Length => "length",
            Dimension::Frequency => "frequency",
            Dimension::Temperature => "temperature",
            Dimension::Time => "time",
            Dimension::Acceleration => "acceleration",
            Dimension::Velocity => "velocity",
        }
    }

    fn example(&self) -> &'static str {
        match self {
            Dimension::Dimensionless => "0.6",
            Dimension::MagneticField => "15 T",
            Dimension::Voltage => "10 kV",
            Dimension::Length => "1 mm",
            Dimension::Frequency => "10.57 GHz",
            Dimension::Temperature => "11.3 K",
            Dimension::Time => "12 ms",
            Dimension::Acceleration => "6e19 g",
            Dimension::Velocity => "1e6 m/s",
        }
    }
}

/// A parsed magnitude in SI base form (T, V, m, Hz, K, s, m/s^2, m/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
}

// unit token -> (SI factor, dimension); case-sensitive.
const UNITS: &[(&str, f64, Dimension)] = &[
    ("T", 1.0, Dimension::MagneticField),
    ("mT", 1e-3, Dimension::MagneticField),
    ("kG", 0.1, Dimension::MagneticField),
    ("G", 1e-4, Dimension::MagneticField),
    ("MV", 1e6, Dimension::Voltage),
    ("kV", 1e3, Dimension::Voltage),
    ("mV", 1e-3, Dimension::Voltage),
    ("V", 1.0, Dimension::Voltage),
    ("km", 1e3, Dimension::Length),
    ("m", 1.0, Dimension::Length),
    ("cm", 1e-2, Dimension::Length),
    ("mm", 1e-3, Dimension::Length),
    ("um", 1e-6, Dimension::Length),
    ("THz", 1e12, Dimension::Frequency),
    ("GHz", 1e9, Dimension::Frequency),
    ("MHz", 1e6, Dimension::Frequency),
    ("kHz", 1e3, Dimension::Frequency),
    ("Hz", 1.0, Dimension::Frequency),
    ("mK", 1e-3, Dimension::Temperature),
    ("K", 1.0, Dimension::Temperature),
    ("s", 1.0, Dimension::Time),
    ("ms", 1e-3, Dimension::Time),
    ("us", 1e-6, Dimension::Time),
    ("ns", 1e-9, Dimension::Time),
    ("ps", 1e-12, Dimension::Time),
    ("m/s2", 1.0, Dimension::Acceleration),
    ("m/s^2", 1.0, Dimension::Acceleration),
    ("g", crate::constants::STANDARD_GRAVITY, Dimension::Acceleration),
    ("m/s", 1.0, Dimension::Velocity),
    ("km/s", 1e3, Dimension::Velocity),
];

/// Parses `"<number>[ <unit>]"`. With no unit the result is dimensionless.
pub fn parse_quantity(input: &str) -> Result<Quantity, UnitError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(UnitError::Empty);
    }
    // Split at the first character that can only start a unit token.
    let split = s
        .char_indices()
        .find(|(_, c)| c.is_alphabetic() && !matches!(c, 'e' | 'E'))
        .map(|(i, _)| i);
    // `e`/`E` may be an exponent or the start of nothing valid; the number
    // parse decides.
    let (num_str, unit_str) = match split {
        Some(i) => (&s[..i], s[i..].trim()),
        None => (s, ""),
    };
    let value: f64 = num_str
        .trim()
        .parse()
        .map_err(|_| UnitError::BadNumber(num_str.trim().to_string()))?;
    if !value.is_finite() {
        return Err(UnitError::NotFinite(value));
    }
    if unit_str.is_empty() {
        return Ok(Quantity { value, dimension: Dimension::Dimensionless });
    }
    for (token, factor, dim) in UNITS {
        if *token == unit_str {
            return Ok(Quantity { value: value * factor, dimension: *dim });
        }
    }
    Err(UnitError::UnknownUnit(unit_str.to_string()))
}

/// Parses and checks the dimension in one step.
pub fn parse_expecting(input: &str, expected: Dimension) -> Result<f64, UnitError> {
    let q = parse_quantity(input)?;
    if q.dimension != expected {
        return Err(UnitError::WrongDimension {
            expected: expected.name(),
            example: expected.example(),
            got: format!("{} (`{}`)", q.dimension.name(), input.trim()),
        });
    }
    Ok(q.value)
}
