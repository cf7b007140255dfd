//! Run configuration: a plain-text key-value format with dotted section
//! keys, normalization to SI, and a stable fingerprint for reproducible
//! outputs.
//!
//! ```text
//! # comment
//! preset = rogers
//! trap.b = 150 kG        # normalized to tesla internally
//! beta = 0.6
//! output.formats = csv,json
//! ```
//!
//! Values are normalized at parse time (quantities to SI with a canonical
//! unit token), so two files describing the same physical run canonicalize
//! to the same text and the same fingerprint. Command-line overrides go
//! through [`RunConfig::set`] and win over file values.

use std::collections::BTreeMap;
use std::fmt;

use crate::experiment::{AmplifierModel, CavityGeometry};
use crate::export::{fingerprint, fmt_machine};
use crate::presets;
use crate::trap::{FieldConfiguration, TrapConfiguration, TrapGeometry, TrapKind};
use crate::units::{parse_expecting, parse_quantity, Dimension};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn new(message: impl Into<String>) -> Self {
        ConfigError { line: None, field: None, message: message.into() }
    }

    fn for_field(field: &str, message: impl Into<String>) -> Self {
        ConfigError { line: None, field: Some(field.to_string()), message: message.into() }
    }

    fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " (key `{field}`)")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

/// What a key's value must parse as.
#[derive(Debug, Clone, Copy)]
enum ValueKind {
    Quantity(Dimension),
    /// A quantity of any dimension (checked later against context).
    AnyQuantity,
    Number,
    Integer,
    Choice(&'static [&'static str]),
    Text,
    List(&'static [&'static str]),
}

const CHOICE_PRESET: &[&str] = &["rogers", "dehmelt", "cylindrical"];
const CHOICE_KIND: &[&str] = &["hyperbolic", "cylindrical"];
const CHOICE_WORLDLINE: &[&str] = &["linear", "circular", "inertial"];
const CHOICE_SCALE: &[&str] = &["log", "linear"];
const CHOICE_DPDF: &[&str] = &["paper", "ksy"];
const CHOICE_METHOD: &[&str] = &["adaptive", "fixed"];
const CHOICE_SWEEP: &[&str] = &["b", "u0", "z0", "r0", "beta", "cavity_radius"];
const CHOICE_PRODUCERS: &[&str] = &["numeric", "planck", "ksy"];
const CHOICE_FORMATS: &[&str] = &["csv", "json", "text"];

const KEYS: &[(&str, ValueKind)] = &[
    ("preset", ValueKind::Choice(CHOICE_PRESET)),
    ("trap.kind", ValueKind::Choice(CHOICE_KIND)),
    ("trap.z0", ValueKind::Quantity(Dimension::Length)),
    ("trap.r0", ValueKind::Quantity(Dimension::Length)),
    ("trap.u0", ValueKind::Quantity(Dimension::Voltage)),
    ("trap.b", ValueKind::Quantity(Dimension::MagneticField)),
    ("trap.comp_height_ratio", ValueKind::Number),
    ("trap.slit_width", ValueKind::Quantity(Dimension::Length)),
    ("cavity.radius", ValueKind::Quantity(Dimension::Length)),
    ("cavity.length", ValueKind::Quantity(Dimension::Length)),
    ("cavity.q", ValueKind::Number),
    ("beta", ValueKind::Number),
    ("amplifier.noise_temperature", ValueKind::Quantity(Dimension::Temperature)),
    ("dpdf.source", ValueKind::Choice(CHOICE_DPDF)),
    ("spectrum.worldline", ValueKind::Choice(CHOICE_WORLDLINE)),
    ("spectrum.acceleration", ValueKind::Quantity(Dimension::Acceleration)),
    ("spectrum.orbit_frequency", ValueKind::Quantity(Dimension::Frequency)),
    ("spectrum.beta", ValueKind::Number),
    ("spectrum.grid.min", ValueKind::Quantity(Dimension::Frequency)),
    ("spectrum.grid.max", ValueKind::Quantity(Dimension::Frequency)),
    ("spectrum.grid.points", ValueKind::Integer),
    ("spectrum.grid.scale", ValueKind::Choice(CHOICE_SCALE)),
    ("spectrum.epsilon", ValueKind::Quantity(Dimension::Time)),
    ("spectrum.tau_max", ValueKind::Quantity(Dimension::Time)),
    ("spectrum.nodes", ValueKind::Integer),
    ("spectrum.taper", ValueKind::Number),
    ("spectrum.producers", ValueKind::List(CHOICE_PRODUCERS)),
    ("spectrum.ksy.table", ValueKind::Text),
    ("spectrum.ksy.n_max", ValueKind::Integer),
    ("trajectory.t_end", ValueKind::Quantity(Dimension::Time)),
    ("trajectory.samples", ValueKind::Integer),
    ("trajectory.method", ValueKind::Choice(CHOICE_METHOD)),
    ("trajectory.rel_tol", ValueKind::Number),
    ("trajectory.dt", ValueKind::Quantity(Dimension::Time)),
    ("trajectory.initial.x", ValueKind::Quantity(Dimension::Length)),
    ("trajectory.initial.y", ValueKind::Quantity(Dimension::Length)),
    ("trajectory.initial.z", ValueKind::Quantity(Dimension::Length)),
    ("trajectory.initial.vx", ValueKind::Quantity(Dimension::Velocity)),
    ("trajectory.initial.vy", ValueKind::Quantity(Dimension::Velocity)),
    ("trajectory.initial.vz", ValueKind::Quantity(Dimension::Velocity)),
    ("sweep.parameter", ValueKind::Choice(CHOICE_SWEEP)),
    ("sweep.min", ValueKind::AnyQuantity),
    ("sweep.max", ValueKind::AnyQuantity),
    ("sweep.points", ValueKind::Integer),
    ("output.dir", ValueKind::Text),
    ("output.formats", ValueKind::List(CHOICE_FORMATS)),
];

fn kind_of(key: &str) -> Option<ValueKind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, kind)| *kind)
}

fn canonical_unit(dim: Dimension) -> &'static str {
    match dim {
        Dimension::Dimensionless => "",
        Dimension::MagneticField => "T",
        Dimension::Voltage => "V",
        Dimension::Length => "m",
        Dimension::Frequency => "Hz",
        Dimension::Temperature => "K",
        Dimension::Time => "s",
        Dimension::Acceleration => "m/s2",
        Dimension::Velocity => "m/s",
    }
}

/// Normalizes a raw value for `key`, or explains why it is invalid.
fn normalize(key: &str, raw: &str) -> Result<String, ConfigError> {
    let kind = kind_of(key)
        .ok_or_else(|| ConfigError::for_field(key, "unknown configuration key"))?;
    let raw = raw.trim();
    if raw.is_empty() {
        return Err(ConfigError::for_field(key, "empty value"));
    }
    match kind {
        ValueKind::Quantity(dim) => {
            let v = parse_expecting(raw, dim)
                .map_err(|e| ConfigError::for_field(key, e.to_string()))?;
            Ok(format!("{} {}", fmt_machine(v), canonical_unit(dim)).trim_end().to_string())
        }
        ValueKind::AnyQuantity => {
            let q = parse_quantity(raw).map_err(|e| ConfigError::for_field(key, e.to_string()))?;
            Ok(format!("{} {}", fmt_machine(q.value), canonical_unit(q.dimension))
                .trim_end()
                .to_string())
        }
        ValueKind::Number => {
            let q = parse_quantity(raw).map_err(|e| ConfigError::for_field(key, e.to_string()))?;
            if q.dimension != Dimension::Dimensionless {
                return Err(ConfigError::for_field(
                    key,
                    format!("expected a dimensionless number, got `{raw}`"),
                ));
            }
            Ok(fmt_machine(q.value))
        }
        ValueKind::Integer => {
            let n: u64 = raw.parse().map_err(|_| {
                ConfigError::for_field(key, format!("expected a non-negative integer, got `{raw}`"))
            })?;
            Ok(n.to_string())
        }
        ValueKind::Choice(options) => {
            if options.contains(&raw) {
                Ok(raw.to_string())
            } else {
                Err(ConfigError::for_field(
                    key,
                    format!("expected one of {options:?}, got `{raw}`"),
                ))
            }
        }
        ValueKind::Text => Ok(raw.to_string()),
        ValueKind::List(options) => {
            let mut items = Vec::new();
            for item in raw.split(',') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                if !options.contains(&item) {
                    return Err(ConfigError::for_field(
                        key,
                        format!("expected items from {options:?}, got `{item}`"),
                    ));
                }
                if !items.contains(&item) {
                    items.push(item);
                }
            }
            if items.is_empty() {
                return Err(ConfigError::for_field(key, "empty list"));
            }
            Ok(items.join(","))
        }
    }
}

/// A validated, normalized configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

impl RunConfig {
    /// Parses the key-value text format. `#` starts a comment; keys are
    /// dotted lowercase identifiers; duplicate keys are rejected.
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::new("expected `key = value`").at_line(line_no)
            })?;
            let key = key.trim();
            if key.is_empty()
                || !key
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '.' || c == '_')
            {
                return Err(ConfigError::new(format!("invalid key `{key}`")).at_line(line_no));
            }
            if cfg.entries.contains_key(key) {
                return Err(
                    ConfigError::for_field(key, "duplicate key").at_line(line_no)
                );
            }
            let normalized = normalize(key, value).map_err(|e| e.at_line(line_no))?;
            cfg.entries.insert(key.to_string(), normalized);
        }
        Ok(cfg)
    }

    /// Sets (or overrides) one key, validating and normalizing the value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let normalized = normalize(key, value)?;
        self.entries.insert(key.to_string(), normalized);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Stored quantity in SI units (value was normalized at entry).
    pub fn get_si(&self, key: &str) -> Option<f64> {
        self.entries.get(key).and_then(|v| {
            let num = v.split_whitespace().next()?;
            num.parse().ok()
        })
    }

    pub fn get_integer(&self, key: &str) -> Option<u64> {
        self.entries.get(key).and_then(|v| v.parse().ok())
    }

    /// Stored quantity plus its canonical unit token (for dimension checks
    /// against context, e.g. sweep bounds).
    pub fn get_si_with_unit(&self, key: &str) -> Option<(f64, &str)> {
        let v = self.entries.get(key)?;
        let mut parts = v.split_whitespace();
        let value: f64 = parts.next()?.parse().ok()?;
        Some((value, parts.next().unwrap_or("")))
    }

    pub fn get_list(&self, key: &str) -> Vec<&str> {
        self.entries
            .get(key)
            .map(|v| v.split(',').collect())
            .unwrap_or_default()
    }

    /// Sorted `key = value` lines; identical physical configs canonicalize
    /// to identical text.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// Stable 16-hex-digit hash of the canonical text.
    pub fn fingerprint(&self) -> String {
        fingerprint(&self.canonical_text())
    }

    /// The preset named by the config, if any.
    pub fn preset(&self) -> Result<Option<presets::Preset>, ConfigError> {
        match self.get("preset") {
            None => Ok(None),
            Some(name) => presets::by_name(name)
                .map(Some)
                .ok_or_else(|| ConfigError::for_field("preset", format!("unknown preset `{name}`"))),
        }
    }

    /// Builds the trap from the preset (if named) with explicit `trap.*`
    /// keys overriding individual fields.
    pub fn resolve_trap(&self) -> Result<TrapConfiguration, ConfigError> {
        let preset = self.preset()?;
        let base = preset.as_ref().map(|p| &p.trap);

        let z0 = self
            .get_si("trap.z0")
            .or(base.map(|t| t.geom.z0))
            .ok_or_else(|| ConfigError::for_field("trap.z0", "required (no preset named)"))?;
        let r0 = self
            .get_si("trap.r0")
            .or(base.map(|t| t.geom.r0))
            .ok_or_else(|| ConfigError::for_field("trap.r0", "required (no preset named)"))?;
        let kind = match self.get("trap.kind") {
            Some("cylindrical") => TrapKind::Cylindrical,
            Some(_) => TrapKind::Hyperbolic,
            None => base.map(|t| t.geom.kind).unwrap_or(TrapKind::Hyperbolic),
        };
        let comp = self
            .get_si("trap.comp_height_ratio")
            .or(base.and_then(|t| t.geom.comp_height_ratio));
        let slit = self.get_si("trap.slit_width").or(base.and_then(|t| t.geom.slit_width));
        let (comp, slit) = match kind {
            TrapKind::Hyperbolic => (None, None),
            TrapKind::Cylindrical => (comp, slit),
        };
        let geom = TrapGeometry::new(z0, r0, kind, comp, slit)
            .map_err(|e| ConfigError::for_field("trap", e.to_string()))?;

        let u0 = self
            .get_si("trap.u0")
            .or(base.map(|t| t.field.u0))
            .ok_or_else(|| ConfigError::for_field("trap.u0", "required (no preset named)"))?;
        let b = self
            .get_si("trap.b")
            .or(base.map(|t| t.field.b))
            .ok_or_else(|| ConfigError::for_field("trap.b", "required (no preset named)"))?;
        let field = FieldConfiguration::new(u0, b)
            .map_err(|e| ConfigError::for_field("trap", e.to_string()))?;

        let label = preset
            .as_ref()
            .map(|p| p.name.to_string())
            .unwrap_or_else(|| "custom".to_string());
        Ok(TrapConfiguration::new(geom, field, label))
    }

    pub fn resolve_cavity(&self) -> Result<Option<CavityGeometry>, ConfigError> {
        let preset_cavity = self.preset()?.and_then(|p| p.cavity);
        let radius = self.get_si("cavity.radius").or(preset_cavity.map(|c| c.radius));
        let length = self.get_si("cavity.length").or(preset_cavity.map(|c| c.length));
        let q = self.get_si("cavity.q").or(preset_cavity.map(|c| c.q));
        match (radius, length, q) {
            (None, None, None) => Ok(None),
            (Some(r), Some(l), Some(q)) => CavityGeometry::new(r, l, q)
                .map(Some)
                .map_err(|e| ConfigError::for_field("cavity", e.to_string())),
            _ => Err(ConfigError::for_field(
                "cavity",
                "cavity needs radius, length and q (or a preset providing them)",
            )),
        }
    }

    pub fn resolve_beta(&self) -> Result<Option<f64>, ConfigError> {
        let beta = self.get_si("beta").or(self.preset()?.and_then(|p| p.beta));
        if let Some(b) = beta {
            if !(b > 0.0 && b < 1.0) {
                return Err(ConfigError::for_field(
                    "beta",
                    format!("beta must satisfy 0 < beta < 1, got {b}"),
                ));
            }
        }
        Ok(beta)
    }

    pub fn resolve_amplifier(&self) -> Result<Option<AmplifierModel>, ConfigError> {
        let t_n = self
            .get_si("amplifier.noise_temperature")
            .or(self.preset()?.and_then(|p| p.amplifier).map(|a| a.noise_temperature));
        match t_n {
            None => Ok(None),
            Some(t) => AmplifierModel::new(t)
                .map(Some)
                .map_err(|e| ConfigError::for_field("amplifier.noise_temperature", e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_normalizes_units() {
        let cfg = RunConfig::parse_str(
            "# a run\npreset = rogers\ntrap.b = 150 kG\nbeta = 0.6\noutput.formats = json,csv\n",
        )
        .unwrap();
        assert_eq!(cfg.get("trap.b"), Some("1.50000000000e1 T"));
        assert_eq!(cfg.get_si("trap.b"), Some(15.0));
        assert_eq!(cfg.get_list("output.formats"), vec!["json", "csv"]);
    }

    #[test]
    fn equivalent_inputs_share_a_fingerprint() {
        let a = RunConfig::parse_str("trap.b = 150 kG\ntrap.u0 = 10 kV\n").unwrap();
        let b = RunConfig::parse_str("trap.u0 = 10000 V\n# comment\ntrap.b = 15 T\n").unwrap();
        assert_eq!(a.canonical_text(), b.canonical_text());
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = RunConfig::parse_str("trap.b = 14 T\ntrap.u0 = 10 kV\n").unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn line_and_field_diagnostics() {
        let err = RunConfig::parse_str("preset = rogers\ntrap.b = 15\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert_eq!(err.field.as_deref(), Some("trap.b"));

        let err = RunConfig::parse_str("what even is this\n").unwrap_err();
        assert_eq!(err.line, Some(1));

        let err = RunConfig::parse_str("nonsense.key = 3\n").unwrap_err();
        assert!(err.message.contains("unknown"));

        let err = RunConfig::parse_str("beta = 0.5\nbeta = 0.6\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn bare_numbers_rejected_on_dimensioned_keys() {
        assert!(RunConfig::parse_str("trap.z0 = 0.001\n").is_err());
        assert!(RunConfig::parse_str("trap.z0 = 1 mm\n").is_ok());
        // Dimensionless keys reject units.
        assert!(RunConfig::parse_str("beta = 0.6 T\n").is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = RunConfig::parse_str("preset = rogers\n").unwrap();
        cfg.set("amplifier.noise_temperature", "22.6 K").unwrap();
        let amp = cfg.resolve_amplifier().unwrap().unwrap();
        assert_eq!(amp.noise_temperature, 22.6);
        assert!(cfg.set("amplifier.noise_temperature", "nope").is_err());
    }

    #[test]
    fn preset_resolution_and_field_overrides() {
        let cfg = RunConfig::parse_str("preset = rogers\n").unwrap();
        let trap = cfg.resolve_trap().unwrap();
        assert_eq!(trap.label, "rogers");
        assert_eq!(trap.field.b, 15.0);
        assert!(cfg.resolve_cavity().unwrap().is_some());
        assert_eq!(cfg.resolve_beta().unwrap(), Some(0.6));

        let cfg2 = RunConfig::parse_str("preset = rogers\ntrap.b = 5 T\n").unwrap();
        assert_eq!(cfg2.resolve_trap().unwrap().field.b, 5.0);

        let bare = RunConfig::parse_str("trap.z0 = 1 mm\n").unwrap();
        let err = bare.resolve_trap().unwrap_err();
        assert_eq!(err.field.as_deref(), Some("trap.r0"));
    }

    #[test]
    fn cavity_requires_all_fields_without_preset() {
        let cfg = RunConfig::parse_str("cavity.radius = 1.36 cm\n").unwrap();
        assert!(cfg.resolve_cavity().is_err());
        let full = RunConfig::parse_str(
            "cavity.radius = 1.36 cm\ncavity.length = 1 cm\ncavity.q = 1e4\n",
        )
        .unwrap();
        let c = full.resolve_cavity().unwrap().unwrap();
        assert_eq!(c.q, 1.0e4);
        let none = RunConfig::parse_str("beta = 0.5\n").unwrap();
        assert_eq!(none.resolve_cavity().unwrap(), None);
    }

    #[test]
    fn beta_range_checked_at_resolution() {
        let cfg = RunConfig::parse_str("beta = 1.5\n").unwrap();
        assert!(cfg.resolve_beta().is_err());
    }

    #[test]
    fn sweep_bounds_keep_their_unit_token() {
        let cfg = RunConfig::parse_str("sweep.min = 1 T\nsweep.max = 20 T\n").unwrap();
        assert_eq!(cfg.get_si_with_unit("sweep.min"), Some((1.0, "T")));
        let dimless = RunConfig::parse_str("sweep.min = 0.1\n").unwrap();
        assert_eq!(dimless.get_si_with_unit("sweep.min"), Some((0.1, "")));
    }

    #[test]
    fn parser_never_accepts_non_ascii_keys() {
        assert!(RunConfig::parse_str("Trap.B = 1 T\n").is_err());
        assert!(RunConfig::parse_str("tr\u{00e4}p.b = 1 T\n").is_err());
    }
}
