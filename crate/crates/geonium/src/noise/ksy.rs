//! Truncated closed-form spectral energy density for circular motion.
//!
//! The density is a zero-point term plus a velocity power series whose
//! order-n coefficient functions f_n are sums of unit steps in the scaled
//! frequency r = omega / (gamma omega_0):
//!
//!   de/domega = (hbar omega^3 / pi^2 c^3)
//!               ( 1/2 + (1 / 2 gamma^2 r) sum_n v^{2n} f_n(r) ),
//!   f_n(r) = sum_k c_{n,k} theta(n - k - r).
//!
//! The f_n coefficients are not derivable from anything in this crate;
//! they are external data loaded from a plain-text table (`n k coefficient`
//! per line). The repository ships a structural placeholder table, so the
//! numeric Wightman producer remains the authoritative spectrum and this
//! producer's absolute scale carries the table's provenance caveat.

use serde::Serialize;
use std::collections::BTreeMap;

use super::spectrum::{NoiseSpectrum, SpectrumGrid, SpectrumProducer, ENERGY_DENSITY_UNITS};
use super::NoiseError;
use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::export::{fmt_machine, fnv1a_64};

/// Terms kept by default: n = 0..=3.
pub const DEFAULT_KSY_ORDER: usize = 3;

/// Step coefficients c_{n,k} keyed by (n, k).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    entries: BTreeMap<(usize, i64), f64>,
}

impl CoefficientTable {
    /// Parses the `n k coefficient` line format. `#` starts a comment and
    /// blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, NoiseError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(NoiseError::TableParse {
                    line: line_no,
                    message: format!("expected `n k coefficient`, got {} fields", fields.len()),
                });
            }
            let n: usize = fields[0].parse().map_err(|_| NoiseError::TableParse {
                line: line_no,
                message: format!("n must be a non-negative integer, got `{}`", fields[0]),
            })?;
            let k: i64 = fields[1].parse().map_err(|_| NoiseError::TableParse {
                line: line_no,
                message: format!("k must be an integer, got `{}`", fields[1]),
            })?;
            let coeff: f64 = fields[2].parse().map_err(|_| NoiseError::TableParse {
                line: line_no,
                message: format!("coefficient must be a number, got `{}`", fields[2]),
            })?;
            if !coeff.is_finite() {
                return Err(NoiseError::TableParse {
                    line: line_no,
                    message: format!("coefficient must be finite, got {coeff}"),
                });
            }
            if entries.insert((n, k), coeff).is_some() {
                return Err(NoiseError::TableParse {
                    line: line_no,
                    message: format!("duplicate entry for n={n}, k={k}"),
                });
            }
        }
        Ok(CoefficientTable { entries })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every order n = 0..=n_max has at least one coefficient.
    pub fn covers(&self, n_max: usize) -> Option<usize> {
        (0..=n_max).find(|&n| !self.entries.keys().any(|&(en, _)| en == n))
    }

    /// f_n(r) = sum_k c_{n,k} theta(n - k - r), with theta(x) = 1 for
    /// x > 0 and 0 otherwise (a mode exactly at threshold is not excited).
    pub fn f_n(&self, n: usize, r: f64) -> f64 {
        self.entries
            .range((n, i64::MIN)..=(n, i64::MAX))
            .filter(|(&(_, k), _)| (n as f64 - k as f64 - r) > 0.0)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Largest step threshold n - k present in the table; every f_n
    /// vanishes for r at or beyond it.
    pub fn last_step_threshold(&self) -> Option<f64> {
        self.entries.keys().map(|&(n, k)| n as f64 - k as f64).fold(None, |m, t| {
            Some(match m {
                Some(v) if v >= t => v,
                _ => t,
            })
        })
    }

    /// Positive step thresholds (n - k), sorted and deduplicated. These are
    /// the r positions where the truncated spectrum jumps; in angular
    /// frequency they sit at (n - k) gamma omega_0, the harmonic lines of
    /// the orbit.
    pub fn step_thresholds(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self
            .entries
            .keys()
            .map(|&(n, k)| n as f64 - k as f64)
            .filter(|&v| v > 0.0)
            .collect();
        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
        t.dedup();
        t
    }

    pub fn all_non_negative(&self) -> bool {
        self.entries.values().all(|&c| c >= 0.0)
    }

    fn fingerprint(&self) -> String {
        let mut canon = String::new();
        for (&(n, k), &c) in &self.entries {
            canon.push_str(&format!("{n} {k} {}\n", fmt_machine(c)));
        }
        format!("{:016x}", fnv1a_64(canon.as_bytes()))
    }
}

/// Inputs of the closed-form producer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsyParameters {
    /// Lorentz factor of the orbiting charge.
    pub gamma: f64,
    /// Orbital speed in units of c.
    pub v: f64,
    /// Orbital angular frequency (rad/s).
    pub omega_0: f64,
    /// Series truncation order (terms n = 0..=n_max).
    pub n_max: usize,
    pub table: CoefficientTable,
}

impl KsyParameters {
    pub fn validate(&self) -> Result<(), NoiseError> {
        if !(self.gamma >= 1.0) || !self.gamma.is_finite() {
            return Err(NoiseError::InvalidKsyParameters(format!(
                "gamma must be >= 1, got {}",
                self.gamma
            )));
        }
        if !(0.0..1.0).contains(&self.v) {
            return Err(NoiseError::InvalidKsyParameters(format!(
                "v must satisfy 0 <= v < 1, got {}",
                self.v
            )));
        }
        if !(self.omega_0 > 0.0) || !self.omega_0.is_finite() {
            return Err(NoiseError::InvalidKsyParameters(format!(
                "omega_0 must be > 0, got {}",
                self.omega_0
            )));
        }
        if let Some(missing_n) = self.table.covers(self.n_max) {
            return Err(NoiseError::CoefficientTableMissing { n_max: self.n_max, missing_n });
        }
        Ok(())
    }

    /// Angular-frequency positions of the table's step lines,
    /// (n - k) gamma omega_0.
    pub fn line_positions(&self) -> Vec<f64> {
        self.table
            .step_thresholds()
            .into_iter()
            .map(|t| t * self.gamma * self.omega_0)
            .collect()
    }
}

/// Spectral energy density at one angular frequency, J s / m^3.
pub fn ksy_spectral_density(omega: f64, params: &KsyParameters) -> Result<f64, NoiseError> {
    params.validate()?;
    if !(omega > 0.0) {
        return Err(NoiseError::InvalidKsyParameters(format!("omega must be > 0, got {omega}")));
    }
    let c = SPEED_OF_LIGHT;
    let prefactor = HBAR * omega * omega * omega / (std::f64::consts::PI.powi(2) * c * c * c);
    let r = omega / (params.gamma * params.omega_0);
    let mut series = 0.0;
    let v2 = params.v * params.v;
    let mut v_pow = 1.0;
    for n in 0..=params.n_max {
        series += v_pow * params.table.f_n(n, r);
        v_pow *= v2;
    }
    Ok(prefactor * (0.5 + series / (2.0 * params.gamma * params.gamma * r)))
}

/// The closed-form density sampled on a grid.
pub fn ksy_spectrum(grid: &SpectrumGrid, params: &KsyParameters) -> Result<NoiseSpectrum, NoiseError> {
    let values = grid
        .omegas()
        .iter()
        .map(|&w| ksy_spectral_density(w, params))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(NoiseSpectrum {
        grid: grid.clone(),
        values,
        negative_values: None,
        producer: SpectrumProducer::KsyClosedForm,
        worldline: None,
        settings_fingerprint: format!(
            "ksy;gamma={};v={};omega_0={};n_max={};table={}",
            fmt_machine(params.gamma),
            fmt_machine(params.v),
            fmt_machine(params.omega_0),
            params.n_max,
            params.table.fingerprint()
        ),
        convergence: None,
        units: ENERGY_DENSITY_UNITS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn uniform_table(n_max: usize) -> CoefficientTable {
        let mut text = String::new();
        for n in 0..=n_max {
            for k in 0..=n as i64 {
                text.push_str(&format!("{n} {k} 1.0\n"));
            }
        }
        CoefficientTable::parse(&text).unwrap()
    }

    fn params(v: f64, n_max: usize) -> KsyParameters {
        KsyParameters {
            gamma: 1.0 / (1.0 - v * v).sqrt(),
            v,
            omega_0: 2.0e12,
            n_max,
            table: uniform_table(3),
        }
    }

    #[test]
    fn parse_accepts_comments_and_rejects_junk() {
        let t = CoefficientTable::parse("# header\n0 0 1.0\n1 -1 2.5 # inline\n\n").unwrap();
        assert_eq!(t.f_n(0, 0.5), 1.0);
        assert_eq!(t.f_n(1, 0.5), 2.5);
        assert_eq!(t.last_step_threshold(), Some(2.0));

        for (bad, line) in [
            ("0 0\n", 1),
            ("x 0 1.0\n", 1),
            ("0 0 1.0\n0 y 1.0\n", 2),
            ("0 0 nope\n", 1),
            ("0 0 1.0\n0 0 2.0\n", 2),
        ] {
            match CoefficientTable::parse(bad) {
                Err(NoiseError::TableParse { line: l, .. }) => assert_eq!(l, line, "{bad:?}"),
                other => panic!("expected parse error for {bad:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn zeroth_order_truncation() {
        // v = 0 leaves only the n = 0 term.
        let p = params(0.0, 3);
        let omega = 0.3 * p.gamma * p.omega_0; // r = 0.3 < 1: f_0 active
        let v = ksy_spectral_density(omega, &p).unwrap();
        let pref = HBAR * omega.powi(3) / (PI * PI * SPEED_OF_LIGHT.powi(3));
        let r: f64 = 0.3;
        let expected = pref * (0.5 + p.table.f_n(0, r) / (2.0 * p.gamma * p.gamma * r));
        assert_eq!(v, expected);
        assert!(p.table.f_n(0, r) == 1.0);
    }

    #[test]
    fn zero_point_term_exact_beyond_last_threshold() {
        let p = params(0.6, 3);
        let threshold = p.table.last_step_threshold().unwrap();
        // r past every step: only the omega^3 zero-point term survives,
        // bit-exactly.
        for r in [threshold + 0.5, threshold + 3.0, 2.0 * threshold + 1.0] {
            let omega = r * p.gamma * p.omega_0;
            let v = ksy_spectral_density(omega, &p).unwrap();
            let zero_point =
                HBAR * omega.powi(3) / (PI * PI * SPEED_OF_LIGHT.powi(3)) * 0.5;
            assert_eq!(v, zero_point);
        }
    }

    #[test]
    fn threshold_step_not_excited_at_boundary() {
        let t = uniform_table(1);
        // theta(0) = 0: at r exactly n - k the step has turned off.
        assert_eq!(t.f_n(1, 1.0), 1.0); // only the k=0 step (threshold 1) is off
        assert_eq!(t.f_n(1, 2.0), 0.0);
        assert!(t.f_n(1, 0.999) > t.f_n(1, 1.0));
    }

    #[test]
    fn non_decreasing_in_truncation_order_for_non_negative_tables() {
        let table = uniform_table(3);
        assert!(table.all_non_negative());
        for &r_frac in &[0.3, 0.9, 1.7, 2.5] {
            let mut last = 0.0;
            for n_max in 0..=3 {
                let p = KsyParameters { n_max, table: table.clone(), ..params(0.6, 0) };
                let omega = r_frac * p.gamma * p.omega_0;
                let v = ksy_spectral_density(omega, &p).unwrap();
                assert!(v >= last, "n_max {n_max}: {v} < {last}");
                last = v;
            }
        }
    }

    #[test]
    fn missing_coverage_reported() {
        let mut text = String::new();
        for k in 0..=1 {
            text.push_str(&format!("0 {k} 1.0\n"));
        }
        text.push_str("2 0 1.0\n"); // n = 1 absent
        let table = CoefficientTable::parse(&text).unwrap();
        let p = KsyParameters { table, ..params(0.5, 2) };
        match ksy_spectral_density(1.0e12, &p) {
            Err(NoiseError::CoefficientTableMissing { n_max, missing_n }) => {
                assert_eq!((n_max, missing_n), (2, 1));
            }
            other => panic!("expected CoefficientTableMissing, got {other:?}"),
        }
    }

    #[test]
    fn line_positions_at_orbit_harmonics() {
        let p = params(0.6, 3);
        let lines = p.line_positions();
        let base = p.gamma * p.omega_0;
        // Uniform table over k = 0..=n gives thresholds 1, 2, 3.
        assert_eq!(lines.len(), 3);
        for (i, line) in lines.iter().enumerate() {
            assert!((line - (i + 1) as f64 * base).abs() < 1e-6 * base);
        }
    }

    #[test]
    fn spectrum_producer_tagging() {
        let p = params(0.6, 3);
        let grid = SpectrumGrid::linear(0.1 * p.omega_0, 6.0 * p.omega_0, 12).unwrap();
        let spec = ksy_spectrum(&grid, &p).unwrap();
        assert_eq!(spec.producer, SpectrumProducer::KsyClosedForm);
        assert_eq!(spec.values.len(), 12);
        assert!(spec.settings_fingerprint.contains("table="));
    }

    #[test]
    fn parameter_validation() {
        let p = params(0.6, 3);
        assert!(KsyParameters { gamma: 0.5, ..p.clone() }.validate().is_err());
        assert!(KsyParameters { v: 1.0, ..p.clone() }.validate().is_err());
        assert!(KsyParameters { omega_0: 0.0, ..p.clone() }.validate().is_err());
        assert!(ksy_spectral_density(0.0, &p).is_err());
    }
}
