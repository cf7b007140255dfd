//! Numerical Wightman-transform spectra, the analytic Planck benchmark,
//! and the KMS detailed-balance check.
//!
//! The numeric producer computes, for each grid frequency,
//!
//!   F(omega) = 2 c^2 Int_0^tau_max w(tau) cos(omega tau)
//!              Re[ G_traj(tau) - G_inertial(tau) ] dtau
//!
//! i.e. the Fourier transform of the vacuum-subtracted autocorrelation
//! along the worldline. Subtracting the inertial correlator inside the
//! integrand removes the universal short-distance singularity, makes the
//! inertial spectrum vanish identically, and leaves the acceleration-induced
//! noise; the vacuum piece omega/2pi is restored analytically on the
//! negative-frequency side, which is kept for KMS checks only.

use serde::Serialize;
use std::f64::consts::{PI, TAU};

use super::worldline::{unruh_temperature, wightman_correlator, Worldline};
use super::NoiseError;
use crate::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::export::fmt_machine;

/// Strictly increasing positive angular frequencies (rad/s).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumGrid {
    omegas: Vec<f64>,
}

impl SpectrumGrid {
    pub fn new(omegas: Vec<f64>) -> Result<Self, NoiseError> {
        if omegas.is_empty() {
            return Err(NoiseError::InvalidGrid("grid must not be empty".into()));
        }
        if !(omegas[0] > 0.0) {
            return Err(NoiseError::InvalidGrid("grid frequencies must be > 0".into()));
        }
        for pair in omegas.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(NoiseError::InvalidGrid(format!(
                    "grid must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if omegas.iter().any(|w| !w.is_finite()) {
            return Err(NoiseError::InvalidGrid("grid frequencies must be finite".into()));
        }
        Ok(SpectrumGrid { omegas })
    }

    pub fn log_spaced(omega_min: f64, omega_max: f64, points: usize) -> Result<Self, NoiseError> {
        if points < 2 || !(omega_min > 0.0) || !(omega_max > omega_min) {
            return Err(NoiseError::InvalidGrid(format!(
                "need 0 < omega_min < omega_max and points >= 2, got [{omega_min}, {omega_max}] x {points}"
            )));
        }
        let ratio = (omega_max / omega_min).ln();
        let omegas = (0..points)
            .map(|i| omega_min * (ratio * i as f64 / (points - 1) as f64).exp())
            .collect();
        Self::new(omegas)
    }

    pub fn linear(omega_min: f64, omega_max: f64, points: usize) -> Result<Self, NoiseError> {
        if points < 2 || !(omega_min > 0.0) || !(omega_max > omega_min) {
            return Err(NoiseError::InvalidGrid(format!(
                "need 0 < omega_min < omega_max and points >= 2, got [{omega_min}, {omega_max}] x {points}"
            )));
        }
        let step = (omega_max - omega_min) / (points - 1) as f64;
        let omegas = (0..points).map(|i| omega_min + step * i as f64).collect();
        Self::new(omegas)
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn min(&self) -> f64 {
        self.omegas[0]
    }

    pub fn max(&self) -> f64 {
        *self.omegas.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}

/// Quadrature and regularization knobs for the numeric producer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizationSettings {
    /// i-epsilon scale of the correlator (s).
    pub epsilon: f64,
    /// Fraction of [0, dtau_max] under the smooth cosine taper.
    pub taper_fraction: f64,
    /// Quadrature intervals; the producer also evaluates 2x this count for
    /// the node-doubling stability gate and reports the finer result.
    pub nodes: usize,
    /// Proper-time truncation of the transform (s).
    pub dtau_max: f64,
    /// Largest node-doubling relative change accepted per grid point.
    pub convergence_tol: f64,
}

/// Minimum coverage of the slowest grid frequency, in full periods.
pub const MIN_PERIODS_COVERED: f64 = 50.0;

impl RegularizationSettings {
    /// Defaults tuned for the grid: dtau_max spans about 64 periods of the
    /// slowest frequency, epsilon sits at 1e-4 of the fastest period scale
    /// (larger values measurably skew the high-frequency tail), and the
    /// node count resolves the fastest oscillation with 64 points per
    /// period.
    pub fn defaults_for(grid: &SpectrumGrid) -> Self {
        let dtau_max = 400.0 / grid.min();
        let epsilon = 1e-4 / grid.max();
        let nodes = (dtau_max * grid.max() * 64.0 / TAU).ceil() as usize;
        RegularizationSettings {
            epsilon,
            taper_fraction: 0.5,
            nodes: nodes.max(4096),
            dtau_max,
            convergence_tol: 1e-3,
        }
    }

    pub fn validate(&self, grid: &SpectrumGrid) -> Result<(), NoiseError> {
        if !(self.epsilon > 0.0) {
            return Err(NoiseError::InvalidSettings(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if !(self.taper_fraction > 0.0 && self.taper_fraction <= 1.0) {
            return Err(NoiseError::InvalidSettings(format!(
                "taper_fraction must be in (0, 1], got {}",
                self.taper_fraction
            )));
        }
        if self.nodes < 16 {
            return Err(NoiseError::InvalidSettings("nodes must be >= 16".into()));
        }
        let periods = self.dtau_max * grid.min() / TAU;
        if periods < MIN_PERIODS_COVERED {
            return Err(NoiseError::InvalidSettings(format!(
                "dtau_max covers only {periods:.1} periods of the slowest grid frequency; \
                 need >= {MIN_PERIODS_COVERED}"
            )));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(NoiseError::InvalidSettings("convergence_tol must be > 0".into()));
        }
        Ok(())
    }

    fn fingerprint(&self) -> String {
        format!(
            "eps={};taper={};nodes={};dtau_max={};ctol={}",
            fmt_machine(self.epsilon),
            fmt_machine(self.taper_fraction),
            self.nodes,
            fmt_machine(self.dtau_max),
            fmt_machine(self.convergence_tol),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumProducer {
    PlanckAnalytic,
    WightmanNumeric,
    KsyClosedForm,
}

impl std::fmt::Display for SpectrumProducer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectrumProducer::PlanckAnalytic => write!(f, "planck_analytic"),
            SpectrumProducer::WightmanNumeric => write!(f, "wightman_numeric"),
            SpectrumProducer::KsyClosedForm => write!(f, "ksy_closed_form"),
        }
    }
}

/// A spectral density sampled on a frequency grid.
///
/// Units depend on the producer and are recorded in `units`:
/// the response producers report excitation rate per unit proper time per
/// unit angular frequency (1/s per rad/s); the closed-form producer
/// reports spectral energy density (J s / m^3).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseSpectrum {
    pub grid: SpectrumGrid,
    pub values: Vec<f64>,
    /// F(-omega) per grid point with the analytic vacuum piece restored;
    /// kept only for KMS checks.
    pub negative_values: Option<Vec<f64>>,
    pub producer: SpectrumProducer,
    pub worldline: Option<Worldline>,
    pub settings_fingerprint: String,
    /// Max node-doubling relative change observed (numeric producer).
    pub convergence: Option<f64>,
    pub units: &'static str,
}

pub const RESPONSE_UNITS: &str = "1/s per rad/s";
pub const ENERGY_DENSITY_UNITS: &str = "J*s/m^3";

impl NoiseSpectrum {
    /// Long-format CSV per the export contract: omega_rad_s,value,producer.
    pub fn csv(&self, config_fingerprint: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("# config_fingerprint={config_fingerprint}\n"));
        out.push_str("omega_rad_s,value,producer\n");
        for (w, v) in self.grid.omegas().iter().zip(&self.values) {
            out.push_str(&format!("{},{},{}\n", fmt_machine(*w), fmt_machine(*v), self.producer));
        }
        out
    }
}

/// Detector response of a uniformly accelerated detector:
/// `(omega / 2 pi) / (exp(2 pi c omega / a) - 1)`, whose temperature
/// parameter is exactly `unruh_temperature(a)`.
pub fn planck_response(omega: f64, a: f64) -> f64 {
    let x = 2.0 * PI * SPEED_OF_LIGHT * omega / a;
    omega / (2.0 * PI) / x.exp_m1()
}

/// The Planck benchmark sampled on a grid.
pub fn planck_spectrum(grid: &SpectrumGrid, a: f64) -> NoiseSpectrum {
    let values: Vec<f64> = grid.omegas().iter().map(|&w| planck_response(w, a)).collect();
    let negative: Vec<f64> =
        grid.omegas().iter().zip(&values).map(|(&w, &v)| v + w / TAU).collect();
    NoiseSpectrum {
        grid: grid.clone(),
        values,
        negative_values: Some(negative),
        producer: SpectrumProducer::PlanckAnalytic,
        worldline: Some(Worldline::LinearAcceleration { a }),
        settings_fingerprint: format!("planck;a={}", fmt_machine(a)),
        convergence: None,
        units: RESPONSE_UNITS,
    }
}

/// Windowed, vacuum-subtracted Wightman transform on a frequency grid.
///
/// Runs the trapezoid rule at `reg.nodes` and `2 * reg.nodes` intervals
/// and reports the finer result; any grid point moving by more than
/// `reg.convergence_tol` relative fails the stability gate.
pub fn response_spectrum(
    w: &Worldline,
    grid: &SpectrumGrid,
    reg: &RegularizationSettings,
) -> Result<NoiseSpectrum, NoiseError> {
    w.validate()?;
    reg.validate(grid)?;

    let c2 = SPEED_OF_LIGHT * SPEED_OF_LIGHT;
    let n2 = 2 * reg.nodes;
    let h2 = reg.dtau_max / n2 as f64;

    // Vacuum-subtracted integrand on the fine grid, windowed. The tau = 0
    // value is the exact epsilon -> 0 limit a^2 / (48 pi^2 c^2), the
    // universal leading curvature correction in the proper acceleration.
    let a_proper = w.proper_acceleration();
    let d0 = a_proper * a_proper / (48.0 * PI * PI * c2);
    let taper_start = (1.0 - reg.taper_fraction) * reg.dtau_max;
    let taper_len = reg.dtau_max - taper_start;
    let mut integrand = Vec::with_capacity(n2 + 1);
    for k in 0..=n2 {
        let tau = k as f64 * h2;
        let d = if k == 0 {
            d0
        } else {
            let g = wightman_correlator(w, tau, reg.epsilon)
                - wightman_correlator(&Worldline::Inertial, tau, reg.epsilon);
            c2 * g.re
        };
        let window = if tau <= taper_start {
            1.0
        } else {
            0.5 * (1.0 + (PI * (tau - taper_start) / taper_len).cos())
        };
        integrand.push(window * d);
    }

    let transform = |stride: usize| -> Vec<f64> {
        let h = h2 * stride as f64;
        let last = n2 / stride;
        grid.omegas()
            .iter()
            .map(|&omega| {
                let mut sum = 0.0;
                for j in 0..=last {
                    let k = j * stride;
                    let weight = if j == 0 || j == last { 0.5 } else { 1.0 };
                    sum += weight * integrand[k] * (omega * (k as f64 * h2)).cos();
                }
                2.0 * h * sum
            })
            .collect()
    };

    let coarse = transform(2);
    let fine = transform(1);

    let peak = fine.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut max_change = 0.0f64;
    if peak > 0.0 {
        let floor = 1e-9 * peak;
        for (a, b) in coarse.iter().zip(&fine) {
            let change = (b - a).abs() / b.abs().max(floor);
            max_change = max_change.max(change);
        }
        if max_change > reg.convergence_tol {
            return Err(NoiseError::QuadratureNotConverged {
                max_change,
                tol: reg.convergence_tol,
            });
        }
    }

    let negative: Vec<f64> =
        grid.omegas().iter().zip(&fine).map(|(&w, &v)| v + w / TAU).collect();
    let fingerprint = format!(
        "wightman_numeric;worldline={};{}",
        worldline_fingerprint(w),
        reg.fingerprint()
    );
    Ok(NoiseSpectrum {
        grid: grid.clone(),
        values: fine,
        negative_values: Some(negative),
        producer: SpectrumProducer::WightmanNumeric,
        worldline: Some(*w),
        settings_fingerprint: fingerprint,
        convergence: Some(max_change),
        units: RESPONSE_UNITS,
    })
}

fn worldline_fingerprint(w: &Worldline) -> String {
    match *w {
        Worldline::Inertial => "inertial".into(),
        Worldline::LinearAcceleration { a } => format!("linear(a={})", fmt_machine(a)),
        Worldline::Circular { omega_lab, beta } => {
            format!("circular(omega_lab={},beta={})", fmt_machine(omega_lab), fmt_machine(beta))
        }
    }
}

/// Worst relative violation of detailed balance
/// `F(-omega) = exp(hbar omega / k_B T_V(a)) F(omega)` over the grid.
///
/// Defined for the Planck producer (identically zero up to roundoff) and
/// for linear-worldline numeric spectra that retained their
/// negative-frequency side.
pub fn kms_deviation(spec: &NoiseSpectrum, a: f64) -> Result<f64, NoiseError> {
    let ok = match (spec.producer, &spec.worldline) {
        (SpectrumProducer::PlanckAnalytic, _) => spec.negative_values.is_some(),
        (SpectrumProducer::WightmanNumeric, Some(Worldline::LinearAcceleration { .. })) => {
            spec.negative_values.is_some()
        }
        _ => false,
    };
    if !ok {
        return Err(NoiseError::WrongProducer {
            producer: match &spec.worldline {
                Some(w) => format!("{} ({})", spec.producer, w.kind_name()),
                None => spec.producer.to_string(),
            },
        });
    }
    let negative = spec.negative_values.as_ref().unwrap();
    let t_v = unruh_temperature(a);
    let mut worst = 0.0f64;
    for ((&omega, &f_pos), &f_neg) in
        spec.grid.omegas().iter().zip(&spec.values).zip(negative)
    {
        let x = HBAR * omega / (BOLTZMANN * t_v);
        // |F(-w)/F(w) - e^x| / e^x, evaluated as |F(-w)/F(w) e^-x - 1| to
        // stay finite for large x.
        let dev = (f_neg / f_pos * (-x).exp() - 1.0).abs();
        worst = worst.max(if dev.is_finite() { dev } else { f64::INFINITY });
    }
    Ok(worst)
}

/// Strict local maxima of a sampled spectrum, as (omega, value) pairs.
pub fn find_local_maxima(spec: &NoiseSpectrum) -> Vec<(f64, f64)> {
    let v = &spec.values;
    let mut peaks = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if v[i] > v[i - 1] && v[i] > v[i + 1] {
            peaks.push((spec.grid.omegas()[i], v[i]));
        }
    }
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{BOLTZMANN, HBAR};

    const A_ONE_KELVIN: f64 = 2.466e20;

    fn thermal_band(a: f64, points: usize) -> SpectrumGrid {
        let omega_th = a / (2.0 * PI * SPEED_OF_LIGHT);
        SpectrumGrid::log_spaced(0.1 * omega_th, 10.0 * omega_th, points).unwrap()
    }

    #[test]
    fn planck_low_frequency_limit() {
        let a = A_ONE_KELVIN;
        let omega = 1e-8 * a / SPEED_OF_LIGHT;
        let limit = a / (4.0 * PI * PI * SPEED_OF_LIGHT);
        assert!((planck_response(omega, a) - limit).abs() / limit < 1e-6);
    }

    #[test]
    fn planck_boltzmann_identity() {
        // Emission/absorption ratio n/(n+1) = exp(-hbar omega / k_B T_V).
        let a = A_ONE_KELVIN;
        let t_v = unruh_temperature(a);
        for omega in [1e10, 7.7e10, 3.2e11] {
            let f = planck_response(omega, a);
            let ratio = f / (f + omega / TAU);
            let boltzmann = (-HBAR * omega / (BOLTZMANN * t_v)).exp();
            assert!((ratio - boltzmann).abs() / boltzmann < 1e-12);
        }
    }

    #[test]
    fn planck_unit_exponent_occupation() {
        // At omega = k_B * 1K / hbar and the 1-kelvin acceleration the
        // exponent is 1, so the occupation factor is 1/(e - 1).
        let a = 2.0 * PI * SPEED_OF_LIGHT * BOLTZMANN / HBAR;
        let omega = BOLTZMANN / HBAR;
        let occupation = planck_response(omega, a) * TAU / omega;
        let expected = 1.0 / (std::f64::consts::E - 1.0);
        assert!((occupation - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn linear_spectrum_matches_planck_to_one_percent() {
        let a = A_ONE_KELVIN;
        let grid = thermal_band(a, 31);
        let reg = RegularizationSettings::defaults_for(&grid);
        let spec =
            response_spectrum(&Worldline::LinearAcceleration { a }, &grid, &reg).unwrap();
        let mut worst = 0.0f64;
        for (&omega, &v) in grid.omegas().iter().zip(&spec.values) {
            let p = planck_response(omega, a);
            worst = worst.max((v - p).abs() / p);
        }
        assert!(worst < 0.01, "max rel error vs Planck {worst:.3e}");
        assert!(spec.convergence.unwrap() < 1e-3);
    }

    #[test]
    fn epsilon_robustness() {
        let a = A_ONE_KELVIN;
        let grid = thermal_band(a, 21);
        let reg = RegularizationSettings::defaults_for(&grid);
        let halved = RegularizationSettings { epsilon: reg.epsilon / 2.0, ..reg };
        let w = Worldline::LinearAcceleration { a };
        let s1 = response_spectrum(&w, &grid, &reg).unwrap();
        let s2 = response_spectrum(&w, &grid, &halved).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in s1.values.iter().zip(&s2.values) {
            worst = worst.max((a - b).abs() / b.abs());
        }
        assert!(worst < 5e-3, "epsilon halving changed values by {worst:.3e}");
    }

    #[test]
    fn inertial_spectrum_identically_zero() {
        let grid = SpectrumGrid::log_spaced(1e10, 1e12, 11).unwrap();
        let reg = RegularizationSettings::defaults_for(&grid);
        let spec = response_spectrum(&Worldline::Inertial, &grid, &reg).unwrap();
        assert!(spec.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn kms_deviation_linear_and_errors() {
        let a = A_ONE_KELVIN;
        let grid = thermal_band(a, 21);
        let reg = RegularizationSettings::defaults_for(&grid);
        let w = Worldline::LinearAcceleration { a };
        let spec = response_spectrum(&w, &grid, &reg).unwrap();
        let dev = kms_deviation(&spec, a).unwrap();
        assert!(dev < 0.02, "KMS deviation {dev:.3e}");

        let planck = planck_spectrum(&grid, a);
        assert!(kms_deviation(&planck, a).unwrap() < 1e-12);

        let circular = response_spectrum(
            &Worldline::Circular { omega_lab: 2.11e12, beta: 0.6 },
            &SpectrumGrid::log_spaced(1e11, 1e13, 11).unwrap(),
            &RegularizationSettings::defaults_for(
                &SpectrumGrid::log_spaced(1e11, 1e13, 11).unwrap(),
            ),
        )
        .unwrap();
        assert!(matches!(
            kms_deviation(&circular, a),
            Err(NoiseError::WrongProducer { .. })
        ));
    }

    #[test]
    fn circular_spectrum_vanishes_with_speed() {
        // At fixed grid the circular spectrum falls to the inertial (null)
        // spectrum as beta -> 0.
        let omega_lab = 2.11e12;
        let proper = 1.25 * omega_lab;
        let grid = SpectrumGrid::linear(0.2 * proper, 5.0 * proper, 25).unwrap();
        let reg = RegularizationSettings::defaults_for(&grid);
        let mut peaks = Vec::new();
        for beta in [0.3, 0.2, 0.1] {
            let spec =
                response_spectrum(&Worldline::Circular { omega_lab, beta }, &grid, &reg).unwrap();
            peaks.push(spec.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        }
        assert!(peaks[0] > peaks[1] && peaks[1] > peaks[2], "peaks {peaks:?}");
    }

    #[test]
    fn circular_spectrum_positive_and_decaying() {
        let omega_lab = 2.11e12;
        let w = Worldline::Circular { omega_lab, beta: 0.6 };
        let proper = w.gamma() * omega_lab;
        let grid = SpectrumGrid::linear(0.2 * proper, 5.0 * proper, 49).unwrap();
        let reg = RegularizationSettings::defaults_for(&grid);
        let spec = response_spectrum(&w, &grid, &reg).unwrap();
        assert!(spec.values.iter().all(|&v| v > 0.0));
        assert!(spec.values[0] > *spec.values.last().unwrap());
    }

    #[test]
    fn unconverged_quadrature_reported() {
        let a = A_ONE_KELVIN;
        let grid = thermal_band(a, 11);
        let mut reg = RegularizationSettings::defaults_for(&grid);
        reg.nodes = 64; // far too coarse for the top of the band
        let r = response_spectrum(&Worldline::LinearAcceleration { a }, &grid, &reg);
        assert!(matches!(r, Err(NoiseError::QuadratureNotConverged { .. })), "{r:?}");
    }

    #[test]
    fn settings_validation() {
        let grid = SpectrumGrid::log_spaced(1e10, 1e12, 5).unwrap();
        let good = RegularizationSettings::defaults_for(&grid);
        assert!(good.validate(&grid).is_ok());
        assert!(RegularizationSettings { epsilon: 0.0, ..good }.validate(&grid).is_err());
        assert!(RegularizationSettings { taper_fraction: 0.0, ..good }.validate(&grid).is_err());
        // Too short a tail violates the minimum period coverage.
        assert!(
            RegularizationSettings { dtau_max: 10.0 / grid.min(), ..good }
                .validate(&grid)
                .is_err()
        );
        assert!(SpectrumGrid::new(vec![]).is_err());
        assert!(SpectrumGrid::new(vec![1.0, 1.0]).is_err());
        assert!(SpectrumGrid::new(vec![-1.0, 1.0]).is_err());
    }

    #[test]
    fn local_maxima_finder() {
        let grid = SpectrumGrid::linear(1.0, 5.0, 5).unwrap();
        let spec = NoiseSpectrum {
            grid: grid.clone(),
            values: vec![0.0, 2.0, 1.0, 3.0, 0.5],
            negative_values: None,
            producer: SpectrumProducer::KsyClosedForm,
            worldline: None,
            settings_fingerprint: String::new(),
            convergence: None,
            units: ENERGY_DENSITY_UNITS,
        };
        let peaks = find_local_maxima(&spec);
        assert_eq!(peaks.len(), 2);
        assert_eq!(peaks[0].0, 2.0);
        assert_eq!(peaks[1].0, 4.0);
    }
}
