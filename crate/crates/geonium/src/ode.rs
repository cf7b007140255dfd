//! Fixed-step RK4 and adaptive Dormand-Prince 5(4) steppers for the
//! six-dimensional first-order systems used by the trajectory integrator.

use thiserror::Error;

pub type State6 = [f64; 6];

#[derive(Debug, Error, PartialEq)]
pub enum OdeError {
    /// The adaptive controller pushed the step below the resolvable scale.
    #[error("step size underflow at t = {t:.6e} (h = {h:.6e})")]
    StepSizeUnderflow { t: f64, h: f64 },
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step<F>(f: &F, t: f64, y: &State6, h: f64) -> State6
where
    F: Fn(f64, &State6) -> State6,
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..6 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn axpy(y: &State6, a: f64, k: &State6) -> State6 {
    let mut out = *y;
    for i in 0..6 {
        out[i] += a * k[i];
    }
    out
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// b5 - b4, applied to the seven stages for the embedded error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Counters and the largest normalized local-error estimate seen.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub max_error_estimate: f64,
}

/// Integrates from `t0` to `t1` with the adaptive 5(4) pair, invoking
/// `record` after every accepted step. `scale` gives the per-component
/// absolute error floor; the controller keeps the normalized estimate
/// `max_i |e_i| / (scale_i + rel_tol * max(|y0_i|, |y1_i|))` at or below
/// `rel_tol`.
#[allow(clippy::too_many_arguments)]
pub fn dopri5_span<F, R>(
    f: &F,
    t0: f64,
    t1: f64,
    y: &mut State6,
    h: &mut f64,
    rel_tol: f64,
    scale: &State6,
    stats: &mut StepStats,
    record: &mut R,
) -> Result<(), OdeError>
where
    F: Fn(f64, &State6) -> State6,
    R: FnMut(f64, &State6),
{
    let span = t1 - t0;
    if span <= 0.0 {
        return Ok(());
    }
    let h_min = span * 1e-14;
    let mut t = t0;
    let mut k1 = f(t, y);
    loop {
        let remaining = t1 - t;
        if remaining <= 0.0 {
            return Ok(());
        }
        // Clip the trial step to the span end; `last` marks the closing
        // step so t can land on t1 exactly instead of creeping up on it by
        // sub-ulp increments.
        let last = *h >= remaining;
        let h_step = if last { remaining } else { *h };
        if h_step < h_min {
            return Err(OdeError::StepSizeUnderflow { t, h: h_step });
        }

        let mut k = [[0.0; 6]; 7];
        k[0] = k1;
        for s in 0..6 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s + 1) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..6 {
                        ys[i] += h_step * a * kj[i];
                    }
                }
            }
            k[s + 1] = f(t + C[s] * h_step, &ys);
        }
        // Fifth-order solution (FSAL: stage 7 is f at the new point).
        let mut y1 = *y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let b = A[5][j];
            if b != 0.0 {
                for i in 0..6 {
                    y1[i] += h_step * b * kj[i];
                }
            }
        }

        // Normalized error: |e_i| / (atol_i + rtol max(|y0_i|, |y1_i|));
        // accept when it is at most 1.
        let mut err: f64 = 0.0;
        for i in 0..6 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h_step;
            let sc = scale[i] + rel_tol * y[i].abs().max(y1[i].abs());
            if sc > 0.0 {
                err = err.max(e.abs() / sc);
            } else if e != 0.0 {
                err = f64::INFINITY;
            }
        }

        if err <= 1.0 {
            t = if last { t1 } else { t + h_step };
            *y = y1;
            k1 = k[6];
            stats.accepted += 1;
            stats.max_error_estimate = stats.max_error_estimate.max(err);
            record(t, y);
            let factor = if err > 0.0 { (0.9 * err.powf(-0.2)).min(5.0) } else { 5.0 };
            if !last {
                *h = h_step * factor;
            }
        } else {
            stats.rejected += 1;
            *h = h_step * (0.9 * err.powf(-0.2)).max(0.1);
        }
    }
}
