//! Zero-order Bessel function and its first zero.
//!
//! The cavity-mode calculations only ever need J0 on [0, ~8], where the
//! power series sum_k (-x^2/4)^k / (k!)^2 converges to machine precision
//! without noticeable cancellation.

/// J0(x) by power series; accurate to ~1e-12 relative for |x| <= 8, which
/// covers every radial argument used by the TM010 mode profile.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        term *= q / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

/// First positive zero of J0, found by bisection on [2, 3] down to f64
/// resolution (about 16 significant digits; the reference value is
/// 2.404825557695773).
pub fn j0_first_zero() -> f64 {
    let mut lo = 2.0;
    let mut hi = 3.0;
    debug_assert!(bessel_j0(lo) > 0.0 && bessel_j0(hi) < 0.0);
    // 80 halvings of [2,3] land below 1 ulp.
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_reference_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        // Abramowitz & Stegun table values.
        assert!((bessel_j0(1.0) - 0.7651976865579666).abs() < 1e-12);
        assert!((bessel_j0(2.0) - 0.2238907791412357).abs() < 1e-12);
        assert!((bessel_j0(5.0) + 0.1775967713143383).abs() < 1e-12);
        assert_eq!(bessel_j0(-1.5), bessel_j0(1.5));
    }

    #[test]
    fn first_zero_to_high_precision() {
        let z = j0_first_zero();
        assert!((z - 2.404825557695773).abs() < 1e-12, "xi01 = {z:.15}");
        assert!(bessel_j0(z).abs() < 1e-14);
    }
}
