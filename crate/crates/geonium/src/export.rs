//! Deterministic output formatting and config fingerprinting.

/// Machine format: scientific notation, 12 significant digits. Every CSV
/// cell and canonicalized config value goes through this, so identical
/// runs produce byte-identical files.
pub fn fmt_machine(x: f64) -> String {
    format!("{x:.11e}")
}

/// Human format: 4 significant digits.
pub fn fmt_human(x: f64) -> String {
    format!("{x:.3e}")
}

/// FNV-1a 64-bit hash; stable across platforms and runs.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    hash
}

/// 16-hex-digit fingerprint of canonicalized config text.
pub fn fingerprint(canonical: &str) -> String {
    format!("{:016x}", fnv1a_64(canonical.as_bytes()))
}

/// Parses a machine-formatted float back, used by JSON emission to keep
/// numbers at exactly 12 significant digits.
pub fn machine_number(x: f64) -> serde_json::Number {
    fmt_machine(x).parse().expect("12-digit scientific literal is a valid JSON number")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_format_is_stable() {
        assert_eq!(fmt_machine(10.57e9), "1.05700000000e10");
        assert_eq!(fmt_machine(0.0), "0.00000000000e0");
        assert_eq!(fmt_machine(-2.385965901770e0), "-2.38596590177e0");
    }

    #[test]
    fn fnv_reference_vectors() {
        // Published FNV-1a test vectors.
        assert_eq!(fnv1a_64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a_64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a_64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn fingerprints_differ_on_content() {
        assert_ne!(fingerprint("a=1\n"), fingerprint("a=2\n"));
        assert_eq!(fingerprint("a=1\n").len(), 16);
    }

    #[test]
    fn machine_number_round_trips_as_json() {
        let n = machine_number(0.47e-22);
        assert_eq!(n.to_string(), "4.70000000000e-23");
    }
}
