//! Unit conventions and conversions.
//!
//! Internally every frequency is angular, in rad/ns, and every energy is
//! divided by ħ (so energies are also rad/ns). Time is in ns, decay rates in
//! 1/ns. External interfaces (configs, CSV/JSON output, fixtures) quote
//! ordinary frequencies in GHz or MHz; the conversion factor is exactly 2π.

use std::f64::consts::TAU;

/// Ordinary frequency in GHz to angular frequency in rad/ns.
pub fn ghz(f: f64) -> f64 {
    TAU * f
}

/// Ordinary frequency in MHz to angular frequency in rad/ns.
pub fn mhz(f: f64) -> f64 {
    TAU * 1e-3 * f
}

/// Angular frequency in rad/ns to ordinary frequency in GHz.
pub fn to_ghz(w: f64) -> f64 {
    w / TAU
}

/// Angular frequency in rad/ns to ordinary frequency in MHz.
pub fn to_mhz(w: f64) -> f64 {
    1e3 * w / TAU
}

/// Rate in 1/µs to 1/ns.
pub fn per_us(r: f64) -> f64 {
    1e-3 * r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        assert!((to_ghz(ghz(5.7279)) - 5.7279).abs() < 1e-15);
        assert!((to_mhz(mhz(63.0)) - 63.0).abs() < 1e-12);
        assert!((ghz(1.0) - std::f64::consts::TAU).abs() == 0.0);
    }
}
