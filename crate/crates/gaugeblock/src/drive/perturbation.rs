//! Perturbative predictions for the drive-activated resonance.
//!
//! To first order in the flux amplitude the three-body strength is
//!
//! ```text
//! J(A_p) = (pi dE_J / 2 Phi_0) |<110| sin(phi_2) |001>| A_p
//! ```
//!
//! The resonance shift is second order in A_p and has two parts: the
//! time-averaged static dispersion from the cosine channel (first-order
//! perturbation theory in the drive operator) and a Bloch-Siegert-type sum
//! over virtual intermediate states from the sine channel (second order),
//!
//! ```text
//! omega_3q - omega_3q^0 = (pi^2 A_p^2 / 4 Phi_0^2) {
//!     dE_J^2 sum_l [ |<l|sin|110>|^2 / (e_110 - (e_l - w0))
//!                  + |<l|sin|110>|^2 / (e_110 - (e_l + w0))
//!                  - |<l|sin|001>|^2 / (e_001 - (e_l - w0))
//!                  - |<l|sin|001>|^2 / (e_001 - (e_l + w0)) ]
//!     + E_J ( <110|cos|110> - <001|cos|001> ) }
//! ```
//!
//! with w0 = e_110 - e_001. The cosine term alone is the commonly used
//! first-order estimate; on a strongly coupled device it misses a large part
//! of the shift, which is the point of carrying the full expression.

use serde::Serialize;

use super::DriveError;
use crate::circuit::DressedCircuit;

/// J/ħ (rad/ns) to first order in the flux amplitude (Phi_0 units).
pub fn perturbative_j(circuit: &DressedCircuit, amplitude: f64) -> Result<f64, DriveError> {
    let mel = circuit.sin2_element((1, 1, 0), (0, 0, 1))?.norm();
    Ok(0.5 * std::f64::consts::PI * circuit.params.dej.abs() * mel * amplitude)
}

/// Second-order resonance shift and its cosine-only part.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResonanceShift {
    /// Unshifted resonance e_110 - e_001 (rad/ns).
    pub zeroth_order: f64,
    /// Full second-order shift (rad/ns).
    pub total: f64,
    /// Static-dispersion (cosine-channel) part alone.
    pub cos_only: f64,
    /// Relative change of the sine-channel sum when the five highest levels
    /// are dropped; small values mean the level sum is converged.
    pub convergence_defect: f64,
    pub levels_used: usize,
}

impl ResonanceShift {
    /// Predicted resonance at this amplitude.
    pub fn omega_3q(&self) -> f64 {
        self.zeroth_order + self.total
    }

    pub fn omega_3q_cos_only(&self) -> f64 {
        self.zeroth_order + self.cos_only
    }
}

/// Evaluate the second-order shift at flux amplitude `amplitude` (Phi_0
/// units), summing virtual states over the whole dressed spectrum. A
/// denominator within 1e-4 * w0 of zero under a non-negligible matrix
/// element is reported instead of silently blowing up.
pub fn perturbative_shift(
    circuit: &DressedCircuit,
    amplitude: f64,
) -> Result<ResonanceShift, DriveError> {
    let i110 = circuit.label_index((1, 1, 0))?;
    let i001 = circuit.label_index((0, 0, 1))?;
    let e110 = circuit.energies[i110];
    let e001 = circuit.energies[i001];
    let w0 = e110 - e001;
    let dim = circuit.dim();

    let sum_over = |n_levels: usize| -> Result<f64, DriveError> {
        let mut acc = 0.0;
        for l in 0..n_levels {
            let s110 = circuit.sin2_dressed.get(l, i110).norm_sqr();
            let s001 = circuit.sin2_dressed.get(l, i001).norm_sqr();
            for (numer, eref, sign, secular) in [
                (s110, e110, 1.0, usize::MAX),
                // The co-rotating coupling within the resonant pair is the
                // Rabi interaction itself, not a shift; its two secular
                // terms are excluded. The counter-rotating partners (at
                // denominator 2 w0) stay: they are the pair's own
                // Bloch-Siegert contribution.
                (s110, e110, -1.0, i001),
                (s001, e001, 1.0, i110),
                (s001, e001, -1.0, usize::MAX),
            ] {
                if l == secular {
                    continue;
                }
                // sign = +1 pairs with (e_l - w0), -1 with (e_l + w0)
                let den = eref - (circuit.energies[l] - sign * w0);
                if den.abs() < 1e-4 * w0.abs() {
                    if numer > 1e-14 {
                        return Err(DriveError::NearDegenerate {
                            level: l,
                            denominator: den,
                        });
                    }
                    continue;
                }
                let term = numer / den;
                acc += if eref == e110 { term } else { -term };
            }
        }
        Ok(acc)
    };

    let full_sum = sum_over(dim)?;
    let reduced_sum = sum_over(dim.saturating_sub(5))?;
    let convergence_defect = if full_sum.abs() > 1e-30 {
        ((full_sum - reduced_sum) / full_sum).abs()
    } else {
        0.0
    };

    let prefactor = (std::f64::consts::PI * amplitude).powi(2) / 4.0;
    let cos_term = circuit.params.ej_sum
        * (circuit.cos2_diagonal((1, 1, 0))? - circuit.cos2_diagonal((0, 0, 1))?);
    let sin_term = circuit.params.dej.powi(2) * full_sum;
    Ok(ResonanceShift {
        zeroth_order: w0,
        total: prefactor * (sin_term + cos_term),
        cos_only: prefactor * cos_term,
        convergence_defect,
        levels_used: dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{dressed_circuit, CircuitParams, TransmonBasis};
    use crate::units;

    fn quick_circuit() -> DressedCircuit {
        let p = CircuitParams {
            ec: [
                [units::mhz(183.0), units::mhz(2.0), units::mhz(0.5)],
                [units::mhz(2.0), units::mhz(165.0), units::mhz(3.5)],
                [units::mhz(0.5), units::mhz(3.5), units::mhz(184.0)],
            ],
            ej1: units::ghz(23.9),
            ej3: units::ghz(18.9),
            ej_sum: units::ghz(27.9),
            dej: units::ghz(27.9) * 0.3,
            flux_bias: 0.0,
        };
        dressed_circuit(&p, &TransmonBasis::new(10, 4)).unwrap()
    }

    #[test]
    fn j_vanishes_without_amplitude_or_asymmetry() {
        let c = quick_circuit();
        assert_eq!(perturbative_j(&c, 0.0).unwrap(), 0.0);
        let mut p = c.params;
        p.dej = 0.0;
        let sym = dressed_circuit(&p, &c.basis).unwrap();
        assert_eq!(perturbative_j(&sym, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn j_is_linear_in_amplitude() {
        let c = quick_circuit();
        let j1 = perturbative_j(&c, 0.01).unwrap();
        let j2 = perturbative_j(&c, 0.02).unwrap();
        assert!((j2 - 2.0 * j1).abs() < 1e-15);
        assert!(j1 > 0.0);
    }

    #[test]
    fn shift_vanishes_at_zero_amplitude_and_scales_quadratically() {
        let c = quick_circuit();
        let s0 = perturbative_shift(&c, 0.0).unwrap();
        assert_eq!(s0.total, 0.0);
        let s1 = perturbative_shift(&c, 0.02).unwrap();
        let s2 = perturbative_shift(&c, 0.04).unwrap();
        assert!((s2.total - 4.0 * s1.total).abs() < 1e-12 * s1.total.abs());
        assert!((s2.cos_only - 4.0 * s1.cos_only).abs() < 1e-12 * s1.cos_only.abs());
    }

    #[test]
    fn level_sum_is_converged() {
        let c = quick_circuit();
        let s = perturbative_shift(&c, 0.02).unwrap();
        assert!(
            s.convergence_defect < 1e-3,
            "sum convergence defect {}",
            s.convergence_defect
        );
    }
}
