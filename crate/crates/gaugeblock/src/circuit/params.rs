//! Circuit parameters and basis truncation settings.

use serde::Serialize;

use super::CircuitError;
use crate::units;

/// e^2/(2h) expressed in GHz·fF: the charging energy of 1 fF is this many
/// GHz. Computed from CODATA e and h.
pub const CHARGING_GHZ_FF: f64 = 19.37024661;

/// Static parameters of the three-transmon circuit. All energies are angular
/// (rad/ns, ħ = 1); the flux bias is in units of the flux quantum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CircuitParams {
    /// Charging-energy matrix E_C,jk (rad/ns). Symmetric, positive diagonal.
    pub ec: [[f64; 3]; 3],
    /// Josephson energy of fixed transmon 1.
    pub ej1: f64,
    /// Josephson energy of fixed transmon 3.
    pub ej3: f64,
    /// SQUID total Josephson energy E_J = E_JL + E_JR.
    pub ej_sum: f64,
    /// SQUID asymmetry dE_J = E_JL - E_JR.
    pub dej: f64,
    /// DC flux bias in units of Phi_0.
    pub flux_bias: f64,
}

impl CircuitParams {
    pub fn validate(&self) -> Result<(), CircuitError> {
        let bad = |msg: &str| Err(CircuitError::InvalidParams(msg.into()));
        for j in 0..3 {
            if self.ec[j][j] <= 0.0 {
                return bad("charging-energy diagonal must be positive");
            }
            for k in 0..3 {
                if (self.ec[j][k] - self.ec[k][j]).abs() > 1e-12 * self.ec[j][j].abs() {
                    return bad("charging-energy matrix must be symmetric");
                }
                if j != k && self.ec[j][k].abs() >= self.ec[j][j] {
                    return bad("off-diagonal charging energies must stay small");
                }
            }
        }
        if self.ej1 <= 0.0 || self.ej3 <= 0.0 || self.ej_sum <= 0.0 {
            return bad("Josephson energies must be positive");
        }
        if self.dej.abs() >= self.ej_sum {
            return bad("|dE_J| must be below E_J");
        }
        Ok(())
    }

    /// Josephson asymmetry ratio d = dE_J / E_J.
    pub fn asymmetry(&self) -> f64 {
        self.dej / self.ej_sum
    }

    pub fn with_flux_bias(mut self, flux_bias: f64) -> Self {
        self.flux_bias = flux_bias;
        self
    }

    /// Effective local Josephson coefficients of the SQUID at the DC bias:
    /// (E_J cos(pi Phi_b), dE_J sin(pi Phi_b)) multiplying cos(phi_2) and
    /// sin(phi_2) respectively.
    pub fn squid_coefficients(&self) -> (f64, f64) {
        let x = std::f64::consts::PI * self.flux_bias;
        (self.ej_sum * x.cos(), self.dej * x.sin())
    }
}

/// Charge-basis truncation and how many local eigenstates each transmon
/// keeps in the coupled model. Three-photon manifolds need at least four
/// local levels; the charge cutoff must hold the transmon charge spread.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransmonBasis {
    pub charge_cutoff: usize,
    pub levels_kept: usize,
}

impl TransmonBasis {
    pub fn new(charge_cutoff: usize, levels_kept: usize) -> Self {
        assert!(charge_cutoff >= 10, "charge cutoff below 10 is unreliable");
        assert!(levels_kept >= 4, "three-photon manifolds need >= 4 levels");
        assert!(levels_kept <= 2 * charge_cutoff + 1);
        TransmonBasis {
            charge_cutoff,
            levels_kept,
        }
    }

    pub fn charge_dim(&self) -> usize {
        2 * self.charge_cutoff + 1
    }

    /// Dimension of the coupled product space.
    pub fn product_dim(&self) -> usize {
        self.levels_kept.pow(3)
    }
}

impl Default for TransmonBasis {
    fn default() -> Self {
        TransmonBasis::new(12, 5)
    }
}

/// E_C = (e^2/2) M^{-1} from the Maxwell capacitance matrix
///
/// ```text
///     ( C1+C12+C13   -C12          -C13        )
/// M = ( -C12          C2+C12+C23   -C23        )
///     ( -C13         -C23           C3+C13+C23 )
/// ```
///
/// Capacitances in fF; the result is E_C/h in GHz.
pub fn charging_matrix_from_capacitances(
    c1: f64,
    c2: f64,
    c3: f64,
    c12: f64,
    c13: f64,
    c23: f64,
) -> Result<[[f64; 3]; 3], CircuitError> {
    if c1 <= 0.0 || c2 <= 0.0 || c3 <= 0.0 || c12 < 0.0 || c13 < 0.0 || c23 < 0.0 {
        return Err(CircuitError::InvalidParams(
            "qubit capacitances must be positive, couplings non-negative".into(),
        ));
    }
    let m = nalgebra::Matrix3::new(
        c1 + c12 + c13,
        -c12,
        -c13,
        -c12,
        c2 + c12 + c23,
        -c23,
        -c13,
        -c23,
        c3 + c13 + c23,
    );
    let inv = m
        .try_inverse()
        .ok_or(CircuitError::SingularCapacitanceMatrix)?;
    let mut ec = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in 0..3 {
            ec[j][k] = CHARGING_GHZ_FF * inv[(j, k)];
        }
    }
    Ok(ec)
}

/// Convert a charging matrix quoted in GHz into internal angular units.
pub fn ec_ghz_to_angular(ec_ghz: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in 0..3 {
            out[j][k] = units::ghz(ec_ghz[j][k]);
        }
    }
    out
}
