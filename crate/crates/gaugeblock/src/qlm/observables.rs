//! Diagonal observables: particle number, electric field, Gauss generators.
//!
//! All three are diagonal in the configuration basis, so expectation values
//! on sector states reduce to probability-weighted sums over configurations.

use super::{gauss_eigenvalue, ChainConfig, GaugeSector, QlmError};
use crate::numkit::StateVector;

/// N_n = (1 - sigma^z_n)/2 on a configuration: 1 when occupied.
pub fn particle_number_config(config: &ChainConfig, site: usize) -> Result<f64, QlmError> {
    if site < 1 || site > config.n_sites() {
        return Err(QlmError::SiteOutOfRange {
            site,
            n_sites: config.n_sites(),
        });
    }
    Ok(0.5 * (1.0 - config.sigma_z(site)))
}

/// E_n = -tau^z_{n,n+1} on a configuration: +1 when the field points right.
pub fn electric_field_config(config: &ChainConfig, link: usize) -> Result<f64, QlmError> {
    if link < 1 || link > config.n_links() {
        return Err(QlmError::LinkOutOfRange {
            link,
            n_links: config.n_links(),
        });
    }
    Ok(-config.tau_z(link))
}

fn diagonal_expectation(
    sector: &GaugeSector,
    state: &StateVector,
    mut value: impl FnMut(&ChainConfig) -> Result<f64, QlmError>,
) -> Result<f64, QlmError> {
    if state.dim() != sector.dim() {
        return Err(QlmError::Num(crate::numkit::NumError::DimensionMismatch {
            expected: sector.dim(),
            found: state.dim(),
        }));
    }
    let mut acc = 0.0;
    for (amp, config) in state.amplitudes.iter().zip(sector.states()) {
        let p = amp.norm_sqr();
        if p > 0.0 {
            acc += p * value(config)?;
        }
    }
    Ok(acc)
}

/// <N_n> of a normalized sector state; lies in [0, 1].
pub fn particle_number(
    sector: &GaugeSector,
    state: &StateVector,
    site: usize,
) -> Result<f64, QlmError> {
    diagonal_expectation(sector, state, |c| particle_number_config(c, site))
}

/// <E_n> of a normalized sector state; lies in [-1, 1].
pub fn electric_field(
    sector: &GaugeSector,
    state: &StateVector,
    link: usize,
) -> Result<f64, QlmError> {
    diagonal_expectation(sector, state, |c| electric_field_config(c, link))
}

/// <G_n> of a sector state. G_n is diagonal in the configuration basis and
/// every sector configuration has eigenvalue zero, so this is exactly zero
/// for any state in the sector; it is exposed for diagnostics and tests.
pub fn gauss_expectation(
    sector: &GaugeSector,
    state: &StateVector,
    site: usize,
) -> Result<f64, QlmError> {
    let lattice = *sector.lattice();
    diagonal_expectation(sector, state, |c| gauss_eigenvalue(&lattice, c, site))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlm::{enumerate_gauge_sector, LatticeSpec};

    #[test]
    fn basis_configuration_values() {
        let lat = LatticeSpec::new(2).unwrap();
        let c = ChainConfig::from_ket(&lat, "110").unwrap();
        assert_eq!(particle_number_config(&c, 1).unwrap(), 1.0);
        assert_eq!(particle_number_config(&c, 2).unwrap(), 0.0);
        assert_eq!(electric_field_config(&c, 1).unwrap(), 1.0);
    }

    #[test]
    fn index_errors() {
        let lat = LatticeSpec::new(2).unwrap();
        let c = ChainConfig::from_ket(&lat, "110").unwrap();
        assert!(particle_number_config(&c, 0).is_err());
        assert!(particle_number_config(&c, 3).is_err());
        assert!(electric_field_config(&c, 2).is_err());
    }

    #[test]
    fn superposition_expectations() {
        use crate::numkit::C64;
        let sector = enumerate_gauge_sector(&LatticeSpec::new(2).unwrap()).unwrap();
        // equal superposition of |001> and |110>
        let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = StateVector::new(vec![amp, amp], sector.basis_tag());
        assert!((particle_number(&sector, &psi, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((electric_field(&sector, &psi, 1).unwrap() - 0.0).abs() < 1e-15);
        assert!(gauss_expectation(&sector, &psi, 1).unwrap().abs() == 0.0);
    }
}
