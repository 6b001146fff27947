//! The link-model Hamiltonian on the gauge sector, and exact evolution.

use serde::Serialize;

use super::{GaugeSector, QlmError};
use crate::numkit::{C64, ComplexMatrix, CooBuilder, Propagator, StateVector};

/// Staggered mass mu and three-body coupling J (energies, ħ = 1). The
/// coupling is non-negative; its phase is absorbed into the basis.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QlmParams {
    pub mass: f64,
    pub coupling: f64,
}

impl QlmParams {
    pub fn new(mass: f64, coupling: f64) -> Self {
        assert!(coupling >= 0.0, "coupling J must be non-negative");
        QlmParams { mass, coupling }
    }
}

/// Hamiltonian matrix on the sector basis. Diagonal entries are the
/// staggered mass energy of each configuration; each hop
/// sigma^+_n tau^+ sigma^-_{n+1} (pattern 0,0,1 -> 1,1,0 on sites n, link n,
/// site n+1) and its conjugate contribute -J. All entries are real and the
/// matrix is Hermitian by construction; hops never leave the sector.
pub fn build_qlm_hamiltonian(sector: &GaugeSector, params: &QlmParams) -> ComplexMatrix {
    let dim = sector.dim();
    assert!(dim > 0, "empty gauge sector");
    let l = sector.lattice().n_sites();
    let mut builder = CooBuilder::new(dim, dim);
    for (row, config) in sector.states().iter().enumerate() {
        let mut diag = 0.0;
        for n in 1..=l {
            let stagger = if n % 2 == 0 { 1.0 } else { -1.0 };
            diag += 0.5 * params.mass * stagger * config.sigma_z(n);
        }
        builder.add(row, row, C64::new(diag, 0.0));
        for n in 1..l {
            let pattern = (
                config.matter_bit(n),
                config.link_bit(n),
                config.matter_bit(n + 1),
            );
            let hop = match pattern {
                (false, false, true) | (true, true, false) => true,
                _ => false,
            };
            if hop {
                let flipped = config
                    .with_matter_bit(n, !pattern.0)
                    .with_link_bit(n, !pattern.1)
                    .with_matter_bit(n + 1, !pattern.2);
                let col = sector
                    .index_of(&flipped)
                    .expect("gauge hop left the sector; enumeration is inconsistent");
                builder.add(col, row, C64::new(-params.coupling, 0.0));
            }
        }
    }
    builder.finalize()
}

/// Evolve a sector state through |psi(t)> = exp(-i H t) |psi(0)> via the
/// spectral propagator, returning one state per requested time.
pub fn evolve(
    sector: &GaugeSector,
    hamiltonian: &ComplexMatrix,
    psi0: &StateVector,
    times: &[f64],
) -> Result<Vec<StateVector>, QlmError> {
    let tag = sector.basis_tag();
    if psi0.basis_tag != tag {
        return Err(QlmError::BasisMismatch {
            expected: tag,
            found: psi0.basis_tag.clone(),
        });
    }
    if psi0.dim() != sector.dim() {
        return Err(QlmError::Num(crate::numkit::NumError::DimensionMismatch {
            expected: sector.dim(),
            found: psi0.dim(),
        }));
    }
    let propagator = Propagator::new(hamiltonian)?;
    times
        .iter()
        .map(|&t| {
            let amps = propagator.apply(&psi0.amplitudes, t)?;
            Ok(StateVector::new(amps, tag.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlm::{enumerate_gauge_sector, gauss_expectation, LatticeSpec};

    fn two_site() -> GaugeSector {
        enumerate_gauge_sector(&LatticeSpec::new(2).unwrap()).unwrap()
    }

    #[test]
    fn two_site_massless_hamiltonian_is_pure_hopping() {
        let sector = two_site();
        let h = build_qlm_hamiltonian(&sector, &QlmParams::new(0.0, 1.3));
        // Basis order is {|001>, |110>}; the single hop couples them.
        assert_eq!(h.get(0, 0), C64::new(0.0, 0.0));
        assert_eq!(h.get(1, 1), C64::new(0.0, 0.0));
        assert_eq!(h.get(0, 1), C64::new(-1.3, 0.0));
        assert_eq!(h.get(1, 0), C64::new(-1.3, 0.0));
    }

    #[test]
    fn two_site_mass_diagonal() {
        let sector = two_site();
        let mu = 0.7;
        let h = build_qlm_hamiltonian(&sector, &QlmParams::new(mu, 0.0));
        // |001> holds the charge on the even site (mass -mu), |110> on the
        // odd site (mass +mu); the trace vanishes.
        let i001 = sector
            .index_of(&crate::qlm::ChainConfig::from_ket(sector.lattice(), "001").unwrap())
            .unwrap();
        let i110 = sector
            .index_of(&crate::qlm::ChainConfig::from_ket(sector.lattice(), "110").unwrap())
            .unwrap();
        assert!((h.get(i001, i001).re + mu).abs() < 1e-15);
        assert!((h.get(i110, i110).re - mu).abs() < 1e-15);
        assert!(h.trace().norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_is_hermitian_and_real() {
        for l in [2, 4, 6, 8] {
            let sector = enumerate_gauge_sector(&LatticeSpec::new(l).unwrap()).unwrap();
            let h = build_qlm_hamiltonian(&sector, &QlmParams::new(0.4, 1.0));
            assert!(h.is_hermitian(), "L={l}");
            for (_, _, v) in h.nonzeros() {
                assert_eq!(v.im, 0.0);
            }
        }
    }

    #[test]
    fn two_site_rabi_oscillation() {
        // mu = 0: P_110(t) = sin^2(J t), the two-level closed form.
        let sector = two_site();
        let j = 1.0;
        let h = build_qlm_hamiltonian(&sector, &QlmParams::new(0.0, j));
        let psi0 = StateVector::basis_state(2, 0, sector.basis_tag()); // |001>
        let times: Vec<f64> = (0..=40).map(|k| k as f64 * 0.1).collect();
        let states = evolve(&sector, &h, &psi0, &times).unwrap();
        for (t, s) in times.iter().zip(states.iter()) {
            let p110 = s.amplitudes[1].norm_sqr();
            assert!((p110 - (j * t).sin().powi(2)).abs() < 1e-10, "t={t}");
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_time_returns_initial_state() {
        let sector = two_site();
        let h = build_qlm_hamiltonian(&sector, &QlmParams::new(0.3, 1.0));
        let psi0 = StateVector::basis_state(2, 1, sector.basis_tag());
        let states = evolve(&sector, &h, &psi0, &[0.0]).unwrap();
        for (a, b) in states[0].amplitudes.iter().zip(psi0.amplitudes.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn gauss_law_stays_zero_under_evolution() {
        let sector = enumerate_gauge_sector(&LatticeSpec::new(6).unwrap()).unwrap();
        let h = build_qlm_hamiltonian(&sector, &QlmParams::new(0.5, 1.0));
        let psi0 = StateVector::basis_state(sector.dim(), 0, sector.basis_tag());
        let states = evolve(&sector, &h, &psi0, &[0.0, 3.7, 11.0]).unwrap();
        for s in &states {
            for n in 1..=6 {
                assert!(gauss_expectation(&sector, s, n).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_tag_mismatch_is_rejected() {
        let sector = two_site();
        let h = build_qlm_hamiltonian(&sector, &QlmParams::new(0.0, 1.0));
        let psi0 = StateVector::basis_state(2, 0, "some-other-basis");
        assert!(matches!(
            evolve(&sector, &h, &psi0, &[1.0]),
            Err(QlmError::BasisMismatch { .. })
        ));
    }
}
