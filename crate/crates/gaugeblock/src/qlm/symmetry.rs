//! Discrete symmetries of the link model acting on configurations.
//!
//! Parity reflects matter sites (site n -> L+1-n) and both reflects and
//! value-flips links (tau^z -> -tau^z). Charge conjugation shifts every site
//! by one with occupation complement and shifts links by one with a value
//! flip; the cells freed at the left edge take the complement of the
//! wrapped-around site L and the flipped boundary background b_L — the same
//! substitution rule Gauss's law uses for missing links.
//!
//! On an infinite chain both maps are exact symmetries of the staggered
//! model. On a finite open chain, parity with even L also swaps the
//! staggering sublattice and maps the (b_L, b_R) background to (-b_R, -b_L);
//! edge behavior of the one-site shift is convention. The bulk relations
//! tested here: parity reverses the flux pattern, charge conjugation maps
//! G_n -> -G_{n+1}, and with the symmetric background the right-pointing
//! uniform-flux configuration maps onto the left-pointing one.

use super::{ChainConfig, LatticeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    Parity,
    ChargeConjugation,
}

/// Apply a discrete symmetry to a product configuration.
pub fn symmetry_transform(
    lattice: &LatticeSpec,
    config: &ChainConfig,
    kind: SymmetryKind,
) -> ChainConfig {
    let l = lattice.n_sites();
    let mut out = ChainConfig::new(lattice, 0, 0);
    match kind {
        SymmetryKind::Parity => {
            for n in 1..=l {
                out = out.with_matter_bit(n, config.matter_bit(l + 1 - n));
            }
            for j in 1..l {
                out = out.with_link_bit(j, !config.link_bit(l - j));
            }
        }
        SymmetryKind::ChargeConjugation => {
            out = out.with_matter_bit(1, !config.matter_bit(l));
            for n in 2..=l {
                out = out.with_matter_bit(n, !config.matter_bit(n - 1));
            }
            // Virtual link 0 carries tau^z = b_L; flipped it becomes
            // -b_L, i.e. bit 0 for the default b_L = -1.
            let b_left_bit = lattice.boundary_left() < 0.0;
            out = out.with_link_bit(1, !b_left_bit);
            for j in 2..l {
                out = out.with_link_bit(j, !config.link_bit(j - 1));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlm::{
        electric_field_config, enumerate_gauge_sector, false_vacuum_config, gauss_eigenvalue,
        true_vacuum_config,
    };

    #[test]
    fn parity_is_an_involution() {
        for l in [2usize, 4, 5, 7, 12] {
            let lat = LatticeSpec::new(l).unwrap();
            // walk a few arbitrary configurations
            for seed in 0..20u16 {
                let c = ChainConfig::new(&lat, seed.wrapping_mul(31) & ((1 << l) - 1), {
                    let m = (1u32 << (l - 1)) - 1;
                    (seed.wrapping_mul(17) as u32 & m) as u16
                });
                let pp = symmetry_transform(
                    &lat,
                    &symmetry_transform(&lat, &c, SymmetryKind::Parity),
                    SymmetryKind::Parity,
                );
                assert_eq!(pp, c);
            }
        }
    }

    #[test]
    fn parity_reverses_the_flux_pattern() {
        let lat = LatticeSpec::new(8).unwrap();
        let c = ChainConfig::new(&lat, 0b10110010, 0b0110101);
        let p = symmetry_transform(&lat, &c, SymmetryKind::Parity);
        for j in 1..8 {
            let e = electric_field_config(&c, j).unwrap();
            let ep = electric_field_config(&p, 8 - j).unwrap();
            assert_eq!(ep, -e);
        }
    }

    #[test]
    fn charge_conjugation_maps_right_vacuum_to_left_vacuum() {
        // Same matter pattern (odd sites occupied), flux direction reversed.
        let lat = LatticeSpec::new(12).unwrap();
        let right = false_vacuum_config(&lat);
        let left = symmetry_transform(&lat, &right, SymmetryKind::ChargeConjugation);
        for n in 1..=12 {
            assert_eq!(left.matter_bit(n), n % 2 == 1, "site {n}");
        }
        for j in 1..12 {
            assert_eq!(electric_field_config(&left, j).unwrap(), -1.0, "link {j}");
        }
    }

    #[test]
    fn parity_maps_uniform_right_flux_to_uniform_left_flux() {
        let lat = LatticeSpec::new(12).unwrap();
        let right = false_vacuum_config(&lat);
        let p = symmetry_transform(&lat, &right, SymmetryKind::Parity);
        for j in 1..12 {
            assert_eq!(electric_field_config(&p, j).unwrap(), -1.0);
        }
    }

    #[test]
    fn true_vacuum_is_a_parity_fixed_point_on_odd_chains() {
        // Odd chains keep the staggering sublattice under reflection, so the
        // symmetric vacuum maps to itself exactly.
        let lat = LatticeSpec::new(7).unwrap();
        let tv = true_vacuum_config(&lat);
        assert_eq!(symmetry_transform(&lat, &tv, SymmetryKind::Parity), tv);
    }

    #[test]
    fn charge_conjugation_shifts_gauss_law() {
        // G_{n+1}(C c) = -G_n(c) on bulk sites.
        let lat = LatticeSpec::new(10).unwrap();
        for seed in 0..40u16 {
            let c = ChainConfig::new(
                &lat,
                seed.wrapping_mul(113) & 0x3ff,
                seed.wrapping_mul(57) & 0x1ff,
            );
            let cc = symmetry_transform(&lat, &c, SymmetryKind::ChargeConjugation);
            for n in 1..=8 {
                let g = gauss_eigenvalue(&lat, &c, n).unwrap();
                let gc = gauss_eigenvalue(&lat, &cc, n + 1).unwrap();
                assert_eq!(gc, -g, "seed {seed}, site {n}");
            }
        }
    }

    #[test]
    fn parity_maps_sector_to_flipped_boundary_sector() {
        // On odd chains reflection keeps the staggering aligned, and the
        // image of the background-b sector is the background -b sector.
        let lat = LatticeSpec::new(7).unwrap();
        let flipped = LatticeSpec::with_boundary(7, 1, 1).unwrap();
        let sector = enumerate_gauge_sector(&lat).unwrap();
        let image = enumerate_gauge_sector(&flipped).unwrap();
        assert_eq!(sector.dim(), image.dim());
        for c in sector.states() {
            let p = symmetry_transform(&lat, c, SymmetryKind::Parity);
            assert!(image.contains(&p), "{c} -> {p} not in flipped sector");
        }
    }
}
