//! Metastable-vacuum decay experiments on the chain.
//!
//! For large positive mu/J, the symmetric configuration (even sites
//! occupied, alternating flux, zero net field) is the true vacuum; the
//! staggering-broken configuration with odd sites occupied and uniform flux
//! is metastable. Quenching the latter to mu/J = 0 and evolving with the
//! three-body coupling alone relaxes the bulk observables toward the
//! coupling-only ground state.

use serde::Serialize;

use super::{
    build_qlm_hamiltonian, electric_field, electric_field_config, enumerate_gauge_sector, evolve,
    gauss_eigenvalue, particle_number, particle_number_config, ChainConfig, GaugeSector,
    LatticeSpec, QlmError, QlmParams,
};
use crate::numkit::{eigh, StateVector};

/// Which product configuration the quench starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VacuumStart {
    /// Odd sites occupied, all links pointing right (uniform flux +1).
    FalseVacuumRight,
    /// Even sites occupied, alternating flux (odd links -1, even links +1).
    TrueVacuum,
}

/// The right-pointing metastable configuration.
pub fn false_vacuum_config(lattice: &LatticeSpec) -> ChainConfig {
    let l = lattice.n_sites();
    let mut c = ChainConfig::new(lattice, 0, 0);
    for n in 1..=l {
        c = c.with_matter_bit(n, n % 2 == 1);
    }
    for j in 1..l {
        c = c.with_link_bit(j, true);
    }
    c
}

/// The symmetric vacuum configuration.
pub fn true_vacuum_config(lattice: &LatticeSpec) -> ChainConfig {
    let l = lattice.n_sites();
    let mut c = ChainConfig::new(lattice, 0, 0);
    for n in 1..=l {
        c = c.with_matter_bit(n, n % 2 == 0);
    }
    for j in 1..l {
        c = c.with_link_bit(j, j % 2 == 0);
    }
    c
}

/// The three odd-indexed and three even-indexed sites closest to the chain
/// center (lower index wins ties); same rule for links. For L = 12 this
/// selects sites {5,7,9} / {4,6,8} and links {3,5,7} / {4,6,8}.
pub fn central_bulk_sites(l: usize) -> (Vec<usize>, Vec<usize>) {
    let center = (l as f64 + 1.0) / 2.0;
    (
        pick_central(1..=l, |n| n % 2 == 1, center),
        pick_central(1..=l, |n| n % 2 == 0, center),
    )
}

pub fn central_bulk_links(l: usize) -> (Vec<usize>, Vec<usize>) {
    // Link j sits at position j + 1/2.
    let center = (l as f64 + 1.0) / 2.0 - 0.5;
    (
        pick_central(1..l, |j| j % 2 == 1, center),
        pick_central(1..l, |j| j % 2 == 0, center),
    )
}

fn pick_central(
    range: impl Iterator<Item = usize>,
    keep: impl Fn(usize) -> bool,
    center: f64,
) -> Vec<usize> {
    let mut candidates: Vec<usize> = range.filter(|&k| keep(k)).collect();
    candidates.sort_by(|&a, &b| {
        let da = (a as f64 - center).abs();
        let db = (b as f64 - center).abs();
        da.partial_cmp(&db).unwrap().then(a.cmp(&b))
    });
    candidates.truncate(3);
    candidates.sort_unstable();
    candidates
}

/// Bulk-averaged observables (N over odd/even sites, E over odd/even links).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BulkObservables {
    pub n_odd: f64,
    pub n_even: f64,
    pub e_odd: f64,
    pub e_even: f64,
}

/// Time series of bulk observables plus the coupling-only ground-state
/// reference values, all in units where J sets the scale (times are Jt/ħ).
#[derive(Debug, Clone, Serialize)]
pub struct VacuumDecaySeries {
    pub times: Vec<f64>,
    pub n_odd: Vec<f64>,
    pub n_even: Vec<f64>,
    pub e_odd: Vec<f64>,
    pub e_even: Vec<f64>,
    /// Observables of the ground state of the J-only Hamiltonian.
    pub ground_reference: BulkObservables,
    pub sector_dim: usize,
    pub bulk_sites_odd: Vec<usize>,
    pub bulk_sites_even: Vec<usize>,
    pub bulk_links_odd: Vec<usize>,
    pub bulk_links_even: Vec<usize>,
}

fn bulk_of_state(
    sector: &GaugeSector,
    psi: &StateVector,
    sites: (&[usize], &[usize]),
    links: (&[usize], &[usize]),
) -> Result<BulkObservables, QlmError> {
    let avg_sites = |set: &[usize]| -> Result<f64, QlmError> {
        let mut acc = 0.0;
        for &n in set {
            acc += particle_number(sector, psi, n)?;
        }
        Ok(acc / set.len() as f64)
    };
    let avg_links = |set: &[usize]| -> Result<f64, QlmError> {
        let mut acc = 0.0;
        for &j in set {
            acc += electric_field(sector, psi, j)?;
        }
        Ok(acc / set.len() as f64)
    };
    Ok(BulkObservables {
        n_odd: avg_sites(sites.0)?,
        n_even: avg_sites(sites.1)?,
        e_odd: avg_links(links.0)?,
        e_even: avg_links(links.1)?,
    })
}

/// Quench experiment: prepare a product configuration, evolve it under the
/// sector Hamiltonian with the given mu/J (J = 1 sets the units), and record
/// bulk-averaged particle number and electric field on a uniform time grid
/// over [0, t_max] (in Jt/ħ).
pub fn false_vacuum_experiment(
    l: usize,
    mu_over_j: f64,
    t_max: f64,
    start: VacuumStart,
    n_samples: usize,
) -> Result<VacuumDecaySeries, QlmError> {
    if l % 2 != 0 || l < 4 || l > 14 {
        return Err(QlmError::UnsupportedLattice {
            n_sites: l,
            reason: "quench experiments support even L between 4 and 14".into(),
        });
    }
    assert!(n_samples >= 2, "need at least two samples");
    let lattice = LatticeSpec::new(l)?;
    let sector = enumerate_gauge_sector(&lattice)?;
    let start_config = match start {
        VacuumStart::FalseVacuumRight => false_vacuum_config(&lattice),
        VacuumStart::TrueVacuum => true_vacuum_config(&lattice),
    };
    for n in 1..=l {
        debug_assert_eq!(gauss_eigenvalue(&lattice, &start_config, n)?, 0.0);
    }
    let start_index = sector
        .index_of(&start_config)
        .expect("vacuum configurations satisfy Gauss's law");

    let params = QlmParams::new(mu_over_j, 1.0);
    let h = build_qlm_hamiltonian(&sector, &params);

    let (sites_odd, sites_even) = central_bulk_sites(l);
    let (links_odd, links_even) = central_bulk_links(l);

    // Reference: ground state of the coupling-only Hamiltonian.
    let h_gs = build_qlm_hamiltonian(&sector, &QlmParams::new(0.0, 1.0));
    let gs = eigh(&h_gs)?;
    let gs_vec = StateVector::new(
        (0..sector.dim()).map(|i| gs.eigenvectors.get(i, 0)).collect(),
        sector.basis_tag(),
    );
    let ground_reference = bulk_of_state(
        &sector,
        &gs_vec,
        (&sites_odd, &sites_even),
        (&links_odd, &links_even),
    )?;

    let times: Vec<f64> = (0..n_samples)
        .map(|k| t_max * k as f64 / (n_samples - 1) as f64)
        .collect();
    let psi0 = StateVector::basis_state(sector.dim(), start_index, sector.basis_tag());
    let states = evolve(&sector, &h, &psi0, &times)?;

    let mut series = VacuumDecaySeries {
        times,
        n_odd: Vec::with_capacity(n_samples),
        n_even: Vec::with_capacity(n_samples),
        e_odd: Vec::with_capacity(n_samples),
        e_even: Vec::with_capacity(n_samples),
        ground_reference,
        sector_dim: sector.dim(),
        bulk_sites_odd: sites_odd.clone(),
        bulk_sites_even: sites_even.clone(),
        bulk_links_odd: links_odd.clone(),
        bulk_links_even: links_even.clone(),
    };
    for psi in &states {
        let b = bulk_of_state(
            &sector,
            psi,
            (&sites_odd, &sites_even),
            (&links_odd, &links_even),
        )?;
        series.n_odd.push(b.n_odd);
        series.n_even.push(b.n_even);
        series.e_odd.push(b.e_odd);
        series.e_even.push(b.e_even);
    }
    Ok(series)
}
