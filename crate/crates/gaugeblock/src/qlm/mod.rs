//! The ideal model: a U(1) spin-1/2 quantum link chain with staggered
//! matter on an open boundary.
//!
//! Matter sites carry qubits (bit 1 means the site is occupied, sigma^z
//! eigenvalue -1) and links carry gauge qubits (bit 1 means the field points
//! right, tau^z eigenvalue -1). The physical sector is the null space of the
//! local generators
//!
//! ```text
//! G_n = 1/2 [sigma^z_n - (-1)^n] - 1/2 (tau^z_{n,n+1} - tau^z_{n-1,n})
//! ```
//!
//! with the two links missing at the open ends replaced by fixed background
//! fields b_L, b_R (default -1, which reproduces both the two-site sector
//! {|001>, |110>} and the four-site five-state sector).
//!
//! The Hamiltonian is the staggered-mass term plus the three-body
//! charge-hop/link-flip coupling,
//!
//! ```text
//! H = mu/2 sum_n (-1)^n sigma^z_n
//!     - J sum_n (sigma^+_n tau^+_{n,n+1} sigma^-_{n+1} + h.c.)
//! ```
//!
//! restricted to the gauge sector, where it stays by construction.

mod hamiltonian;
mod lattice;
mod observables;
mod sector;
mod symmetry;
mod vacuum;

pub use hamiltonian::{build_qlm_hamiltonian, evolve, QlmParams};
pub use lattice::{ChainConfig, LatticeSpec};
pub use observables::{
    electric_field, electric_field_config, gauss_expectation, particle_number,
    particle_number_config,
};
pub use sector::{enumerate_gauge_sector, gauss_eigenvalue, GaugeSector};
pub use symmetry::{symmetry_transform, SymmetryKind};
pub use vacuum::{
    central_bulk_links, central_bulk_sites, false_vacuum_config, false_vacuum_experiment,
    true_vacuum_config, BulkObservables, VacuumDecaySeries, VacuumStart,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QlmError {
    #[error("site index {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("link index {link} out of range for {n_links} links")]
    LinkOutOfRange { link: usize, n_links: usize },
    #[error("lattice size {n_sites} unsupported: {reason}")]
    UnsupportedLattice { n_sites: usize, reason: String },
    #[error("state is tagged '{found}' but the sector basis is '{expected}'")]
    BasisMismatch { expected: String, found: String },
    #[error(transparent)]
    Num(#[from] crate::numkit::NumError),
}
