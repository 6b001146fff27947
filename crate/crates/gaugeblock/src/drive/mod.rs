//! Parametric-drive dynamics.
//!
//! An AC flux tone alpha_p(t) = A_p cos(omega_p t + phi) through the SQUID
//! adds
//!
//! ```text
//! H'(t) = -E_J (cos(pi alpha_p/Phi_0) - 1) cos(phi_2)
//!         - dE_J sin(pi alpha_p/Phi_0) sin(phi_2)
//! ```
//!
//! on top of the static circuit, exact in the drive amplitude. Driving near
//! the (001) -> (110) resonance activates the three-body exchange; this
//! module integrates the driven Schrödinger equation in the dressed
//! eigenbasis (no rotating-wave approximation), produces Rabi chevrons,
//! extracts the interaction strength J and resonance omega_3q from them,
//! and computes both perturbative predictions: first order in A_p for J and
//! the second-order resonance shift (static dispersion plus the
//! Bloch-Siegert-type sum over virtual states).

mod chevron;
mod evolve;
mod perturbation;
mod pulse;

pub use chevron::{
    chevron_scan, default_chevron_axes, extract_j_and_center, two_level_population, ChevronGrid,
    ExtractedResonance,
};
pub use evolve::{evolve_driven, DriveDynamicsOptions, DrivenPopulations};
pub use perturbation::{perturbative_j, perturbative_shift, ResonanceShift};
pub use pulse::{drive_coefficients, drive_hamiltonian, DriveSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DriveError {
    #[error("invalid drive: {0}")]
    InvalidDrive(String),
    #[error("dressed level {index} for |{label}> is outside the {levels}-level dynamics subspace")]
    SubspaceTooSmall {
        label: String,
        index: usize,
        levels: usize,
    },
    #[error("chevron fit failed: {0}")]
    FitFailed(String),
    #[error(
        "near-degenerate denominator in the second-order shift: level {level} at {denominator:.3e} rad/ns"
    )]
    NearDegenerate { level: usize, denominator: f64 },
    #[error(transparent)]
    Circuit(#[from] crate::circuit::CircuitError),
    #[error(transparent)]
    Num(#[from] crate::numkit::NumError),
}
