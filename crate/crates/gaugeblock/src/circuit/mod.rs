//! The device layer: three pairwise capacitively coupled transmons, the
//! middle one a flux-tunable asymmetric SQUID.
//!
//! The circuit Hamiltonian is
//!
//! ```text
//! H = sum_jk 4 E_C,jk N_j N_k - E_J1 cos(phi_1) - E_J3 cos(phi_3)
//!     - E_J cos(pi Phi_ext/Phi_0) cos(phi_2)
//!     - dE_J sin(pi Phi_ext/Phi_0) sin(phi_2)
//! ```
//!
//! with E_J = E_JL + E_JR and dE_J = E_JL - E_JR. Everything is built in the
//! charge basis, where N_j is diagonal and cos/sin of the phase are exact
//! shift operators — no weak-anharmonicity expansion and no rotating-wave
//! approximation. Each transmon is diagonalized locally first; the coupled
//! Hamiltonian is then assembled in the product of the kept local
//! eigenstates and diagonalized exactly. Dressed eigenstates are labeled by
//! their dominant bare product component, which must carry more than half
//! the weight or labeling fails loudly.

mod calibrate;
mod model;
mod params;
mod transmon;

pub use calibrate::{
    calibrate_ej, calibrate_to_table, perturbative_couplings, reference_device,
    PerturbativeCouplings, TableFixture,
};
pub use model::{
    build_static_hamiltonian, dressed_circuit, label_string, spectrum_vs_flux, DressedCircuit,
    FluxScanPoint, Label, TRACKED_LABELS,
};
pub use params::{charging_matrix_from_capacitances, CircuitParams, TransmonBasis};
pub use transmon::{diagonalize_transmon, LocalTransmon};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("invalid circuit parameters: {0}")]
    InvalidParams(String),
    #[error("charge cutoff too small: ground-state edge leakage {leakage:.3e} on transmon {transmon} exceeds 1e-8")]
    CutoffTooSmall { transmon: usize, leakage: f64 },
    #[error("Maxwell capacitance matrix is singular")]
    SingularCapacitanceMatrix,
    #[error(
        "labeling ambiguity for |{label}>: best overlap^2 {best:.3} at eigenstate {index}, runner-up {runner_up:.3} at {runner_index}"
    )]
    LabelAmbiguous {
        label: String,
        index: usize,
        best: f64,
        runner_index: usize,
        runner_up: f64,
    },
    #[error("calibration did not converge after {iterations} iterations (worst residual {residual_mhz:.4} MHz)")]
    CalibrationDiverged { iterations: usize, residual_mhz: f64 },
    #[error(transparent)]
    Num(#[from] crate::numkit::NumError),
}
