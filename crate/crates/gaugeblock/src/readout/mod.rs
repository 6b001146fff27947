//! Dispersive readout through a hanger-coupled resonator, modeled with the
//! factorized cavity-Bloch equations.
//!
//! Five qubit states participate: |001>, |110>, |100>, |010>, |000>. The
//! resonator sees each as a dispersive pull 2 chi_s; the three-body drive
//! Omega(t) connects |110> and |001>; qubit decay and dephasing act with
//! directed rates. The tracked moments are the five populations, the
//! |110><001| coherence, the photon number, the field <a>, the five
//! state-field correlators <|s><s| a>, and the two coherence-field
//! correlators — fifteen coupled equations, truncated by mean-field
//! factorization of higher moments (e.g. <a†a a sigma> -> <a†a><a sigma>).
//!
//! Frames: the qubit coherence rotates at the drive frequency omega_p, the
//! field at the measurement frequency omega_m, so the equations carry only
//! detunings. The state energies enter solely through
//! omega_110 - omega_001 - omega_p, i.e. minus the drive detuning, plus the
//! photon-number Stark term.
//!
//! The transmitted signal in hanger mode is eps_m(t) - (i/2) kappa_ext <a>.

mod bloch;
mod diagnostics;
mod experiment;
mod fit;
mod params;
mod signal;

pub use bloch::{
    cavity_bloch_rhs, integrate_cavity_bloch, integrate_cavity_bloch_from, CavityBlochState,
    CavityBlochTrajectory,
};
pub use diagnostics::{gauge_diagnostics, GaugeDiagnostics};
pub use experiment::{experiment_trace, initial_mixture, ExperimentSpec, Trace};
pub use fit::{
    default_readout_frequencies, fit_populations, FitConfig, FitProblem, FittedParams,
    MeasuredTrace, PopulationFit, RescaleTarget,
};
pub use params::{DecayRates, PulseSchedule, QState, ReadoutParams};
pub use signal::output_signal;

use thiserror::Error;


#[derive(Debug, Error)]
pub enum ReadoutError {
    #[error("invalid readout parameters: {0}")]
    InvalidParams(String),
    #[error(
        "probability conservation violated at t = {t:.3} ns: |sum P - 1| = {defect:.3e} (limit {limit:.3e})"
    )]
    ProbabilityLeak { t: f64, defect: f64, limit: f64 },
    #[error("fit residual {residual:.3e} above threshold {threshold:.3e}")]
    ResidualTooLarge { residual: f64, threshold: f64 },
    #[error("fitted parameter '{name}' ended on a bound")]
    ParameterAtBound { name: &'static str },
    #[error(transparent)]
    Num(#[from] crate::numkit::NumError),
}
