//! Desk-scale simulation of a minimal U(1) quantum link model and of the
//! superconducting circuit that realizes it.
//!
//! The crate is organized in layers:
//!
//! * [`numkit`] — complex linear algebra, Hermitian eigensolving, spectral
//!   propagators, an adaptive Runge-Kutta integrator, and a small
//!   Levenberg-Marquardt fitter. Everything above is built on this.
//! * [`qlm`] — the ideal gauge theory: a spin-1/2 quantum link chain with
//!   staggered matter, Gauss-law sector enumeration, exact time evolution,
//!   discrete symmetries, and false-vacuum-decay experiments.
//! * [`circuit`] — the device: three capacitively coupled transmons (the
//!   middle one an asymmetric SQUID) diagonalized exactly in the charge
//!   basis, with dressed-state labeling, calibration to measured
//!   frequencies, and flux spectroscopy.
//! * [`drive`] — parametric flux modulation of the SQUID: brute-force driven
//!   dynamics in the dressed basis, Rabi chevrons, extraction of the
//!   three-body coupling and resonance, and first/second-order perturbative
//!   predictions for both.
//! * [`readout`] — dispersive readout through a hanger-coupled resonator:
//!   the factorized cavity-Bloch equations for five qubit states, synthetic
//!   transmitted signals, population fitting, and gauge-law diagnostics.
//! * [`chain`] — the seven-transmon chain mapped onto a four-site link
//!   model: gauge states and energies, three-body resonance frequencies,
//!   and the detuning/mass dictionary.
//!
//! Internally all frequencies are angular (rad/ns) and ħ = 1; helpers in
//! [`units`] convert to and from the GHz/MHz values used at the interfaces.

pub mod chain;
pub mod circuit;
pub mod drive;
pub mod numkit;
pub mod qlm;
pub mod readout;
pub mod units;

/// Book chapters, compiled as doctests so the guide cannot drift from the
/// library. Each module's documentation is one chapter of `book/src/`.
pub mod guide {
    #[doc = include_str!("../../../book/src/gauge-sectors.md")]
    pub mod gauge_sectors {}
    #[doc = include_str!("../../../book/src/link-model-dynamics.md")]
    pub mod link_model_dynamics {}
    #[doc = include_str!("../../../book/src/circuit-model.md")]
    pub mod circuit_model {}
    #[doc = include_str!("../../../book/src/parametric-drive.md")]
    pub mod parametric_drive {}
    #[doc = include_str!("../../../book/src/dispersive-readout.md")]
    pub mod dispersive_readout {}
    #[doc = include_str!("../../../book/src/chain-mapping.md")]
    pub mod chain_mapping {}
}
