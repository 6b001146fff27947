//! The full synthetic measurement pipeline: thermal preparation, pi pulse,
//! three-body evolution, readout pulse, transmitted signal.

use serde::Serialize;

use super::{
    integrate_cavity_bloch, output_signal, CavityBlochState, PulseSchedule, QState, ReadoutError,
    ReadoutParams,
};
use crate::numkit::{C64, OdeOptions};

/// One synthetic experiment: ready-to-integrate schedule plus the initial
/// thermal occupations of the single-photon states (the rest of the weight
/// starts in the ground state before the pi pulse).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExperimentSpec {
    /// Three-body tone: Omega = J/ħ (rad/ns), complex to carry its phase.
    pub omega_amp: C64,
    /// Drive frequency omega_p (rad/ns).
    pub omega_p: f64,
    pub t_evolve: f64,
    pub eps_amp: C64,
    pub omega_m: f64,
    pub t_readout: f64,
    /// Thermal populations of (100, 010, 001) before the pi pulse.
    pub thermal: [f64; 3],
    /// Measurement-window sample spacing (ns).
    pub sample_dt: f64,
}

impl ExperimentSpec {
    /// Resonant drive derived from an extracted (J, omega_3q) pair.
    pub fn from_extraction(j: f64, omega_3q: f64) -> ExperimentSpecBuilder {
        ExperimentSpecBuilder {
            omega_amp: C64::new(j, 0.0),
            omega_p: omega_3q,
        }
    }

    pub fn schedule(&self) -> PulseSchedule {
        PulseSchedule {
            omega_amp: self.omega_amp,
            omega_p: self.omega_p,
            t_evolve: self.t_evolve,
            eps_amp: self.eps_amp,
            omega_m: self.omega_m,
            t_readout: self.t_readout,
        }
    }
}

pub struct ExperimentSpecBuilder {
    omega_amp: C64,
    omega_p: f64,
}

impl ExperimentSpecBuilder {
    pub fn readout(
        self,
        eps_amp: C64,
        omega_m: f64,
        t_evolve: f64,
        t_readout: f64,
        thermal: [f64; 3],
        sample_dt: f64,
    ) -> ExperimentSpec {
        ExperimentSpec {
            omega_amp: self.omega_amp,
            omega_p: self.omega_p,
            t_evolve,
            eps_amp,
            omega_m,
            t_readout,
            thermal,
            sample_dt,
        }
    }
}

/// Qubit state after preparation: an incoherent mixture of the ground and
/// single-photon states with the given thermal occupations, then an ideal
/// pi pulse on qubit 3 that swaps the 000 and 001 weights. The resonator
/// starts in vacuum.
pub fn initial_mixture(thermal: [f64; 3]) -> Result<CavityBlochState, ReadoutError> {
    let [p100, p010, p001] = thermal;
    let p000 = 1.0 - p100 - p010 - p001;
    if thermal.iter().any(|&p| p < 0.0) || p000 < 0.0 {
        return Err(ReadoutError::InvalidParams(
            "thermal populations must be non-negative and sum below 1".into(),
        ));
    }
    let mut populations = [0.0; 5];
    // pi pulse: 000 weight -> 001, 001 thermal weight -> 000.
    populations[QState::S001.index()] = p000;
    populations[QState::S000.index()] = p001;
    populations[QState::S100.index()] = p100;
    populations[QState::S010.index()] = p010;
    Ok(CavityBlochState::mixture(populations))
}

/// A transmitted-signal record over the measurement window.
#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    /// Absolute times (ns) of the samples, starting at t_evolve.
    pub times: Vec<f64>,
    pub signal: Vec<C64>,
    pub omega_m: f64,
    pub t_evolve: f64,
    /// State of the tracked moments at the start of the readout window.
    #[serde(skip)]
    pub at_readout_start: CavityBlochState,
}

/// Run the full pipeline and return the transmitted signal sampled over the
/// measurement window.
pub fn experiment_trace(
    rp: &ReadoutParams,
    spec: &ExperimentSpec,
    opts: &OdeOptions,
) -> Result<Trace, ReadoutError> {
    let y0 = initial_mixture(spec.thermal)?;
    let sched = spec.schedule();
    let n_samples = (spec.t_readout / spec.sample_dt).round() as usize;
    let mut grid: Vec<f64> = Vec::with_capacity(n_samples + 2);
    if spec.t_evolve > 0.0 {
        grid.push(spec.t_evolve);
    } else {
        grid.push(0.0);
    }
    for k in 1..=n_samples {
        grid.push(spec.t_evolve + k as f64 * spec.sample_dt);
    }
    let traj = integrate_cavity_bloch(rp, &sched, &y0, &grid, opts)?;
    let signal = output_signal(&traj, rp, &sched);
    Ok(Trace {
        times: traj.times.clone(),
        signal,
        omega_m: spec.omega_m,
        t_evolve: spec.t_evolve,
        at_readout_start: traj.states[0],
    })
}
