//! The cavity-Bloch equations and their integration.

use super::{PulseSchedule, QState, ReadoutError, ReadoutParams};
use crate::numkit::{integrate_ode, C64, OdeOptions};

/// All fifteen tracked moments. Populations and the photon number are real;
/// the equations preserve that exactly (conjugate pairs are combined before
/// multiplying by i), so they are stored as such.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityBlochState {
    /// Populations <|s><s|> in [`QState`] order.
    pub populations: [f64; 5],
    /// <|110><001|>.
    pub coherence: C64,
    /// <a† a>.
    pub photon_number: f64,
    /// <a>.
    pub field: C64,
    /// <|s><s| a> in [`QState`] order.
    pub state_field: [C64; 5],
    /// <|110><001| a>.
    pub coherence_field_up: C64,
    /// <|001><110| a>.
    pub coherence_field_down: C64,
}

impl CavityBlochState {
    /// Qubits in a statistical mixture, resonator in vacuum.
    pub fn mixture(populations: [f64; 5]) -> Self {
        CavityBlochState {
            populations,
            coherence: C64::new(0.0, 0.0),
            photon_number: 0.0,
            field: C64::new(0.0, 0.0),
            state_field: [C64::new(0.0, 0.0); 5],
            coherence_field_up: C64::new(0.0, 0.0),
            coherence_field_down: C64::new(0.0, 0.0),
        }
    }

    pub fn population(&self, s: QState) -> f64 {
        self.populations[s.index()]
    }

    pub fn total_population(&self) -> f64 {
        self.populations.iter().sum()
    }

    fn pack(&self) -> [C64; 15] {
        let mut y = [C64::new(0.0, 0.0); 15];
        for k in 0..5 {
            y[k] = C64::new(self.populations[k], 0.0);
        }
        y[5] = self.coherence;
        y[6] = C64::new(self.photon_number, 0.0);
        y[7] = self.field;
        for k in 0..5 {
            y[8 + k] = self.state_field[k];
        }
        y[13] = self.coherence_field_up;
        y[14] = self.coherence_field_down;
        y
    }

    fn unpack(y: &[C64]) -> Self {
        CavityBlochState {
            populations: [y[0].re, y[1].re, y[2].re, y[3].re, y[4].re],
            coherence: y[5],
            photon_number: y[6].re,
            field: y[7],
            state_field: [y[8], y[9], y[10], y[11], y[12]],
            coherence_field_up: y[13],
            coherence_field_down: y[14],
        }
    }
}

#[derive(Debug, Clone)]
pub struct CavityBlochTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CavityBlochState>,
}

impl CavityBlochTrajectory {
    pub fn populations_of(&self, s: QState) -> Vec<f64> {
        self.states.iter().map(|y| y.population(s)).collect()
    }
}

// State vector layout.
const IP: usize = 0; // ..5 populations
const IS: usize = 5;
const IN: usize = 6;
const IA: usize = 7;
const IAS: usize = 8; // ..13 state-field correlators
const IB: usize = 13;
const IC: usize = 14;

/// Right-hand side of the full cavity-Bloch system in the rotating frames
/// (coherence at omega_p, field at omega_m).
pub fn cavity_bloch_rhs(
    rp: &ReadoutParams,
    sched: &PulseSchedule,
    t: f64,
    y: &[C64],
    dy: &mut [C64],
) {
    let omega = sched.omega(t);
    let eps = sched.eps_m(t);
    let kappa = rp.kappa();
    let d = &rp.decay;
    let i001 = QState::S001.index();
    let i110 = QState::S110.index();
    let i100 = QState::S100.index();
    let i010 = QState::S010.index();
    let i000 = QState::S000.index();

    let p = |k: usize| y[IP + k];
    let s_coh = y[IS];
    let n_ph = y[IN].re;
    let a = y[IA];
    let asf = |k: usize| y[IAS + k];
    let b = y[IB];
    let c = y[IC];

    // i (Omega S - Omega* S*) is exactly real: populations stay real.
    let z = omega * s_coh;
    let pump = C64::new(-2.0 * z.im, 0.0);

    let gamma_110_out = d.g110_to_100 + d.g110_to_010;
    let gamma_100_out = d.g100_to_000 + d.g100_to_110;
    let gamma_010_out = d.g010_to_000 + d.g010_to_110;
    let gamma_000_out = d.g000_to_100 + d.g000_to_010 + d.g000_to_001;
    let gamma_coh = 0.5 * (d.g110_to_100 + d.g110_to_010 + d.g001_to_000) + rp.gamma_phi;

    dy[IP + i001] = -pump - p(i001) * d.g001_to_000 + p(i000) * d.g000_to_001;
    dy[IP + i110] = pump - p(i110) * gamma_110_out
        + p(i100) * d.g100_to_110
        + p(i010) * d.g010_to_110;
    dy[IP + i100] =
        -p(i100) * gamma_100_out + p(i110) * d.g110_to_100 + p(i000) * d.g000_to_100;
    dy[IP + i010] =
        -p(i010) * gamma_010_out + p(i110) * d.g110_to_010 + p(i000) * d.g000_to_010;
    dy[IP + i000] = p(i100) * d.g100_to_000 + p(i010) * d.g010_to_000 + p(i001) * d.g001_to_000
        - p(i000) * gamma_000_out;

    // Coherence: the bracket is (omega_110 - omega_001 - omega_p) plus the
    // photon-number Stark term 2 (chi_110 - chi_001) <a†a>.
    let dchi = rp.chi[i110] - rp.chi[i001];
    let qubit_rot = rp.omega_state[i110] - rp.omega_state[i001] - sched.omega_p + 2.0 * dchi * n_ph;
    dy[IS] = C64::new(0.0, qubit_rot) * s_coh + C64::new(0.0, 1.0) * omega.conj() * (p(i001) - p(i110))
        - s_coh * gamma_coh;

    // Photon number: -i eps <a>* + i eps* <a> - kappa n, exactly real.
    let w = eps * a.conj();
    dy[IN] = C64::new(2.0 * w.im - kappa * n_ph, 0.0);

    // Field: detuning pulled by the Kerr term and the populations.
    let delta_r = rp.omega_r - sched.omega_m + 2.0 * rp.self_kerr * n_ph;
    let mut chi_pull = 0.0;
    for k in 0..5 {
        chi_pull += 2.0 * rp.chi[k] * p(k).re;
    }
    dy[IA] = C64::new(-0.5 * kappa, -(delta_r + chi_pull)) * a - C64::new(0.0, 1.0) * eps;

    // State-field correlators.
    let coh_pump_up = C64::new(0.0, 1.0) * (omega * b - omega.conj() * c);
    for (k, gamma_out) in [
        (i001, d.g001_to_000),
        (i110, gamma_110_out),
        (i100, gamma_100_out),
        (i010, gamma_010_out),
        (i000, gamma_000_out),
    ] {
        let rot = C64::new(
            -(gamma_out + 0.5 * kappa),
            -(delta_r + 2.0 * rp.chi[k]),
        );
        dy[IAS + k] = rot * asf(k) - C64::new(0.0, 1.0) * eps * p(k);
    }
    // Drive exchange and rate feeds between correlators.
    dy[IAS + i001] += -coh_pump_up + asf(i000) * d.g000_to_001;
    dy[IAS + i110] += coh_pump_up + asf(i100) * d.g100_to_110 + asf(i010) * d.g010_to_110;
    dy[IAS + i100] += asf(i110) * d.g110_to_100 + asf(i000) * d.g000_to_100;
    dy[IAS + i010] += asf(i110) * d.g110_to_010 + asf(i000) * d.g000_to_010;
    dy[IAS + i000] += asf(i100) * d.g100_to_000
        + asf(i010) * d.g010_to_000
        + asf(i001) * d.g001_to_000;

    // Coherence-field correlators. The dispersive coefficient on the field
    // side is 2 chi_s of the ket/bra state the field rides along with.
    dy[IB] = C64::new(
        -(gamma_coh + 0.5 * kappa),
        qubit_rot - (delta_r + 2.0 * rp.chi[i001]),
    ) * b
        + C64::new(0.0, 1.0) * omega.conj() * (asf(i001) - asf(i110))
        - C64::new(0.0, 1.0) * eps * s_coh;
    dy[IC] = C64::new(
        -(gamma_coh + 0.5 * kappa),
        -qubit_rot - (delta_r + 2.0 * rp.chi[i110]),
    ) * c
        - C64::new(0.0, 1.0) * omega * (asf(i001) - asf(i110))
        - C64::new(0.0, 1.0) * eps * s_coh.conj();
}

/// Integrate the cavity-Bloch system over [0, max(t_grid)] and sample on
/// `t_grid`. Aborts with diagnostics if total probability drifts beyond ten
/// times the conservation budget max(1e-6, 100 rtol).
pub fn integrate_cavity_bloch(
    rp: &ReadoutParams,
    sched: &PulseSchedule,
    y0: &CavityBlochState,
    t_grid: &[f64],
    opts: &OdeOptions,
) -> Result<CavityBlochTrajectory, ReadoutError> {
    integrate_cavity_bloch_from(rp, sched, y0, 0.0, t_grid, opts)
}

/// Same, but starting from a known state at an arbitrary time (used to
/// resume at the readout window without re-integrating the drive window).
pub fn integrate_cavity_bloch_from(
    rp: &ReadoutParams,
    sched: &PulseSchedule,
    y0: &CavityBlochState,
    t_start: f64,
    t_grid: &[f64],
    opts: &OdeOptions,
) -> Result<CavityBlochTrajectory, ReadoutError> {
    rp.validate()?;
    let rp = *rp;
    let sched = *sched;
    let t_end = *t_grid.last().expect("empty time grid");
    let traj = integrate_ode(
        move |t, y, dy| cavity_bloch_rhs(&rp, &sched, t, y, dy),
        &y0.pack(),
        (t_start, t_end.max(t_start + 1e-9)),
        t_grid,
        opts,
    )?;
    let budget = 10.0 * (1e-6f64).max(100.0 * opts.rtol);
    let mut states = Vec::with_capacity(traj.states.len());
    for (t, raw) in traj.times.iter().zip(traj.states.iter()) {
        let state = CavityBlochState::unpack(raw);
        let defect = (state.total_population() - 1.0).abs();
        if defect > budget {
            return Err(ReadoutError::ProbabilityLeak {
                t: *t,
                defect,
                limit: budget,
            });
        }
        states.push(state);
    }
    Ok(CavityBlochTrajectory {
        times: traj.times.clone(),
        states,
    })
}
