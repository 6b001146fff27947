//! Readout-layer parameters: the five-state manifold, resonator constants,
//! decay rates, and pulse scheduling.

use serde::Serialize;

use super::ReadoutError;
use crate::numkit::C64;

/// The five qubit states the readout model tracks, in the order used for
/// population arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QState {
    S001 = 0,
    S110 = 1,
    S100 = 2,
    S010 = 3,
    S000 = 4,
}

impl QState {
    pub const ALL: [QState; 5] = [
        QState::S001,
        QState::S110,
        QState::S100,
        QState::S010,
        QState::S000,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            QState::S001 => "001",
            QState::S110 => "110",
            QState::S100 => "100",
            QState::S010 => "010",
            QState::S000 => "000",
        }
    }

    /// sigma^z of transmon 1 (matter site 1): +1 unless the first qubit is
    /// excited.
    pub fn sigma_z_site1(self) -> f64 {
        match self {
            QState::S110 | QState::S100 => -1.0,
            _ => 1.0,
        }
    }

    /// tau^z of transmon 2 (the gauge link).
    pub fn tau_z_link(self) -> f64 {
        match self {
            QState::S110 | QState::S010 => -1.0,
            _ => 1.0,
        }
    }

    /// sigma^z of transmon 3 (matter site 2).
    pub fn sigma_z_site2(self) -> f64 {
        match self {
            QState::S001 => -1.0,
            _ => 1.0,
        }
    }
}

/// Directed qubit decay rates (1/ns). The five forward channels are the
/// ones the experiments resolve; the reversed (thermal) partners default to
/// zero but participate in the full equations when set.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct DecayRates {
    pub g110_to_100: f64,
    pub g110_to_010: f64,
    pub g100_to_000: f64,
    pub g010_to_000: f64,
    pub g001_to_000: f64,
    pub g100_to_110: f64,
    pub g010_to_110: f64,
    pub g000_to_100: f64,
    pub g000_to_010: f64,
    pub g000_to_001: f64,
}

impl DecayRates {
    pub fn forward(
        g110_to_100: f64,
        g110_to_010: f64,
        g100_to_000: f64,
        g010_to_000: f64,
        g001_to_000: f64,
    ) -> Self {
        DecayRates {
            g110_to_100,
            g110_to_010,
            g100_to_000,
            g010_to_000,
            g001_to_000,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ReadoutError> {
        let all = [
            self.g110_to_100,
            self.g110_to_010,
            self.g100_to_000,
            self.g010_to_000,
            self.g001_to_000,
            self.g100_to_110,
            self.g010_to_110,
            self.g000_to_100,
            self.g000_to_010,
            self.g000_to_001,
        ];
        if all.iter().any(|&g| g < 0.0) {
            return Err(ReadoutError::InvalidParams("negative decay rate".into()));
        }
        // Thermal occupation below 1/2: reversed rates never exceed forward.
        let pairs = [
            (self.g100_to_110, self.g110_to_100),
            (self.g010_to_110, self.g110_to_010),
            (self.g000_to_100, self.g100_to_000),
            (self.g000_to_010, self.g010_to_000),
            (self.g000_to_001, self.g001_to_000),
        ];
        if pairs.iter().any(|&(rev, fwd)| rev > fwd) {
            return Err(ReadoutError::InvalidParams(
                "reversed (thermal) rate exceeds its forward partner".into(),
            ));
        }
        Ok(())
    }
}

/// One resonator plus the five-state qubit manifold it reads out.
/// Frequencies and rates are angular (rad/ns) and 1/ns.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReadoutParams {
    /// Bare resonator frequency omega_r.
    pub omega_r: f64,
    /// Resonator self-Kerr alpha.
    pub self_kerr: f64,
    pub kappa_int: f64,
    pub kappa_ext: f64,
    /// Dispersive pull chi_s per state; the resonator sits at
    /// omega_r + 2 chi_s when the qubits are in state s.
    pub chi: [f64; 5],
    /// Qubit-state energies omega_s; only omega_110 - omega_001 enters.
    pub omega_state: [f64; 5],
    pub decay: DecayRates,
    /// Pure dephasing of the |110><001| coherence.
    pub gamma_phi: f64,
}

impl ReadoutParams {
    pub fn kappa(&self) -> f64 {
        self.kappa_int + self.kappa_ext
    }

    pub fn chi_of(&self, s: QState) -> f64 {
        self.chi[s.index()]
    }

    pub fn validate(&self) -> Result<(), ReadoutError> {
        if self.kappa_int < 0.0 || self.kappa_ext < 0.0 {
            return Err(ReadoutError::InvalidParams("negative loss rate".into()));
        }
        if self.gamma_phi < 0.0 {
            return Err(ReadoutError::InvalidParams("negative dephasing".into()));
        }
        self.decay.validate()
    }

    /// Readout frequency aimed at state s: omega_r + 2 chi_s.
    pub fn shifted_frequency(&self, s: QState) -> f64 {
        self.omega_r + 2.0 * self.chi_of(s)
    }
}

/// Pulse timing: the three-body tone Omega at omega_p over [0, t_evolve),
/// then the readout tone eps_m at omega_m over [t_evolve, t_evolve +
/// t_readout]. The pulses never overlap by construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PulseSchedule {
    pub omega_amp: C64,
    pub omega_p: f64,
    pub t_evolve: f64,
    pub eps_amp: C64,
    pub omega_m: f64,
    pub t_readout: f64,
}

impl PulseSchedule {
    pub fn omega(&self, t: f64) -> C64 {
        if t >= 0.0 && t < self.t_evolve {
            self.omega_amp
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn eps_m(&self, t: f64) -> C64 {
        if t >= self.t_evolve && t <= self.t_evolve + self.t_readout {
            self.eps_amp
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn t_end(&self) -> f64 {
        self.t_evolve + self.t_readout
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pulses_do_not_overlap() {
        let s = PulseSchedule {
            omega_amp: C64::new(0.01, 0.0),
            omega_p: 40.0,
            t_evolve: 100.0,
            eps_amp: C64::new(0.002, 0.0),
            omega_m: 47.0,
            t_readout: 500.0,
        };
        for t in [0.0, 50.0, 99.9, 100.0, 300.0, 600.0, 601.0] {
            assert!(!(s.omega(t) != C64::new(0.0, 0.0) && s.eps_m(t) != C64::new(0.0, 0.0)));
        }
        assert_eq!(s.omega(50.0), C64::new(0.01, 0.0));
        assert_eq!(s.eps_m(300.0), C64::new(0.002, 0.0));
    }

    #[test]
    fn thermal_rates_above_forward_are_rejected() {
        let mut d = DecayRates::forward(1e-3, 1e-3, 1e-3, 1e-3, 1e-3);
        d.g000_to_001 = 2e-3;
        assert!(d.validate().is_err());
    }

    #[test]
    fn gauge_eigenvalue_bookkeeping() {
        // The link-model mapping: qubit 1 = site 1, qubit 2 = link,
        // qubit 3 = site 2.
        assert_eq!(QState::S100.sigma_z_site1(), -1.0);
        assert_eq!(QState::S100.tau_z_link(), 1.0);
        assert_eq!(QState::S001.sigma_z_site2(), -1.0);
        assert_eq!(QState::S110.tau_z_link(), -1.0);
    }
}
