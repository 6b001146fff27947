//! The parametric flux pulse and the drive operator it generates.

use serde::Serialize;

use super::DriveError;
use crate::circuit::DressedCircuit;
use crate::numkit::{C64, ComplexMatrix};

/// A single parametric tone through the SQUID loop, rectangular over
/// [0, t_evolve] with an optional linear rise.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DriveSpec {
    /// Flux amplitude A_p in units of Phi_0; |A_p| < 1/2.
    pub amplitude: f64,
    /// Drive angular frequency omega_p (rad/ns).
    pub frequency: f64,
    /// Drive phase (rad).
    pub phase: f64,
    /// Pulse window length (ns).
    pub t_evolve: f64,
    /// Linear rise/fall time at the window edges (ns); 0 = hard rectangle.
    pub rise_time: f64,
}

impl DriveSpec {
    pub fn rectangular(amplitude: f64, frequency: f64, t_evolve: f64) -> Result<Self, DriveError> {
        let d = DriveSpec {
            amplitude,
            frequency,
            phase: 0.0,
            t_evolve,
            rise_time: 0.0,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), DriveError> {
        if !(0.0..0.5).contains(&self.amplitude) {
            return Err(DriveError::InvalidDrive(format!(
                "amplitude {} Phi_0 outside [0, 0.5)",
                self.amplitude
            )));
        }
        if self.frequency <= 0.0 {
            return Err(DriveError::InvalidDrive("frequency must be positive".into()));
        }
        if self.rise_time < 0.0 || 2.0 * self.rise_time > self.t_evolve {
            return Err(DriveError::InvalidDrive("bad rise time".into()));
        }
        Ok(())
    }

    /// Envelope in [0, 1].
    pub fn envelope(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.t_evolve {
            return 0.0;
        }
        if self.rise_time > 0.0 {
            if t < self.rise_time {
                return t / self.rise_time;
            }
            if t > self.t_evolve - self.rise_time {
                return (self.t_evolve - t) / self.rise_time;
            }
        }
        1.0
    }

    /// Instantaneous flux alpha_p(t) in units of Phi_0.
    pub fn flux(&self, t: f64) -> f64 {
        self.amplitude * self.envelope(t) * (self.frequency * t + self.phase).cos()
    }
}

/// Scalar coefficients (f_cos, f_sin) multiplying cos(phi_2) and sin(phi_2)
/// in the drive operator at time t, exact in the flux amplitude:
/// f_cos = -E_J (cos(pi alpha_p) - 1), f_sin = -dE_J sin(pi alpha_p).
pub fn drive_coefficients(
    ej_sum: f64,
    dej: f64,
    drive: &DriveSpec,
    t: f64,
) -> (f64, f64) {
    let x = std::f64::consts::PI * drive.flux(t);
    (-ej_sum * (x.cos() - 1.0), -dej * x.sin())
}

/// The drive operator at time t in the dressed eigenbasis of the static
/// circuit (built at zero DC bias).
pub fn drive_hamiltonian(
    circuit: &DressedCircuit,
    drive: &DriveSpec,
    t: f64,
) -> ComplexMatrix {
    let (fc, fs) = drive_coefficients(circuit.params.ej_sum, circuit.params.dej, drive, t);
    circuit
        .cos2_dressed
        .scale(C64::new(fc, 0.0))
        .add(&circuit.sin2_dressed.scale(C64::new(fs, 0.0)))
}
