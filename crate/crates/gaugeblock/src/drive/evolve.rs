//! Brute-force driven evolution in the dressed eigenbasis.
//!
//! The state is integrated in the interaction picture of the static
//! spectrum: with amplitudes c_l = e^{i eps_l t} <l|psi>,
//!
//! ```text
//! dc_l/dt = -i sum_m [f_cos(t) C_lm + f_sin(t) S_lm] e^{i(eps_l-eps_m)t} c_m
//! ```
//!
//! where C and S are cos(phi_2) and sin(phi_2) in the dressed basis. No
//! rotating-wave approximation: the full cosine/sine drive coefficients
//! oscillate at omega_p and the integrator resolves them. Populations are
//! basis-diagonal so |c_l|^2 matches the Schrödinger-picture values.

use std::collections::BTreeMap;

use super::{drive_coefficients, DriveError, DriveSpec};
use crate::circuit::{label_string, DressedCircuit, Label, TRACKED_LABELS};
use crate::numkit::{integrate_ode, C64, OdeOptions};

#[derive(Debug, Clone, Copy)]
pub struct DriveDynamicsOptions {
    /// How many of the lowest dressed levels participate in the dynamics.
    pub levels: usize,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for DriveDynamicsOptions {
    fn default() -> Self {
        DriveDynamicsOptions {
            levels: 32,
            rtol: 1e-9,
            atol: 1e-12,
        }
    }
}

impl DriveDynamicsOptions {
    /// Looser tolerance for broad scans; population errors stay far below
    /// the few-percent scales any chevron fit cares about.
    pub fn scan() -> Self {
        DriveDynamicsOptions {
            levels: 32,
            rtol: 1e-7,
            atol: 1e-10,
        }
    }
}

/// Populations of the tracked dressed labels over a time grid, plus the
/// leakage out of the tracked set (a diagnostic mirroring the experiment's
/// gauge-invariant-subspace bookkeeping).
#[derive(Debug, Clone)]
pub struct DrivenPopulations {
    pub times: Vec<f64>,
    pub populations: BTreeMap<Label, Vec<f64>>,
    pub leakage: Vec<f64>,
    /// Worst |norm - 1| over the returned samples.
    pub norm_error: f64,
}

impl DrivenPopulations {
    pub fn of(&self, label: Label) -> &[f64] {
        &self.populations[&label]
    }
}

/// Integrate the driven Schrödinger equation from the dressed eigenstate
/// `initial` and return tracked-label populations on `t_grid`.
pub fn evolve_driven(
    circuit: &DressedCircuit,
    drive: &DriveSpec,
    initial: Label,
    t_grid: &[f64],
    opts: &DriveDynamicsOptions,
) -> Result<DrivenPopulations, DriveError> {
    drive.validate()?;
    let n = opts.levels.min(circuit.dim());
    let start = circuit.label_index(initial)?;
    if start >= n {
        return Err(DriveError::SubspaceTooSmall {
            label: label_string(initial),
            index: start,
            levels: n,
        });
    }
    let mut tracked: Vec<(Label, usize)> = Vec::new();
    for label in TRACKED_LABELS {
        let idx = circuit.label_index(label)?;
        if idx >= n {
            return Err(DriveError::SubspaceTooSmall {
                label: label_string(label),
                index: idx,
                levels: n,
            });
        }
        tracked.push((label, idx));
    }

    // Truncated operators and energies.
    let eps: Vec<f64> = circuit.energies[..n].to_vec();
    let cmat: Vec<C64> = truncate(&circuit.cos2_dressed, n);
    let smat: Vec<C64> = truncate(&circuit.sin2_dressed, n);
    let ej_sum = circuit.params.ej_sum;
    let dej = circuit.params.dej;
    let drive_copy = *drive;

    let mut y0 = vec![C64::new(0.0, 0.0); n];
    y0[start] = C64::new(1.0, 0.0);
    let t_end = *t_grid.last().expect("t_grid must not be empty");
    if t_end <= 0.0 {
        return Err(DriveError::InvalidDrive("time grid must end past 0".into()));
    }

    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut u = vec![C64::new(0.0, 0.0); n];
    let rhs = move |t: f64, y: &[C64], dy: &mut [C64]| {
        let (fc, fs) = drive_coefficients(ej_sum, dej, &drive_copy, t);
        // w = e^{-i eps t} y
        for l in 0..n {
            let ph = -eps[l] * t;
            w[l] = y[l] * C64::new(ph.cos(), ph.sin());
        }
        // u = (fc C + fs S) w
        for l in 0..n {
            let row_c = &cmat[l * n..(l + 1) * n];
            let row_s = &smat[l * n..(l + 1) * n];
            let mut acc = C64::new(0.0, 0.0);
            for m in 0..n {
                acc += (row_c[m] * fc + row_s[m] * fs) * w[m];
            }
            u[l] = acc;
        }
        // dy = -i e^{+i eps t} u
        for l in 0..n {
            let ph = eps[l] * t;
            let e = C64::new(ph.cos(), ph.sin());
            let v = u[l] * e;
            dy[l] = C64::new(v.im, -v.re);
        }
    };

    let ode_opts = OdeOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        h_initial: None,
        h_max: None,
        max_steps: 200_000_000,
    };
    let traj = integrate_ode(rhs, &y0, (0.0, t_end), t_grid, &ode_opts)?;

    let mut populations: BTreeMap<Label, Vec<f64>> = tracked
        .iter()
        .map(|(l, _)| (*l, Vec::with_capacity(traj.times.len())))
        .collect();
    let mut leakage = Vec::with_capacity(traj.times.len());
    let mut norm_error: f64 = 0.0;
    for state in &traj.states {
        let norm2: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        norm_error = norm_error.max((norm2.sqrt() - 1.0).abs());
        let mut tracked_sum = 0.0;
        for (label, idx) in &tracked {
            let p = state[*idx].norm_sqr();
            populations.get_mut(label).unwrap().push(p);
            tracked_sum += p;
        }
        leakage.push((norm2 - tracked_sum).max(0.0));
    }
    Ok(DrivenPopulations {
        times: traj.times,
        populations,
        leakage,
        norm_error,
    })
}

fn truncate(m: &crate::numkit::ComplexMatrix, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(m.get(i, j));
        }
    }
    out
}
