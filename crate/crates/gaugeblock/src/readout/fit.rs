//! Fitting populations and rates from multi-frequency readout traces.
//!
//! The model for each trace is scale * m(t; theta) + offset with a complex
//! per-trace scale and offset (the measurement chain) and a shared physical
//! parameter set theta: the five forward decay rates, the pure dephasing,
//! the three thermal occupations, the drive strength |Omega|, and the drive
//! detuning. The scales are linear parameters and are projected out exactly
//! (per-trace 2x2 complex least squares); Levenberg-Marquardt runs only
//! over the eleven physical parameters, restarted from a few perturbed
//! seeds, best residual wins.
//!
//! Populations come out two ways, mirroring how the measurements are
//! reduced: the fitted model supplies all five populations at each
//! evolution time, and traces marked with a rescale target are additionally
//! converted into direct population estimates by removing the fitted
//! contributions of the other states and dividing by the target's basis
//! response. At the ground-state readout frequency the 001 and 000
//! responses coincide, so the rescaled value is P_001 + P_000 and the
//! fitted P_000 is subtracted, as the footnote construction has it.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    integrate_cavity_bloch_from, CavityBlochState, DecayRates, PulseSchedule, QState,
    ReadoutError, ReadoutParams,
};
use crate::numkit::{fit_least_squares, C64, LmOptions, OdeOptions};

/// One measured (or synthesized) readout trace.
#[derive(Debug, Clone, Serialize)]
pub struct MeasuredTrace {
    pub resonator: usize,
    pub omega_m: f64,
    pub t_evolve: f64,
    /// Absolute sample times within the measurement window.
    pub times: Vec<f64>,
    pub values: Vec<C64>,
    /// When set, this trace is rescaled into a direct population estimate
    /// of the given state.
    pub rescale_target: Option<QState>,
}

/// The shared fit setup: fixed resonator constants (rates inside them are
/// ignored; the fit's own rates are used), drive frequency, and readout
/// pulse shape.
#[derive(Debug, Clone)]
pub struct FitProblem {
    pub resonators: Vec<ReadoutParams>,
    pub omega_p: f64,
    pub eps_amp: C64,
    pub t_readout: f64,
    pub traces: Vec<MeasuredTrace>,
}

/// The eleven physical parameters.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FittedParams {
    pub g110_to_100: f64,
    pub g110_to_010: f64,
    pub g100_to_000: f64,
    pub g010_to_000: f64,
    pub g001_to_000: f64,
    pub gamma_phi: f64,
    /// Thermal populations of (100, 010, 001) before the pi pulse.
    pub thermal: [f64; 3],
    /// |Omega| = J/ħ (rad/ns).
    pub omega_amp: f64,
    /// omega_110 - omega_001 - omega_p (rad/ns), i.e. minus the drive
    /// detuning.
    pub qubit_detuning: f64,
}

impl FittedParams {
    fn to_vec(self) -> Vec<f64> {
        vec![
            self.g110_to_100,
            self.g110_to_010,
            self.g100_to_000,
            self.g010_to_000,
            self.g001_to_000,
            self.gamma_phi,
            self.thermal[0],
            self.thermal[1],
            self.thermal[2],
            self.omega_amp,
            self.qubit_detuning,
        ]
    }

    fn from_slice(x: &[f64]) -> Self {
        FittedParams {
            g110_to_100: x[0],
            g110_to_010: x[1],
            g100_to_000: x[2],
            g010_to_000: x[3],
            g001_to_000: x[4],
            gamma_phi: x[5],
            thermal: [x[6], x[7], x[8]],
            omega_amp: x[9],
            qubit_detuning: x[10],
        }
    }

    pub fn decay(&self) -> DecayRates {
        DecayRates::forward(
            self.g110_to_100,
            self.g110_to_010,
            self.g100_to_000,
            self.g010_to_000,
            self.g001_to_000,
        )
    }
}

#[derive(Debug, Clone)]
pub struct FitConfig {
    /// Perturbed restarts; the best residual wins.
    pub n_starts: usize,
    pub seed: u64,
    /// RMS residual (per real component, relative to the data RMS) above
    /// which the fit is rejected.
    pub residual_threshold: f64,
    pub ode: OdeOptions,
    pub lm: LmOptions,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            n_starts: 8,
            seed: 7,
            residual_threshold: 0.25,
            ode: OdeOptions::dissipative(),
            lm: LmOptions {
                max_iterations: 60,
                fd_rel_step: 1e-3,
                ftol: 1e-12,
                xtol: 1e-10,
                ..LmOptions::default()
            },
        }
    }
}

/// A rescaled population series from one designated trace family.
#[derive(Debug, Clone, Serialize)]
pub struct RescaleTarget {
    pub target: QState,
    pub resonator: usize,
    pub omega_m: f64,
    pub t_evolve: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PopulationFit {
    pub params: FittedParams,
    /// Per-trace complex (scale, offset).
    pub scales: Vec<(C64, C64)>,
    /// Distinct evolution times, ascending.
    pub t_evolve: Vec<f64>,
    /// Model populations at the start of readout, per evolution time,
    /// in [`QState`] order.
    pub populations: Vec<[f64; 5]>,
    pub rescaled: Vec<RescaleTarget>,
    /// RMS residual per real component relative to the data RMS.
    pub residual_rms: f64,
    pub multi_start_residuals: Vec<f64>,
}

/// The readout frequency set aimed at a resonator: its bare frequency plus
/// every distinct state-shifted frequency.
pub fn default_readout_frequencies(rp: &ReadoutParams) -> Vec<f64> {
    let mut freqs = vec![rp.omega_r];
    for s in QState::ALL {
        let f = rp.shifted_frequency(s);
        if freqs.iter().all(|&g| (g - f).abs() > crate::units::mhz(0.01)) {
            freqs.push(f);
        }
    }
    freqs
}

fn rp_with(problem: &FitProblem, resonator: usize, p: &FittedParams) -> ReadoutParams {
    let mut rp = problem.resonators[resonator];
    rp.decay = p.decay();
    rp.gamma_phi = p.gamma_phi;
    // Only the 110-001 splitting enters; pin it to omega_p + detuning.
    rp.omega_state[QState::S110.index()] =
        rp.omega_state[QState::S001.index()] + problem.omega_p + p.qubit_detuning;
    rp
}

fn schedule_for(problem: &FitProblem, omega_amp: f64, t_evolve: f64, omega_m: f64) -> PulseSchedule {
    PulseSchedule {
        omega_amp: C64::new(omega_amp, 0.0),
        omega_p: problem.omega_p,
        t_evolve,
        eps_amp: problem.eps_amp,
        omega_m,
        t_readout: problem.t_readout,
    }
}

/// Drive-window evolution is independent of the resonator (the field stays
/// in vacuum while only Omega runs), so it is shared across traces with the
/// same evolution time.
fn drive_window_states(
    problem: &FitProblem,
    p: &FittedParams,
    opts: &OdeOptions,
) -> Result<BTreeMap<u64, CavityBlochState>, ReadoutError> {
    let y0 = super::initial_mixture(p.thermal)?;
    let rp = rp_with(problem, 0, p);
    let mut out = BTreeMap::new();
    for trace in &problem.traces {
        let key = trace.t_evolve.to_bits();
        if out.contains_key(&key) {
            continue;
        }
        let state = if trace.t_evolve <= 0.0 {
            y0
        } else {
            let sched = schedule_for(problem, p.omega_amp, trace.t_evolve, rp.omega_r);
            let traj = integrate_cavity_bloch_from(
                &rp,
                &sched,
                &y0,
                0.0,
                &[trace.t_evolve],
                opts,
            )?;
            traj.states[0]
        };
        out.insert(key, state);
    }
    Ok(out)
}

fn model_signal(
    problem: &FitProblem,
    p: &FittedParams,
    trace: &MeasuredTrace,
    start: &CavityBlochState,
    opts: &OdeOptions,
) -> Result<Vec<C64>, ReadoutError> {
    let rp = rp_with(problem, trace.resonator, p);
    let sched = schedule_for(problem, p.omega_amp, trace.t_evolve, trace.omega_m);
    let traj =
        integrate_cavity_bloch_from(&rp, &sched, start, trace.t_evolve, &trace.times, opts)?;
    Ok(super::output_signal(&traj, &rp, &sched))
}

/// Optimal complex (scale, offset) for data ~ scale * model + offset.
fn project_scale(model: &[C64], data: &[C64]) -> (C64, C64) {
    let n = model.len() as f64;
    let mut smm = 0.0;
    let mut sm = C64::new(0.0, 0.0);
    let mut smd = C64::new(0.0, 0.0);
    let mut sd = C64::new(0.0, 0.0);
    for (m, d) in model.iter().zip(data.iter()) {
        smm += m.norm_sqr();
        sm += m;
        smd += m.conj() * d;
        sd += d;
    }
    let det = smm * n - sm.norm_sqr();
    if det.abs() < 1e-300 {
        return (C64::new(0.0, 0.0), sd / n);
    }
    let scale = (smd * n - sm.conj() * sd) / det;
    let offset = (sd - scale * sm) / n;
    (scale, offset)
}

struct Projected {
    residuals: Vec<f64>,
    scales: Vec<(C64, C64)>,
}

fn projected_residuals(
    problem: &FitProblem,
    p: &FittedParams,
    opts: &OdeOptions,
) -> Result<Projected, ReadoutError> {
    let starts = drive_window_states(problem, p, opts)?;
    let per_trace: Result<Vec<(Vec<f64>, (C64, C64))>, ReadoutError> = problem
        .traces
        .par_iter()
        .map(|trace| {
            let start = &starts[&trace.t_evolve.to_bits()];
            let model = model_signal(problem, p, trace, start, opts)?;
            let (scale, offset) = project_scale(&model, &trace.values);
            let mut r = Vec::with_capacity(2 * model.len());
            for (m, d) in model.iter().zip(trace.values.iter()) {
                let e = scale * m + offset - d;
                r.push(e.re);
                r.push(e.im);
            }
            Ok((r, (scale, offset)))
        })
        .collect();
    let per_trace = per_trace?;
    let mut residuals = Vec::new();
    let mut scales = Vec::with_capacity(per_trace.len());
    for (r, s) in per_trace {
        residuals.extend(r);
        scales.push(s);
    }
    Ok(Projected { residuals, scales })
}

fn parameter_bounds() -> Vec<(f64, f64)> {
    let rate = (0.0, 0.05);
    vec![
        rate,
        rate,
        rate,
        rate,
        rate,
        (0.0, 0.05),   // gamma_phi
        (0.0, 0.3),    // thermal 100
        (0.0, 0.3),    // thermal 010
        (0.0, 0.3),    // thermal 001
        (1e-5, 0.3),   // omega_amp
        (-0.3, 0.3),   // detuning
    ]
}

fn perturb(rng: &mut ChaCha8Rng, base: &FittedParams, omega_scale: f64) -> FittedParams {
    let mut x = base.to_vec();
    for (k, v) in x.iter_mut().enumerate() {
        match k {
            0..=5 => *v *= (0.25 * rng.gen_range(-1.0..1.0f64)).exp(),
            6..=8 => *v = (*v * (0.25 * rng.gen_range(-1.0..1.0f64)).exp()).min(0.29),
            9 => *v *= (0.1 * rng.gen_range(-1.0..1.0f64)).exp(),
            _ => *v += 0.1 * omega_scale * rng.gen_range(-1.0..1.0),
        }
    }
    FittedParams::from_slice(&x)
}

/// Fit the shared physical parameters to all traces, then assemble the
/// population series and the rescaled estimates.
pub fn fit_populations(
    problem: &FitProblem,
    guess: &FittedParams,
    cfg: &FitConfig,
) -> Result<PopulationFit, ReadoutError> {
    assert!(!problem.traces.is_empty(), "no traces to fit");
    let data_rms = {
        let mut acc = 0.0;
        let mut n = 0usize;
        for t in &problem.traces {
            for v in &t.values {
                acc += v.norm_sqr();
                n += 1;
            }
        }
        (acc / n as f64).sqrt()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut all_residuals = Vec::with_capacity(cfg.n_starts);
    for start_idx in 0..cfg.n_starts.max(1) {
        let start = if start_idx == 0 {
            *guess
        } else {
            perturb(&mut rng, guess, guess.omega_amp)
        };
        let lm = LmOptions {
            bounds: Some(parameter_bounds()),
            ..cfg.lm.clone()
        };
        let problem_ref = &problem;
        let ode = cfg.ode.clone();
        let result = fit_least_squares(
            move |x: &[f64]| {
                let p = FittedParams::from_slice(x);
                match projected_residuals(problem_ref, &p, &ode) {
                    Ok(pr) => pr.residuals,
                    // A diverging trial point: huge residuals steer LM away.
                    Err(_) => vec![1e6; 2 * problem_ref.traces.iter().map(|t| t.times.len()).sum::<usize>()],
                }
            },
            &start.to_vec(),
            &lm,
        )?;
        all_residuals.push(result.residual_norm);
        let better = match &best {
            Some((r, _)) => result.residual_norm < *r,
            None => true,
        };
        if better {
            best = Some((result.residual_norm, result.params));
        }
    }
    let (residual_norm, x) = best.expect("at least one start");
    let params = FittedParams::from_slice(&x);

    // Upper-bound pins are reported; lower bounds are physical zeros.
    let bounds = parameter_bounds();
    let names = [
        "g110_to_100",
        "g110_to_010",
        "g100_to_000",
        "g010_to_000",
        "g001_to_000",
        "gamma_phi",
        "thermal_100",
        "thermal_010",
        "thermal_001",
        "omega_amp",
        "qubit_detuning",
    ];
    for (k, (_, hi)) in bounds.iter().enumerate() {
        if x[k] >= *hi {
            return Err(ReadoutError::ParameterAtBound { name: names[k] });
        }
    }

    let n_real: usize = 2 * problem.traces.iter().map(|t| t.times.len()).sum::<usize>();
    let residual_rms = residual_norm / (n_real as f64).sqrt() / data_rms;
    if residual_rms > cfg.residual_threshold {
        return Err(ReadoutError::ResidualTooLarge {
            residual: residual_rms,
            threshold: cfg.residual_threshold,
        });
    }

    let projected = projected_residuals(problem, &params, &cfg.ode)?;

    // Distinct evolution times and model populations at readout start.
    let starts = drive_window_states(problem, &params, &cfg.ode)?;
    let mut t_evolve: Vec<f64> = starts.keys().map(|b| f64::from_bits(*b)).collect();
    t_evolve.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let populations: Vec<[f64; 5]> = t_evolve
        .iter()
        .map(|t| starts[&t.to_bits()].populations)
        .collect();

    // Rescaled series per designated trace family.
    let mut rescaled: BTreeMap<(usize, u64, u8), RescaleTarget> = BTreeMap::new();
    for (k, trace) in problem.traces.iter().enumerate() {
        let Some(target) = trace.rescale_target else {
            continue;
        };
        let start = &starts[&trace.t_evolve.to_bits()];
        // Basis responses: window-mean of the model signal for unit initial
        // population in each state at readout start.
        let mut basis = [C64::new(0.0, 0.0); 5];
        for s in QState::ALL {
            let mut pure = [0.0; 5];
            pure[s.index()] = 1.0;
            let y = CavityBlochState::mixture(pure);
            let sig = model_signal(problem, &params, trace, &y, &cfg.ode)?;
            basis[s.index()] =
                sig.iter().sum::<C64>() / C64::new(sig.len() as f64, 0.0);
        }
        let (scale, offset) = projected.scales[k];
        if scale.norm() < 1e-300 || basis[target.index()].norm() < 1e-300 {
            continue;
        }
        let data_mean =
            trace.values.iter().sum::<C64>() / C64::new(trace.values.len() as f64, 0.0);
        let mut resp = (data_mean - offset) / scale;
        for s in QState::ALL {
            if s != target {
                resp -= basis[s.index()] * start.populations[s.index()];
            }
        }
        let value = (resp / basis[target.index()]).re;
        let entry = rescaled
            .entry((trace.resonator, trace.omega_m.to_bits(), target as u8))
            .or_insert_with(|| RescaleTarget {
                target,
                resonator: trace.resonator,
                omega_m: trace.omega_m,
                t_evolve: Vec::new(),
                values: Vec::new(),
            });
        entry.t_evolve.push(trace.t_evolve);
        entry.values.push(value);
    }
    let mut rescaled: Vec<RescaleTarget> = rescaled.into_values().collect();
    for r in &mut rescaled {
        let mut order: Vec<usize> = (0..r.t_evolve.len()).collect();
        order.sort_by(|&a, &b| r.t_evolve[a].partial_cmp(&r.t_evolve[b]).unwrap());
        r.t_evolve = order.iter().map(|&i| r.t_evolve[i]).collect();
        r.values = order.iter().map(|&i| r.values[i]).collect();
    }

    Ok(PopulationFit {
        params,
        scales: projected.scales,
        t_evolve,
        populations,
        rescaled,
        residual_rms,
        multi_start_residuals: all_residuals,
    })
}

/// Synthesize traces from known parameters, with additive complex Gaussian
/// noise of the given relative amplitude (relative to the data RMS).
pub fn synthesize_traces(
    problem_template: &FitProblem,
    truth: &FittedParams,
    noise_rel: f64,
    rng: &mut ChaCha8Rng,
    ode: &OdeOptions,
) -> Result<Vec<MeasuredTrace>, ReadoutError> {
    use rand_distr::{Distribution, Normal};
    let starts = drive_window_states(problem_template, truth, ode)?;
    let mut traces = Vec::with_capacity(problem_template.traces.len());
    let mut clean_rms = 0.0;
    let mut count = 0usize;
    let mut signals = Vec::new();
    for trace in &problem_template.traces {
        let start = &starts[&trace.t_evolve.to_bits()];
        let sig = model_signal(problem_template, truth, trace, start, ode)?;
        for v in &sig {
            clean_rms += v.norm_sqr();
            count += 1;
        }
        signals.push(sig);
    }
    clean_rms = (clean_rms / count as f64).sqrt();
    let normal = Normal::new(0.0, noise_rel * clean_rms / 2f64.sqrt()).unwrap();
    for (trace, mut sig) in problem_template.traces.iter().zip(signals) {
        for v in &mut sig {
            *v += C64::new(normal.sample(rng), normal.sample(rng));
        }
        traces.push(MeasuredTrace {
            values: sig,
            ..trace.clone()
        });
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::readout::test_fixtures::test_params;
    use crate::units;

    fn small_problem() -> (FitProblem, FittedParams) {
        let rp = test_params();
        let omega_p = rp.omega_state[1] - rp.omega_state[0]; // resonant
        let truth = FittedParams {
            g110_to_100: units::per_us(1.0 / 1.561),
            g110_to_010: units::per_us(1.0 / 6.6),
            g100_to_000: units::per_us(1.0 / 4.2),
            g010_to_000: units::per_us(1.0 / 1.3),
            g001_to_000: units::per_us(1.0 / 1.28),
            gamma_phi: units::per_us(0.15),
            thermal: [0.05, 0.04, 0.03],
            omega_amp: units::mhz(2.5),
            qubit_detuning: units::mhz(0.3),
        };
        let t_readout = 700.0;
        let sample_times = |t_ev: f64| -> Vec<f64> {
            (1..=14).map(|k| t_ev + k as f64 * 50.0).collect()
        };
        let mut traces = Vec::new();
        let tevs: Vec<f64> = (0..10).map(|k| k as f64 * 60.0).collect();
        for &t_ev in &tevs {
            for (omega_m, target) in [
                (rp.shifted_frequency(QState::S110), Some(QState::S110)),
                (rp.omega_r, Some(QState::S001)),
                (rp.shifted_frequency(QState::S100), None),
            ] {
                traces.push(MeasuredTrace {
                    resonator: 0,
                    omega_m,
                    t_evolve: t_ev,
                    times: sample_times(t_ev),
                    values: Vec::new(),
                    rescale_target: target,
                });
            }
        }
        (
            FitProblem {
                resonators: vec![rp],
                omega_p,
                eps_amp: C64::new(2e-3, 0.0),
                t_readout,
                traces,
            },
            truth,
        )
    }

    #[test]
    fn noiseless_round_trip_recovers_rates() {
        let (mut problem, truth) = small_problem();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        problem.traces =
            synthesize_traces(&problem, &truth, 0.0, &mut rng, &OdeOptions::dissipative())
                .unwrap();
        // Start 15% off in every parameter.
        let mut guess = truth;
        guess.g110_to_100 *= 1.15;
        guess.g110_to_010 *= 0.85;
        guess.g100_to_000 *= 1.15;
        guess.g010_to_000 *= 0.85;
        guess.g001_to_000 *= 1.15;
        guess.gamma_phi *= 0.9;
        guess.thermal = [0.06, 0.03, 0.04];
        guess.omega_amp *= 1.05;
        guess.qubit_detuning = 0.0;
        let cfg = FitConfig {
            n_starts: 1,
            ..FitConfig::default()
        };
        let fit = fit_populations(&problem, &guess, &cfg).unwrap();
        let t = truth.to_vec();
        let f = fit.params.to_vec();
        for k in 0..5 {
            let rel = (f[k] - t[k]).abs() / t[k];
            assert!(rel < 0.01, "rate {k} off by {:.2}%", 100.0 * rel);
        }
        assert!((fit.params.omega_amp - truth.omega_amp).abs() / truth.omega_amp < 0.01);
        // Rescaled 110 series tracks the model populations.
        let r110 = fit
            .rescaled
            .iter()
            .find(|r| r.target == QState::S110)
            .unwrap();
        for (k, t_ev) in fit.t_evolve.iter().enumerate() {
            let idx = r110.t_evolve.iter().position(|x| x == t_ev).unwrap();
            let model_p = fit.populations[k][QState::S110.index()];
            assert!(
                (r110.values[idx] - model_p).abs() < 5e-3,
                "t_ev {t_ev}: rescaled {} vs model {}",
                r110.values[idx],
                model_p
            );
        }
    }

    #[test]
    fn common_complex_factor_moves_only_the_scales() {
        let (mut problem, truth) = small_problem();
        problem.traces.truncate(9);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        problem.traces =
            synthesize_traces(&problem, &truth, 0.0, &mut rng, &OdeOptions::dissipative())
                .unwrap();
        let factor = C64::new(-1.3, 0.7);
        let mut scaled = problem.clone();
        for t in &mut scaled.traces {
            for v in &mut t.values {
                *v *= factor;
            }
        }
        let cfg = FitConfig {
            n_starts: 1,
            lm: LmOptions {
                max_iterations: 12,
                fd_rel_step: 1e-3,
                ..LmOptions::default()
            },
            ..FitConfig::default()
        };
        let fit_a = fit_populations(&problem, &truth, &cfg).unwrap();
        let fit_b = fit_populations(&scaled, &truth, &cfg).unwrap();
        for (pa, pb) in fit_a.populations.iter().zip(fit_b.populations.iter()) {
            for k in 0..5 {
                assert!((pa[k] - pb[k]).abs() < 1e-9);
            }
        }
        for ((sa, _), (sb, _)) in fit_a.scales.iter().zip(fit_b.scales.iter()) {
            assert!((sb / sa - factor).norm() < 1e-6);
        }
    }
}
