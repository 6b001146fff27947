//! Adaptive embedded Runge-Kutta integration for complex systems.
//!
//! Dormand-Prince 5(4) with the classic quartic dense-output interpolant, so
//! trajectories can be sampled on any grid without constraining step
//! selection. Local error per step is bounded by atol + rtol * |y|; a step
//! size collapsing below machine resolution is reported as stiffness beyond
//! budget, with the failing time.

use super::{C64, NumError};

#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; chosen automatically when absent.
    pub h_initial: Option<f64>,
    /// Cap on the step size; unlimited when absent.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl OdeOptions {
    /// Defaults for unitary dynamics (downstream tolerances are 1e-6..1e-9).
    pub fn unitary() -> Self {
        OdeOptions {
            rtol: 1e-9,
            atol: 1e-12,
            h_initial: None,
            h_max: None,
            max_steps: 50_000_000,
        }
    }

    /// Defaults for dissipative cavity-Bloch integration.
    pub fn dissipative() -> Self {
        OdeOptions {
            rtol: 1e-7,
            atol: 1e-10,
            h_initial: None,
            h_max: None,
            max_steps: 50_000_000,
        }
    }

    pub fn with_rtol(mut self, rtol: f64) -> Self {
        self.rtol = rtol;
        self
    }

    pub fn with_atol(mut self, atol: f64) -> Self {
        self.atol = atol;
        self
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions::unitary()
    }
}

/// Sampled solution of an initial value problem.
#[derive(Debug, Clone)]
pub struct OdeTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
// Error coefficients b5 - b4.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output coefficients.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

struct Dense {
    t0: f64,
    h: f64,
    r1: Vec<C64>,
    r2: Vec<C64>,
    r3: Vec<C64>,
    r4: Vec<C64>,
    r5: Vec<C64>,
}

impl Dense {
    fn eval(&self, t: f64, out: &mut Vec<C64>) {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        out.clear();
        for i in 0..self.r1.len() {
            let conpar = self.r4[i] + self.r5[i] * th1;
            out.push(self.r1[i] + (self.r2[i] + (self.r3[i] + conpar * th) * th1) * th);
        }
    }
}

fn weighted_err(y0: &[C64], y1: &[C64], e: &[C64], rtol: f64, atol: f64) -> f64 {
    // Per-component (real and imaginary separately) RMS of err/scale.
    let mut acc = 0.0;
    let n = y0.len();
    for i in 0..n {
        let sr = atol + rtol * y0[i].re.abs().max(y1[i].re.abs());
        let si = atol + rtol * y0[i].im.abs().max(y1[i].im.abs());
        let er = e[i].re / sr;
        let ei = e[i].im / si;
        acc += er * er + ei * ei;
    }
    (acc / (2 * n) as f64).sqrt()
}

/// Integrate dy/dt = f(t, y) from t_span.0 to t_span.1 and return the dense
/// solution at `sample_times` (sorted, inside the span). Forward integration
/// only; t_span.1 > t_span.0.
pub fn integrate_ode<F>(
    mut f: F,
    y0: &[C64],
    t_span: (f64, f64),
    sample_times: &[f64],
    opts: &OdeOptions,
) -> Result<OdeTrajectory, NumError>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(NumError::InvalidTolerance);
    }
    let (t0, t_end) = t_span;
    if !(t_end > t0) {
        return Err(NumError::BadSampleTimes);
    }
    let tol_slack = 1e-12 * (t_end - t0).abs();
    for w in sample_times.windows(2) {
        if w[1] < w[0] {
            return Err(NumError::BadSampleTimes);
        }
    }
    if let (Some(first), Some(last)) = (sample_times.first(), sample_times.last()) {
        if *first < t0 - tol_slack || *last > t_end + tol_slack {
            return Err(NumError::BadSampleTimes);
        }
    }

    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k1 = vec![C64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut k5 = k1.clone();
    let mut k6 = k1.clone();
    let mut k7 = k1.clone();
    let mut ytmp = k1.clone();
    let mut ynew = k1.clone();
    let mut errv = k1.clone();

    f(t, &y, &mut k1);

    let h_max = opts.h_max.unwrap_or(t_end - t0).min(t_end - t0);
    let mut h = match opts.h_initial {
        Some(h0) => h0.min(h_max),
        None => initial_step(&mut f, t, &y, &k1, opts, h_max),
    };

    let mut out_times = Vec::with_capacity(sample_times.len());
    let mut out_states: Vec<Vec<C64>> = Vec::with_capacity(sample_times.len());
    let mut next_sample = 0;
    // Samples exactly at t0.
    while next_sample < sample_times.len() && sample_times[next_sample] <= t0 + tol_slack {
        out_times.push(sample_times[next_sample]);
        out_states.push(y.clone());
        next_sample += 1;
    }

    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut just_rejected = false;
    let mut scratch = Vec::with_capacity(n);

    while t < t_end {
        if accepted + rejected >= opts.max_steps {
            return Err(NumError::TooManySteps {
                t,
                max_steps: opts.max_steps,
            });
        }
        if h < 16.0 * f64::EPSILON * t.abs().max(t_end - t0) {
            return Err(NumError::StepSizeUnderflow { t });
        }
        if t + h > t_end {
            h = t_end - t;
        }

        for i in 0..n {
            ytmp[i] = y[i] + k1[i] * (A21 * h);
        }
        f(t + C2 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
        }
        f(t + C3 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
        }
        f(t + C4 * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
        }
        f(t + C5 * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] =
                y[i] + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
        }
        f(t + h, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] =
                y[i] + (k1[i] * A71 + k3[i] * A73 + k4[i] * A74 + k5[i] * A75 + k6[i] * A76) * h;
        }
        f(t + h, &ynew, &mut k7);
        for i in 0..n {
            errv[i] =
                (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
        }

        let err = weighted_err(&y, &ynew, &errv, opts.rtol, opts.atol);
        if err <= 1.0 {
            // Dense output over [t, t+h] for any samples inside.
            if next_sample < sample_times.len() && sample_times[next_sample] <= t + h + tol_slack {
                let mut r1 = Vec::with_capacity(n);
                let mut r2 = Vec::with_capacity(n);
                let mut r3 = Vec::with_capacity(n);
                let mut r4 = Vec::with_capacity(n);
                let mut r5 = Vec::with_capacity(n);
                for i in 0..n {
                    let ydiff = ynew[i] - y[i];
                    let bspl = k1[i] * h - ydiff;
                    r1.push(y[i]);
                    r2.push(ydiff);
                    r3.push(bspl);
                    r4.push(ydiff - k7[i] * h - bspl);
                    r5.push(
                        (k1[i] * D1
                            + k3[i] * D3
                            + k4[i] * D4
                            + k5[i] * D5
                            + k6[i] * D6
                            + k7[i] * D7)
                            * h,
                    );
                }
                let dense = Dense { t0: t, h, r1, r2, r3, r4, r5 };
                while next_sample < sample_times.len()
                    && sample_times[next_sample] <= t + h + tol_slack
                {
                    let ts = sample_times[next_sample];
                    dense.eval(ts.min(t + h), &mut scratch);
                    out_times.push(ts);
                    out_states.push(scratch.clone());
                    next_sample += 1;
                }
            }
            t += h;
            std::mem::swap(&mut y, &mut ynew);
            std::mem::swap(&mut k1, &mut k7); // FSAL
            accepted += 1;
            let facmax = if just_rejected { 1.0 } else { 5.0 };
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, facmax);
            h = (h * fac).min(h_max);
            just_rejected = false;
        } else {
            rejected += 1;
            just_rejected = true;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }

    // Anything left must sit at t_end within slack.
    while next_sample < sample_times.len() {
        out_times.push(sample_times[next_sample]);
        out_states.push(y.clone());
        next_sample += 1;
    }

    Ok(OdeTrajectory {
        times: out_times,
        states: out_states,
        steps_accepted: accepted,
        steps_rejected: rejected,
    })
}

/// Standard automatic initial step: balance the scale of y against the scale
/// of f, then refine with one explicit Euler probe.
fn initial_step<F>(
    f: &mut F,
    t0: f64,
    y0: &[C64],
    f0: &[C64],
    opts: &OdeOptions,
    h_max: f64,
) -> f64
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    let n = y0.len();
    let wnorm = |v: &[C64], yref: &[C64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            let sr = opts.atol + opts.rtol * yref[i].re.abs();
            let si = opts.atol + opts.rtol * yref[i].im.abs();
            acc += (v[i].re / sr).powi(2) + (v[i].im / si).powi(2);
        }
        (acc / (2 * n) as f64).sqrt()
    };
    let d0 = wnorm(y0, y0);
    let d1 = wnorm(f0, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(h_max);
    let y1: Vec<C64> = (0..n).map(|i| y0[i] + f0[i] * h0).collect();
    let mut f1 = vec![C64::new(0.0, 0.0); n];
    f(t0 + h0, &y1, &mut f1);
    let df: Vec<C64> = (0..n).map(|i| f1[i] - f0[i]).collect();
    let d2 = wnorm(&df, y0) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / dm).powf(0.2)
    };
    (100.0 * h0).min(h1).min(h_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{expm_unitary, ComplexMatrix};

    #[test]
    fn scalar_decay() {
        let opts = OdeOptions::unitary();
        let traj = integrate_ode(
            |_t, y, dy| dy[0] = -y[0],
            &[C64::new(1.0, 0.0)],
            (0.0, 1.0),
            &[1.0],
            &opts,
        )
        .unwrap();
        let expect = (-1.0f64).exp();
        assert!((traj.states[0][0].re - expect).abs() < 10.0 * opts.rtol);
    }

    #[test]
    fn phase_rotation_preserves_norm() {
        let omega = 3.0;
        let opts = OdeOptions::unitary();
        let samples: Vec<f64> = (0..=20).map(|k| k as f64 * 0.5).collect();
        let traj = integrate_ode(
            |_t, y, dy| dy[0] = C64::new(0.0, omega) * y[0],
            &[C64::new(1.0, 0.0)],
            (0.0, 10.0),
            &samples,
            &opts,
        )
        .unwrap();
        for s in &traj.states {
            assert!((s[0].norm() - 1.0).abs() < 100.0 * opts.rtol);
        }
    }

    #[test]
    fn schrodinger_matches_spectral_propagator() {
        // dpsi/dt = -i sigma_x psi, compare against the exact propagator.
        let sx = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let opts = OdeOptions::unitary();
        let t_end = 2.0;
        let traj = integrate_ode(
            |_t, y, dy| {
                dy[0] = C64::new(0.0, -1.0) * y[1];
                dy[1] = C64::new(0.0, -1.0) * y[0];
            },
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            (0.0, t_end),
            &[t_end],
            &opts,
        )
        .unwrap();
        let u = expm_unitary(&sx, t_end).unwrap();
        let exact = [u.get(0, 0), u.get(1, 0)];
        for (a, b) in traj.states[0].iter().zip(exact.iter()) {
            assert!((a - b).norm() < 10.0 * opts.rtol);
        }
    }

    #[test]
    fn dense_output_accuracy() {
        // y' = cos(t), sampled off the natural step grid.
        let samples: Vec<f64> = (0..=97).map(|k| k as f64 * (6.0 / 97.0)).collect();
        let traj = integrate_ode(
            |t, _y, dy| dy[0] = C64::new(t.cos(), 0.0),
            &[C64::new(0.0, 0.0)],
            (0.0, 6.0),
            &samples,
            &OdeOptions::unitary(),
        )
        .unwrap();
        for (t, s) in traj.times.iter().zip(traj.states.iter()) {
            assert!((s[0].re - t.sin()).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn reports_stiffness_with_failing_time() {
        // Derivative blows up near t = 0.5; the step size collapses there.
        let res = integrate_ode(
            |t, _y, dy| dy[0] = C64::new(1.0 / (0.5 - t), 0.0),
            &[C64::new(0.0, 0.0)],
            (0.0, 1.0),
            &[1.0],
            &OdeOptions::unitary(),
        );
        match res {
            Err(NumError::StepSizeUnderflow { t }) => {
                assert!((t - 0.5).abs() < 1e-2, "failing time {t}");
            }
            other => panic!("expected step underflow, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tolerances_and_samples() {
        let f = |_t: f64, _y: &[C64], dy: &mut [C64]| dy[0] = C64::new(0.0, 0.0);
        let y0 = [C64::new(1.0, 0.0)];
        let bad = OdeOptions {
            rtol: -1.0,
            ..OdeOptions::unitary()
        };
        assert!(matches!(
            integrate_ode(f, &y0, (0.0, 1.0), &[1.0], &bad),
            Err(NumError::InvalidTolerance)
        ));
        assert!(matches!(
            integrate_ode(f, &y0, (0.0, 1.0), &[2.0], &OdeOptions::unitary()),
            Err(NumError::BadSampleTimes)
        ));
    }
}
