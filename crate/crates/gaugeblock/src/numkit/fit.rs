//! Bound-constrained nonlinear least squares.
//!
//! Levenberg-Marquardt with a forward-difference Jacobian and Marquardt
//! diagonal scaling. Good enough for the desk-scale fitting in this crate
//! (chevron columns, cavity-Bloch traces); not a general-purpose optimizer.

use nalgebra::{DMatrix, DVector};

use super::NumError;

#[derive(Debug, Clone)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Stop when the relative cost reduction falls below this.
    pub ftol: f64,
    /// Stop when the step is below xtol * (|x| + xtol).
    pub xtol: f64,
    pub lambda_init: f64,
    /// Relative finite-difference step.
    pub fd_rel_step: f64,
    /// Per-parameter (lower, upper) bounds; trial points are projected.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 100,
            ftol: 1e-12,
            xtol: 1e-12,
            lambda_init: 1e-3,
            fd_rel_step: 1e-7,
            bounds: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmResult {
    pub params: Vec<f64>,
    /// Euclidean norm of the residual vector at the solution.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Indices of parameters that ended on a bound.
    pub at_bound: Vec<usize>,
}

fn project(x: &mut [f64], bounds: Option<&[(f64, f64)]>) {
    if let Some(b) = bounds {
        for (xi, &(lo, hi)) in x.iter_mut().zip(b.iter()) {
            *xi = xi.clamp(lo, hi);
        }
    }
}

/// Minimize ||r(x)||² over x starting from x0. `residuals` writes the
/// residual vector for the given parameters into its output argument.
pub fn fit_least_squares<F>(
    mut residuals: F,
    x0: &[f64],
    opts: &LmOptions,
) -> Result<LmResult, NumError>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    project(&mut x, opts.bounds.as_deref());
    let mut r = residuals(&x);
    let m = r.len();
    assert!(m >= n, "need at least as many residuals as parameters");
    let mut cost = r.iter().map(|v| v * v).sum::<f64>();
    let mut lambda = opts.lambda_init;
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..opts.max_iterations {
        iterations = iter + 1;
        // Forward-difference Jacobian, stepping inward at active bounds.
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let mut xs = x.clone();
            let mut h = opts.fd_rel_step * x[j].abs().max(1e-8);
            if let Some(b) = opts.bounds.as_deref() {
                if x[j] + h > b[j].1 {
                    h = -h;
                }
            }
            xs[j] += h;
            let rs = residuals(&xs);
            for i in 0..m {
                jac[(i, j)] = (rs[i] - r[i]) / h;
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * rv;
        let gnorm = jtr.amax();

        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for j in 0..n {
                let d = jtj[(j, j)];
                a[(j, j)] = d + lambda * d.max(1e-12);
            }
            let step = match a.cholesky() {
                Some(ch) => ch.solve(&jtr),
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let mut xt: Vec<f64> = (0..n).map(|j| x[j] - step[j]).collect();
            project(&mut xt, opts.bounds.as_deref());
            let rt = residuals(&xt);
            let cost_t = rt.iter().map(|v| v * v).sum::<f64>();
            if cost_t < cost {
                let dx_norm = x
                    .iter()
                    .zip(xt.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let rel_drop = (cost - cost_t) / cost.max(f64::MIN_POSITIVE);
                x = xt;
                r = rt;
                cost = cost_t;
                lambda = (lambda * 0.3).max(1e-14);
                improved = true;
                if rel_drop < opts.ftol || dx_norm < opts.xtol * (x_norm + opts.xtol) {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e14 {
                break;
            }
        }
        if converged || (!improved && gnorm < 1e-14) {
            converged = true;
            break;
        }
        if !improved {
            // Stuck: either a (possibly noisy) local minimum or bound wall.
            converged = cost.is_finite();
            break;
        }
    }

    let at_bound = match opts.bounds.as_deref() {
        Some(b) => (0..n)
            .filter(|&j| x[j] <= b[j].0 || x[j] >= b[j].1)
            .collect(),
        None => Vec::new(),
    };
    Ok(LmResult {
        params: x,
        residual_norm: cost.sqrt(),
        iterations,
        converged,
        at_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_exponential_decay() {
        // data = a * exp(-k t) with a = 2, k = 0.7
        let ts: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let data: Vec<f64> = ts.iter().map(|t| 2.0 * (-0.7 * t).exp()).collect();
        let ts2 = ts.clone();
        let res = fit_least_squares(
            move |p: &[f64]| {
                ts2.iter()
                    .zip(data.iter())
                    .map(|(t, d)| p[0] * (-p[1] * t).exp() - d)
                    .collect()
            },
            &[1.0, 1.0],
            &LmOptions::default(),
        )
        .unwrap();
        assert!(res.converged);
        assert!((res.params[0] - 2.0).abs() < 1e-7, "{:?}", res.params);
        assert!((res.params[1] - 0.7).abs() < 1e-7);
    }

    #[test]
    fn respects_bounds() {
        // Unconstrained optimum at p = -1, bounded to [0, 10].
        let res = fit_least_squares(
            |p: &[f64]| vec![p[0] + 1.0],
            &[5.0],
            &LmOptions {
                bounds: Some(vec![(0.0, 10.0)]),
                ..LmOptions::default()
            },
        )
        .unwrap();
        assert!(res.params[0].abs() < 1e-9);
        assert_eq!(res.at_bound, vec![0]);
    }

    #[test]
    fn fits_sin_squared_oscillation() {
        // The chevron column model: A sin^2(w t / 2).
        let ts: Vec<f64> = (0..120).map(|i| i as f64 * 2.5).collect();
        let truth = (0.84, 0.071);
        let data: Vec<f64> = ts
            .iter()
            .map(|t| truth.0 * (truth.1 * t / 2.0).sin().powi(2))
            .collect();
        let ts2 = ts.clone();
        let res = fit_least_squares(
            move |p: &[f64]| {
                ts2.iter()
                    .zip(data.iter())
                    .map(|(t, d)| p[0] * (p[1] * t / 2.0).sin().powi(2) - d)
                    .collect()
            },
            &[0.5, 0.08],
            &LmOptions::default(),
        )
        .unwrap();
        assert!((res.params[0] - truth.0).abs() < 1e-6);
        assert!((res.params[1] - truth.1).abs() < 1e-8);
    }
}
