//! Foundational numerical layer: complex matrices, Hermitian eigensolving,
//! spectral propagators, Kronecker products, adaptive ODE integration, and
//! nonlinear least squares.
//!
//! All operations are pure functions of their inputs; matrices and vectors
//! are plain values and safe to move between threads. Parameter sweeps
//! (flux, drive frequency, time) parallelize with no shared mutable state.

mod eigh;
mod fit;
mod matrix;
mod ode;

pub use eigh::{eigh, expm_unitary, EighResult, Propagator};
pub use fit::{fit_least_squares, LmOptions, LmResult};
pub use matrix::{kron, ComplexMatrix, CooBuilder, StateVector};
pub use ode::{integrate_ode, OdeOptions, OdeTrajectory};

use thiserror::Error;

pub type C64 = num_complex::Complex64;

/// Errors from the numerical layer.
#[derive(Debug, Error)]
pub enum NumError {
    #[error("matrix is not Hermitian (defect {defect:.3e} vs bound {bound:.3e})")]
    NotHermitian { defect: f64, bound: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {expected} vs {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ODE step size underflow at t = {t:.6e} (stiffness beyond budget)")]
    StepSizeUnderflow { t: f64 },
    #[error("ODE exceeded the step budget ({max_steps} steps) at t = {t:.6e}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("invalid tolerance: rtol and atol must be positive")]
    InvalidTolerance,
    #[error("sample times must be sorted and lie inside the integration span")]
    BadSampleTimes,
    #[error("least-squares fit did not converge after {iterations} iterations (residual {residual:.3e})")]
    FitDiverged { iterations: usize, residual: f64 },
    #[error("singular normal equations in least-squares solve")]
    SingularNormalEquations,
}

/// Relative tolerance used by the `hermitian` matrix flag.
pub const HERMITICITY_RTOL: f64 = 1e-12;
