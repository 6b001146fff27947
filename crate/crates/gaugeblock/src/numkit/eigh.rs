//! Hermitian eigendecomposition and spectral propagators.
//!
//! Time-independent evolution goes through the spectral decomposition
//! (dimensions stay at a few thousand at most); time-dependent drives use
//! the adaptive integrator in [`super::ode`] instead.

use nalgebra::DMatrix;

use super::{C64, ComplexMatrix, NumError};

/// Eigenvalues ascending; eigenvector k is column k of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct EighResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    let d = m.to_dense();
    DMatrix::from_row_slice(m.rows(), m.cols(), d.dense_data())
}

/// Hermitian eigendecomposition with ascending eigenvalues and orthonormal
/// columns. Non-Hermitian input is rejected.
pub fn eigh(h: &ComplexMatrix) -> Result<EighResult, NumError> {
    if h.rows() != h.cols() {
        return Err(NumError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    if !h.is_hermitian() {
        return Err(NumError::NotHermitian {
            defect: h.hermiticity_defect(),
            bound: super::HERMITICITY_RTOL * h.max_abs(),
        });
    }
    let n = h.rows();
    let se = to_nalgebra(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    // Fix each column's phase (largest-modulus component made real positive)
    // so repeated runs and labelings are reproducible.
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let v = se.eigenvectors.column(k);
        let mut imax = 0;
        let mut amax = 0.0;
        for (i, z) in v.iter().enumerate() {
            let a = z.norm();
            if a > amax {
                amax = a;
                imax = i;
            }
        }
        let phase = v[imax].conj() / v[imax].norm();
        for i in 0..n {
            vecs.set(i, col, v[i] * phase);
        }
    }
    Ok(EighResult {
        eigenvalues,
        eigenvectors: vecs,
    })
}

impl EighResult {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Overlap <e_row | v_col> of basis state `row` with eigenvector `col`.
    pub fn component(&self, row: usize, col: usize) -> C64 {
        self.eigenvectors.get(row, col)
    }
}

/// Spectral propagator for a time-independent Hermitian generator:
/// caches the eigendecomposition and applies U(t) = V exp(-i lambda t) V†.
#[derive(Debug, Clone)]
pub struct Propagator {
    basis: EighResult,
}

impl Propagator {
    pub fn new(h: &ComplexMatrix) -> Result<Self, NumError> {
        Ok(Propagator { basis: eigh(h)? })
    }

    pub fn from_eigh(basis: EighResult) -> Self {
        Propagator { basis }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.basis.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Apply exp(-i H t) to a vector.
    pub fn apply(&self, psi: &[C64], t: f64) -> Result<Vec<C64>, NumError> {
        let n = self.dim();
        if psi.len() != n {
            return Err(NumError::DimensionMismatch {
                expected: n,
                found: psi.len(),
            });
        }
        let v = &self.basis.eigenvectors;
        // coefficients in the eigenbasis: c = V† psi
        let mut c = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                acc += v.get(i, k).conj() * psi[i];
            }
            c[k] = acc;
        }
        for (k, ck) in c.iter_mut().enumerate() {
            let ph = -self.basis.eigenvalues[k] * t;
            *ck *= C64::new(ph.cos(), ph.sin());
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += v.get(i, k) * c[k];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// The full propagator matrix exp(-i H t).
    pub fn matrix(&self, t: f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.basis.eigenvectors;
        let phases: Vec<C64> = self
            .basis
            .eigenvalues
            .iter()
            .map(|&l| {
                let ph = -l * t;
                C64::new(ph.cos(), ph.sin())
            })
            .collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += v.get(i, k) * phases[k] * v.get(j, k).conj();
            }
            acc
        })
    }
}

/// exp(-i h t) for Hermitian h via spectral decomposition (ħ = 1).
/// The result is unitary to ~1e-10. Non-Hermitian input is rejected.
pub fn expm_unitary(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix, NumError> {
    Ok(Propagator::new(h)?.matrix(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::kron;
    use std::f64::consts::FRAC_PI_2;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    #[test]
    fn eigh_diagonal_case() {
        let h = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 1.0]]);
        let r = eigh(&h).unwrap();
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((r.eigenvalues[1] - 2.0).abs() < 1e-14);
        // permutation columns
        assert!((r.eigenvectors.get(1, 0).norm() - 1.0).abs() < 1e-12);
        assert!((r.eigenvectors.get(0, 1).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_pauli_spectrum() {
        let r = eigh(&sigma_x()).unwrap();
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((r.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_two_level_coupling() {
        let j = 0.37;
        let h = ComplexMatrix::from_real_rows(&[&[0.0, -j], &[-j, 0.0]]);
        let r = eigh(&h).unwrap();
        assert!((r.eigenvalues[0] + j).abs() < 1e-14);
        assert!((r.eigenvalues[1] - j).abs() < 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 1, C64::new(1.0, 0.0));
        assert!(matches!(eigh(&m), Err(NumError::NotHermitian { .. })));
    }

    #[test]
    fn eigh_columns_orthonormal_and_reconstruct() {
        // Random-ish Hermitian built from a fixed generator.
        let n = 12;
        let mut a = ComplexMatrix::zeros(n, n);
        let mut s = 1u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, C64::new(next(), next()));
            }
        }
        let h = a.add(&a.dagger()).scale(C64::new(0.5, 0.0));
        let r = eigh(&h).unwrap();
        let v = &r.eigenvectors;
        let gram = v.dagger().matmul(v);
        let defect = gram.sub(&ComplexMatrix::identity(n)).max_abs();
        assert!(defect < 1e-10, "orthonormality defect {defect:.2e}");
        // H V = V diag(lambda)
        for k in 0..n {
            let col: Vec<C64> = (0..n).map(|i| v.get(i, k)).collect();
            let hv = h.matvec(&col);
            for i in 0..n {
                let err = (hv[i] - col[i] * r.eigenvalues[k]).norm();
                assert!(err < 1e-10);
            }
        }
        // eigenvalue sum equals the trace
        let tr: f64 = h.trace().re;
        let sum: f64 = r.eigenvalues.iter().sum();
        assert!((tr - sum).abs() < 1e-9 * h.max_abs().max(1.0));
    }

    #[test]
    fn expm_identity_at_zero_time() {
        let h = kron(&sigma_x(), &sigma_z());
        let u = expm_unitary(&h, 0.0).unwrap();
        assert!(u.sub(&ComplexMatrix::identity(4)).max_abs() < 1e-13);
    }

    #[test]
    fn expm_diagonal_exponential() {
        let t = 0.83;
        let u = expm_unitary(&sigma_z(), t).unwrap();
        assert!((u.get(0, 0) - C64::new(t.cos(), -t.sin())).norm() < 1e-13);
        assert!((u.get(1, 1) - C64::new(t.cos(), t.sin())).norm() < 1e-13);
        assert!(u.get(0, 1).norm() < 1e-14);
    }

    #[test]
    fn expm_pauli_rotation_closed_form() {
        // exp(-i sigma_x pi/2) = -i sigma_x
        let u = expm_unitary(&sigma_x(), FRAC_PI_2).unwrap();
        let expect = sigma_x().scale(C64::new(0.0, -1.0));
        assert!(u.sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn expm_inverse_property() {
        let h = kron(&sigma_x(), &sigma_x()).add(&kron(&sigma_z(), &ComplexMatrix::identity(2)));
        let t = 1.7;
        let u = expm_unitary(&h, t).unwrap();
        let uinv = expm_unitary(&h, -t).unwrap();
        let prod = u.matmul(&uinv);
        assert!(prod.sub(&ComplexMatrix::identity(4)).max_abs() < 1e-9);
    }
}
