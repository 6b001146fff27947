//! Single-transmon diagonalization in the charge basis.

use super::{CircuitError, TransmonBasis};
use crate::numkit::{eigh, C64, ComplexMatrix};

/// A transmon reduced to its lowest eigenstates: eigenenergies plus the
/// charge and phase operators projected into the kept eigenbasis.
#[derive(Debug, Clone)]
pub struct LocalTransmon {
    /// Eigenenergies of the kept levels, ascending (rad/ns).
    pub energies: Vec<f64>,
    /// Charge operator in the kept eigenbasis.
    pub n_op: ComplexMatrix,
    /// cos(phi) in the kept eigenbasis.
    pub cos_op: ComplexMatrix,
    /// sin(phi) in the kept eigenbasis.
    pub sin_op: ComplexMatrix,
    /// Ground-state probability on the outermost charge states.
    pub edge_leakage: f64,
}

impl LocalTransmon {
    /// 0 -> 1 transition frequency.
    pub fn omega01(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }
}

/// Diagonalize H = 4 E_C N^2 - ej_cos cos(phi) - ej_sin sin(phi) on the
/// charge basis n in [-N_c, N_c] and keep the lowest `levels_kept` states.
/// cos and sin are exact shift operators: e^{i phi}|n> = |n+1>.
///
/// Fails when the ground state leaks onto the truncation edge by more than
/// 1e-8 (cutoff too small for this E_J/E_C).
pub fn diagonalize_transmon(
    e_c: f64,
    ej_cos: f64,
    ej_sin: f64,
    basis: &TransmonBasis,
    which: usize,
) -> Result<LocalTransmon, CircuitError> {
    let nc = basis.charge_cutoff as isize;
    let dim = basis.charge_dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (row, n) in (-nc..=nc).enumerate() {
        h.set(row, row, C64::new(4.0 * e_c * (n * n) as f64, 0.0));
        if row + 1 < dim {
            // cos phi = (S+ + S-)/2, sin phi = (S+ - S-)/(2i)
            let coupling = C64::new(-0.5 * ej_cos, 0.5 * ej_sin);
            h.set(row + 1, row, coupling);
            h.set(row, row + 1, coupling.conj());
        }
    }
    let full = eigh(&h)?;
    let keep = basis.levels_kept;
    let edge_leakage =
        full.component(0, 0).norm_sqr() + full.component(dim - 1, 0).norm_sqr();
    if edge_leakage > 1e-8 {
        return Err(CircuitError::CutoffTooSmall {
            transmon: which,
            leakage: edge_leakage,
        });
    }
    let energies = full.eigenvalues[..keep].to_vec();
    // Operators in the kept eigenbasis: O_kl = <k|O|l>, with the upper
    // triangle mirrored so the projection is exactly Hermitian.
    let project = |op: &ComplexMatrix| -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(keep, keep);
        for k in 0..keep {
            for l in 0..=k {
                let mut acc = C64::new(0.0, 0.0);
                for row in 0..dim {
                    let bra = full.component(row, k).conj();
                    // apply op to eigenvector l on the fly
                    let mut amp = C64::new(0.0, 0.0);
                    for col in 0..dim {
                        let v = op.get(row, col);
                        if v != C64::new(0.0, 0.0) {
                            amp += v * full.component(col, l);
                        }
                    }
                    acc += bra * amp;
                }
                if k == l {
                    out.set(k, k, C64::new(acc.re, 0.0));
                } else {
                    out.set(k, l, acc);
                    out.set(l, k, acc.conj());
                }
            }
        }
        out
    };
    let mut n_mat = ComplexMatrix::zeros(dim, dim);
    let mut cos_mat = ComplexMatrix::zeros(dim, dim);
    let mut sin_mat = ComplexMatrix::zeros(dim, dim);
    for (row, n) in (-nc..=nc).enumerate() {
        n_mat.set(row, row, C64::new(n as f64, 0.0));
        if row + 1 < dim {
            cos_mat.set(row + 1, row, C64::new(0.5, 0.0));
            cos_mat.set(row, row + 1, C64::new(0.5, 0.0));
            sin_mat.set(row + 1, row, C64::new(0.0, -0.5));
            sin_mat.set(row, row + 1, C64::new(0.0, 0.5));
        }
    }
    Ok(LocalTransmon {
        energies,
        n_op: project(&n_mat),
        cos_op: project(&cos_mat),
        sin_op: project(&sin_mat),
        edge_leakage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units;

    fn typical() -> (f64, f64) {
        // E_C/h = 183 MHz, E_J/h ~ 24 GHz
        (units::mhz(183.0), units::ghz(24.0))
    }

    #[test]
    fn transmon_frequency_near_closed_form() {
        let (ec, ej) = typical();
        let t = diagonalize_transmon(ec, ej, 0.0, &TransmonBasis::default(), 1).unwrap();
        let closed = (8.0 * ec * ej).sqrt() - ec;
        // The closed form is the leading asymptotic result; agreement at the
        // percent level is expected at E_J/E_C ~ 130.
        assert!(
            (t.omega01() - closed).abs() / closed < 0.01,
            "omega01 {} vs closed form {}",
            t.omega01(),
            closed
        );
        // Negative anharmonicity close to -E_C.
        let anharm = (t.energies[2] - t.energies[1]) - (t.energies[1] - t.energies[0]);
        assert!(anharm < 0.0);
        assert!((anharm + ec).abs() / ec < 0.15);
    }

    #[test]
    fn charge_parity_kills_diagonal_sin_elements() {
        let (ec, ej) = typical();
        let t = diagonalize_transmon(ec, ej, 0.0, &TransmonBasis::default(), 1).unwrap();
        for k in 0..5 {
            assert!(t.sin_op.get(k, k).norm() < 1e-10, "level {k}");
        }
        // sin connects opposite parities; cos preserves parity.
        assert!(t.sin_op.get(0, 1).norm() > 1e-3);
        assert!(t.cos_op.get(0, 1).norm() < 1e-10);
        assert!(t.cos_op.get(0, 2).norm() > 1e-3);
    }

    #[test]
    fn operators_are_hermitian() {
        let (ec, ej) = typical();
        let t = diagonalize_transmon(ec, ej, 0.35 * ej, &TransmonBasis::default(), 1).unwrap();
        assert!(t.n_op.is_hermitian());
        assert!(t.cos_op.is_hermitian());
        assert!(t.sin_op.is_hermitian());
    }

    #[test]
    fn tiny_cutoff_triggers_leakage_error() {
        let ec = units::mhz(183.0);
        // At enormous E_J/E_C the charge wavefunction spreads far beyond 10.
        let ej = units::ghz(40000.0);
        let r = diagonalize_transmon(ec, ej, 0.0, &TransmonBasis::new(10, 4), 2);
        assert!(matches!(r, Err(CircuitError::CutoffTooSmall { transmon: 2, .. })));
    }

    #[test]
    fn cutoff_convergence() {
        let (ec, ej) = typical();
        let a = diagonalize_transmon(ec, ej, 0.0, &TransmonBasis::new(12, 5), 1).unwrap();
        let b = diagonalize_transmon(ec, ej, 0.0, &TransmonBasis::new(16, 5), 1).unwrap();
        for k in 1..5 {
            let da = a.energies[k] - a.energies[0];
            let db = b.energies[k] - b.energies[0];
            assert!(
                (da - db).abs() < units::mhz(1e-3),
                "level {k} moved by {} MHz",
                units::to_mhz((da - db).abs())
            );
        }
    }
}
