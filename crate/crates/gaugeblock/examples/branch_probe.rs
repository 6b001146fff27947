//! Scratch probe: which member of the hybridized two-photon doublet is the
//! bright three-body target, and does a full charge-basis two-transmon
//! diagonalization agree with the product-basis machinery?

use gaugeblock::circuit::{calibrate_to_table, dressed_circuit, reference_device, TransmonBasis};
use gaugeblock::numkit::{eigh, C64, ComplexMatrix};
use gaugeblock::units;

fn main() {
    let basis = TransmonBasis::new(12, 5);
    let params = calibrate_to_table(&reference_device(), &basis).unwrap();
    let c = dressed_circuit(&params, &basis).unwrap();
    let e0 = c.energy_of((0, 0, 0)).unwrap();
    let i001 = c.label_index((0, 0, 1)).unwrap();

    println!("doublet bright-state analysis:");
    for idx in [8usize, 9] {
        let el = c.sin2_dressed.get(idx, i001).norm();
        println!(
            "  idx {idx}: E = {:.4} GHz, |<idx|sin phi2|001>| = {:.4e}",
            units::to_ghz(c.energies[idx] - e0),
            el
        );
    }
    println!(
        "  for scale: labeled-110 element = {:.4e}",
        c.sin2_element((1, 1, 0), (0, 0, 1)).unwrap().norm()
    );

    // Independent check: qubits 1+2 in the full charge product basis.
    let nc: isize = 10;
    let dim1 = (2 * nc + 1) as usize;
    let ec1 = params.ec[0][0];
    let ec2 = params.ec[1][1];
    let ec12 = params.ec[0][1];
    let (ej1, ej2) = (params.ej1, params.ej_sum);
    let dim = dim1 * dim1;
    let mut h = ComplexMatrix::zeros(dim, dim);
    let idx = |a: usize, b: usize| a * dim1 + b;
    for a in 0..dim1 {
        let na = a as f64 - nc as f64;
        for b in 0..dim1 {
            let nb = b as f64 - nc as f64;
            let i = idx(a, b);
            let old = h.get(i, i);
            h.set(
                i,
                i,
                old + C64::new(4.0 * ec1 * na * na + 4.0 * ec2 * nb * nb + 8.0 * ec12 * na * nb, 0.0),
            );
            if a + 1 < dim1 {
                let j = idx(a + 1, b);
                let old = h.get(j, i);
                h.set(j, i, old + C64::new(-0.5 * ej1, 0.0));
                let old = h.get(i, j);
                h.set(i, j, old + C64::new(-0.5 * ej1, 0.0));
            }
            if b + 1 < dim1 {
                let j = idx(a, b + 1);
                let old = h.get(j, i);
                h.set(j, i, old + C64::new(-0.5 * ej2, 0.0));
                let old = h.get(i, j);
                h.set(i, j, old + C64::new(-0.5 * ej2, 0.0));
            }
        }
    }
    let full = eigh(&h).unwrap();
    let g = full.eigenvalues[0];
    println!("two-transmon full charge basis (qubits 1+2):");
    for k in 1..8 {
        println!(
            "  level {k}: {:.4} GHz above ground",
            units::to_ghz(full.eigenvalues[k] - g)
        );
    }
}
