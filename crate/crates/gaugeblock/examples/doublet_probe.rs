//! Scratch probe: structure of the two-photon manifold on the calibrated
//! device, against the measured anchors
//! E(200)=11.2704, E(110)=11.5445, E(020)=11.7158 GHz.

use gaugeblock::circuit::{
    calibrate_to_table, dressed_circuit, reference_device, CircuitParams, TableFixture,
    TransmonBasis,
};
use gaugeblock::units;

fn report(tag: &str, fixture: &TableFixture, basis: &TransmonBasis) {
    let params: CircuitParams = match calibrate_to_table(fixture, basis) {
        Ok(p) => p,
        Err(e) => {
            println!("{tag}: calibration failed: {e}");
            return;
        }
    };
    let c = dressed_circuit(&params, basis).unwrap();
    let e0 = c.energy_of((0, 0, 0)).unwrap();
    let ghz = |label: (u8, u8, u8)| -> String {
        match c.label_index(label) {
            Ok(i) => {
                let (_, w, _, _) = c.label_diagnostics(label);
                format!(
                    "{:.4} GHz (idx {i}, weight {:.3})",
                    units::to_ghz(c.energies[i] - e0),
                    w
                )
            }
            Err(_) => {
                let (i, w, ri, rw) = c.label_diagnostics(label);
                format!(
                    "AMBIGUOUS best idx {i} {:.4} GHz w={:.3}, runner {ri} w={:.3}",
                    units::to_ghz(c.energies[i] - e0),
                    w,
                    rw
                )
            }
        }
    };
    println!("== {tag}");
    println!("  local omega01 bare: not shown; dressed singles:");
    for l in [(1u8, 0u8, 0u8), (0, 1, 0), (0, 0, 1)] {
        println!("  {:?}: {}", l, ghz(l));
    }
    for l in [(2u8, 0u8, 0u8), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1)] {
        println!("  {:?}: {}", l, ghz(l));
    }
    if let (Ok(e110), Ok(e001)) = (c.energy_of((1, 1, 0)), c.energy_of((0, 0, 1))) {
        println!(
            "  omega(001->110)/2pi = {:.4} GHz  (measured 6.4907)",
            units::to_ghz(e110 - e001)
        );
    }
}

fn main() {
    let basis = TransmonBasis::new(12, 5);
    let base = reference_device();
    report("reference", &base, &basis);

    // level convergence check
    report("levels_kept=6", &base, &TransmonBasis::new(14, 6));

    // sensitivities
    let mut f = base;
    f.ec_ghz[1] = 0.180;
    report("E_C2 -> 180 MHz", &f, &basis);
    let mut f = base;
    f.ec_ghz[1] = 0.150;
    report("E_C2 -> 150 MHz", &f, &basis);
    let mut f = base;
    f.g_ghz[0] = 0.058;
    report("g12 -> 58 MHz", &f, &basis);
    let mut f = base;
    f.omega_ghz[0] = 5.7279 - 0.005;
    report("omega1 5 MHz down", &f, &basis);
    let mut f = base;
    f.omega_ghz[1] = 5.9098 + 0.005;
    report("omega2 5 MHz up", &f, &basis);
}
