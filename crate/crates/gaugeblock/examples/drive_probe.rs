//! Scratch probe: resonant three-body oscillation on the calibrated device.
//! Run: cargo run --release -p gaugeblock --example drive_probe

use std::time::Instant;

use gaugeblock::circuit::{calibrate_to_table, dressed_circuit, reference_device, TransmonBasis};
use gaugeblock::drive::{
    evolve_driven, perturbative_j, perturbative_shift, DriveDynamicsOptions, DriveSpec,
};
use gaugeblock::units;

fn main() {
    let t0 = Instant::now();
    let basis = TransmonBasis::new(12, 4);
    let params = calibrate_to_table(&reference_device(), &basis).unwrap();
    let circuit = dressed_circuit(&params, &basis).unwrap();
    println!("calibration + diagonalization: {:?}", t0.elapsed());
    println!("dim = {}", circuit.dim());

    let w0 = circuit.transition((0, 0, 1), (1, 1, 0)).unwrap();
    println!("omega_3q^0 / 2pi = {:.4} GHz", units::to_ghz(w0));
    let mel = circuit.sin2_element((1, 1, 0), (0, 0, 1)).unwrap().norm();
    println!("|<110|sin phi2|001>| = {:.6e}", mel);

    for a_p in [0.005, 0.01, 0.02, 0.03] {
        let j = perturbative_j(&circuit, a_p).unwrap();
        let shift = perturbative_shift(&circuit, a_p).unwrap();
        println!(
            "A_p={a_p}: J_pert/2pi = {:.4} MHz  shift = {:.4} MHz (cos-only {:.4}) defect {:.2e}",
            units::to_mhz(j),
            units::to_mhz(shift.total),
            units::to_mhz(shift.cos_only),
            shift.convergence_defect,
        );
    }

    // Resonant evolution at a mid amplitude.
    let a_p = 0.015;
    let j = perturbative_j(&circuit, a_p).unwrap();
    let shift = perturbative_shift(&circuit, a_p).unwrap();
    let wp = shift.omega_3q();
    let t_rabi = std::f64::consts::PI / j;
    println!("T_rabi = {:.1} ns at J/2pi = {:.3} MHz", t_rabi, units::to_mhz(j));
    let times: Vec<f64> = (0..=60).map(|k| 1.2 * t_rabi * k as f64 / 60.0).collect();
    let drive = DriveSpec::rectangular(a_p, wp, *times.last().unwrap()).unwrap();
    let t1 = Instant::now();
    let out = evolve_driven(
        &circuit,
        &drive,
        (0, 0, 1),
        &times,
        &DriveDynamicsOptions::scan(),
    )
    .unwrap();
    println!("evolution: {:?}  norm err {:.2e}", t1.elapsed(), out.norm_error);
    let p110 = out.of((1, 1, 0));
    let p001 = out.of((0, 0, 1));
    let max110 = p110.iter().cloned().fold(0.0f64, f64::max);
    println!("max P110 = {:.4}", max110);
    for k in (0..=60).step_by(10) {
        println!(
            "t={:7.1}  P001={:.4}  P110={:.4}  leak={:.2e}",
            times[k], p001[k], p110[k], out.leakage[k]
        );
    }
}
