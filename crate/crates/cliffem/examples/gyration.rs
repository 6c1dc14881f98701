//! Pushes a charged particle around a uniform magnetic field and compares
//! the orbit against the analytic gyroradius p/(qB), then repeats the run
//! with the joint flip (q, F) -> (-q, -F) to show the trajectory is a
//! convention-free prediction.

use cliffem::calculus::FieldMap;
use cliffem::electrodynamics::assemble_f;
use cliffem::mechanics::{lorentz_push, orientation_flip_experiment, ChargedParticle};

fn main() {
    let b = 1.0;
    let field = FieldMap::constant(*assemble_f(&[0.0; 3], &[0.0, 0.0, b]).value());
    let particle = ChargedParticle::new(1.0, 1.0, [0.0; 4], [1.0, 0.0, 0.0]).unwrap();

    let period = 2.0 * std::f64::consts::PI; // proper period 2 pi m / (qB)
    let wl = lorentz_push(&particle, &field, period, period / 20000.0).unwrap();

    let mut worst = 0.0f64;
    for sample in &wl.samples {
        let r = (sample.z[1].powi(2) + (sample.z[2] + 1.0).powi(2)).sqrt();
        worst = worst.max((r - 1.0).abs());
    }
    let end = wl.samples.last().unwrap();
    println!("gyroradius deviation over one period: {worst:.3e}");
    println!(
        "orbit closure after s = 2 pi: |x| = {:.3e}",
        (end.z[1].powi(2) + end.z[2].powi(2) + end.z[3].powi(2)).sqrt()
    );
    println!("lab time elapsed: {:.6} (= gamma * 2 pi)", end.z[0]);

    let report = orientation_flip_experiment(&particle, &field, period, 1e-3).unwrap();
    println!(
        "flip experiment: trajectory deviation {:.3e}, pair charge {:+.4}/{:+.4}, impair charge {:+.4}",
        report.trajectory_deviation,
        report.charge_positive_chart,
        report.charge_negative_chart,
        report.charge_impair
    );
}
