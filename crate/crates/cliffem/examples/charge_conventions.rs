//! Integrates the charge of a Gaussian blob as a pair 3-form and as an
//! impair 3-form. The pair integral tracks the chart orientation; the
//! impair integral is the physical, convention-free charge.

use cliffem::electrodynamics::{charge_integral, Current, TimeSlice};
use cliffem::forms::{Parity, Sign};

fn main() {
    let sigma = 0.1;
    let blob = Current::gaussian_blob(1.0, sigma, [0.0; 3], [0.0; 3]).unwrap();
    let slice = TimeSlice::cube(0.0, &[0.0; 3], 8.0 * sigma);
    let n = 48;

    for (parity, label) in [(Parity::Pair, "pair"), (Parity::Impair, "impair")] {
        for orientation in [Sign::Plus, Sign::Minus] {
            let q = charge_integral(&blob, &slice, orientation, parity, n).unwrap();
            println!(
                "{label:6} 3-form, chart orientation {:+}: Q = {q:+.6}",
                orientation.factor() as i32
            );
        }
    }

    // a blob in uniform motion keeps its integrated charge
    let moving = Current::gaussian_blob(2.0, sigma, [0.0; 3], [0.3, 0.0, 0.0]).unwrap();
    let slice = TimeSlice::cube(0.0, &[0.0; 3], 10.0 * sigma);
    let q = charge_integral(&moving, &slice, Sign::Plus, Parity::Impair, n).unwrap();
    println!("moving blob (v = 0.3): Q = {q:+.6} (expected +2)");
}
