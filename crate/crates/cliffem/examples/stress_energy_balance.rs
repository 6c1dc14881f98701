//! Builds the electromagnetic stress-energy tensor two ways, prints the
//! energy density and Poynting components, and verifies the local balance
//! d_nu T^{alpha nu} = J_nu F^{nu alpha} on an analytic solution.

use cliffem::calculus::StencilConfig;
use cliffem::electrodynamics::{assemble_f, plane_wave_field, Current};
use cliffem::forms::VolumeElement;
use cliffem::mechanics::{divergence_check, stress_energy, stress_energy_components};

fn main() {
    let tau = VolumeElement::positive();

    // crossed fields E = x, B = y carry unit Poynting flux along z
    let f = assemble_f(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
    let t = stress_energy(&f, &tau).unwrap();
    println!("E = x, B = y:");
    println!("  T^00 (energy density) = {:.6}", t.components[0][0]);
    println!("  T^03 (Poynting z)     = {:.6}", t.components[0][3]);

    // the Clifford route and the closed-form tensor agree
    let tensor = stress_energy_components(&f);
    let mut gap = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            gap = gap.max((t.components[a][b] - tensor[a][b]).abs());
        }
    }
    println!("  route disagreement    = {gap:.3e}");

    let wave = plane_wave_field();
    let residual = divergence_check(
        &wave,
        &Current::zero(),
        &[0.3, 0.2, -0.4, 0.7],
        &StencilConfig::default(),
    )
    .unwrap();
    println!("plane wave conservation residual: {residual:.3e}");
}
