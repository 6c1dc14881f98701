//! Decomposes constitutive tensors into principal, skewon, and axion parts:
//! the vacuum law, a pure axion medium, and the effective-metric law of a
//! conformally rescaled Lorentzian metric.

use cliffem::electrodynamics::{
    density_to_form, effective_metric_constitutive, ConstitutiveTensor,
};
use cliffem::electrodynamics::assemble_f;
use cliffem::forms::{pair_hodge, VolumeElement};

fn frobenius(t: &ConstitutiveTensor) -> f64 {
    t.chi.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

fn describe(name: &str, t: &ConstitutiveTensor) {
    let parts = t.decompose();
    println!(
        "{name:20} principal {:.4}  skewon {:.4}  axion {:+.4}",
        frobenius(&parts.principal),
        frobenius(&parts.skewon),
        parts.axion
    );
}

fn main() {
    describe("vacuum", &ConstitutiveTensor::vacuum());
    describe("pure axion a = 0.7", &ConstitutiveTensor::axion(0.7));
    describe(
        "vacuum + axion",
        &ConstitutiveTensor::vacuum().add(&ConstitutiveTensor::axion(0.7)),
    );

    // conformal rescaling leaves the effective-metric law unchanged
    let mut g = [[0.0; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = if i == 0 { 1.0 } else { -1.0 };
    }
    let mut g_scaled = g;
    for row in g_scaled.iter_mut() {
        for v in row.iter_mut() {
            *v *= 3.0;
        }
    }
    let a = effective_metric_constitutive(&g).unwrap();
    let b = effective_metric_constitutive(&g_scaled).unwrap();
    println!("conformal invariance gap: {:.3e}", a.max_abs_diff(&b));

    // the vacuum pipeline reproduces the Hodge dual of F
    let f = assemble_f(&[0.4, -0.2, 0.1], &[0.0, 0.3, -0.5]);
    let g_form = density_to_form(&ConstitutiveTensor::vacuum().apply(&f).unwrap()).unwrap();
    let star = pair_hodge(&f, &VolumeElement::positive());
    println!(
        "vacuum excitation vs star F: {:.3e}",
        (*g_form.value() - *star.value()).norm_inf()
    );
}
