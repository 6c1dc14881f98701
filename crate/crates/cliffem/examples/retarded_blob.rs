//! Solves the retarded potential of a static Gaussian charge blob and
//! compares the resulting field against the exterior Coulomb solution.

use cliffem::calculus::FieldMap;
use cliffem::electrodynamics::{coulomb_field, retarded_field, Current, RetardedQuadrature};

fn main() {
    let (q, sigma) = (1.0, 0.05);
    let blob = Current::gaussian_blob(q, sigma, [0.0; 3], [0.0; 3]).unwrap();
    let quadrature = RetardedQuadrature {
        points_per_axis: 40,
        h: 1e-3,
    };
    let coulomb: FieldMap = coulomb_field(q);

    println!("static blob, sigma = {sigma}, quadrature {0}^3", quadrature.points_per_axis);
    for k in [4.0, 5.0, 7.0] {
        let point = [0.0, k * sigma, 0.0, 0.0];
        let f = retarded_field(&blob, &point, &quadrature).unwrap();
        let exact = coulomb.eval(&point);
        let rel = (*f.value() - exact).norm_inf() / exact.norm_inf();
        println!(
            "  r = {:>4.2} ({k} sigma): E_x = {:+.6e}, Coulomb {:+.6e}, rel err {rel:.2e}",
            k * sigma,
            f.value().coeffs[0b0011],
            exact.coeffs[0b0011]
        );
    }
}
