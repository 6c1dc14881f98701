//! Shows the pair Hodge star flipping sign with the volume element while
//! the impair star stays orientation-free, and checks the transformation
//! law that distinguishes pair from impair components under an
//! orientation-reversing coordinate change.

use cliffem::forms::{
    impair_hodge, pair_hodge, transform_components, LinearChart, PairForm, Parity, VolumeElement,
};
use cliffem::kernel::Multivector;

fn main() {
    let plus = VolumeElement::positive();
    let minus = VolumeElement::negative();

    let a = PairForm::project(&Multivector::gamma(0), 1);
    println!("A = gamma^0 (pair 1-form)");
    println!("  star A with tau = +gamma5: {:?}", pair_hodge(&a, &plus).value());
    println!("  star A with tau = -gamma5: {:?}", pair_hodge(&a, &minus).value());

    // the impair star lands on an equivalence class; both volume choices
    // give the same class
    let imp_plus = impair_hodge(&a, &plus.impair());
    let imp_minus = impair_hodge(&a, &minus.impair());
    println!("  impair star A equal under both orientations: {}", imp_plus == imp_minus);

    // a reflection: det = -1
    let reflection = LinearChart::new([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    let volume = Multivector::gamma5();
    let pair = transform_components(&volume, &reflection, Parity::Pair);
    let impair = transform_components(&volume, &reflection, Parity::Impair);
    println!("under a spatial reflection (det = -1):");
    println!("  pair volume component   -> {:+.0} (scales by det)", pair.coeffs[0b1111]);
    println!("  impair volume component -> {:+.0} (scales by |det|)", impair.coeffs[0b1111]);
}
