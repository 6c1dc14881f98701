//! Pair and impair differential forms on Minkowski spacetime.
//!
//! Pair forms are ordinary grade-homogeneous Clifford elements. An impair
//! (twisted) form is an equivalence class of (representative, coframe
//! orientation) pairs: `(rep, o)` and `(-rep, -o)` denote the same object.
//! Both Hodge star operators, the volume elements, the GL(4) component
//! transformation laws, and midpoint integration of top forms live here.

use serde::{Deserialize, Serialize};

use crate::kernel::{blade_grade, Multivector, BASIS_SIZE};
use crate::linalg::{det4, inv4, matmul, Mat4};
use crate::Error;

/// A sign, used for spacetime orientations, coframe orientations, and chart
/// orientations alike.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of(x: f64) -> Result<Sign, Error> {
        if x > 0.0 {
            Ok(Sign::Plus)
        } else if x < 0.0 {
            Ok(Sign::Minus)
        } else {
            Err(Error::Argument("sign of zero is undefined".into()))
        }
    }

    pub fn compose(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Whether a component array obeys the pair (tensorial) or impair
/// (tensorial times det-sign) transformation law, and whether a top-form
/// integral flips with chart orientation (pair) or not (impair).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Pair,
    Impair,
}

/// A grade-homogeneous multivector: an ordinary differential form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairForm {
    value: Multivector,
    grade: usize,
}

impl PairForm {
    /// Wraps a multivector already homogeneous of the stated grade.
    pub fn new(value: Multivector, grade: usize) -> Result<PairForm, Error> {
        if grade > 4 {
            return Err(Error::Argument(format!("grade {grade} out of range")));
        }
        if value.grade(grade) != value {
            return Err(Error::Argument(format!(
                "multivector is not homogeneous of grade {grade}"
            )));
        }
        Ok(PairForm { value, grade })
    }

    /// Projects out the grade-p part of an arbitrary multivector.
    pub fn project(value: &Multivector, grade: usize) -> PairForm {
        PairForm {
            value: value.grade(grade),
            grade,
        }
    }

    pub fn scalar(s: f64) -> PairForm {
        PairForm {
            value: Multivector::scalar(s),
            grade: 0,
        }
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.value == Multivector::zero()
    }
}

impl std::ops::Neg for PairForm {
    type Output = PairForm;
    fn neg(self) -> PairForm {
        PairForm {
            value: -self.value,
            grade: self.grade,
        }
    }
}

impl std::ops::Add for PairForm {
    type Output = PairForm;
    fn add(self, rhs: PairForm) -> PairForm {
        assert_eq!(self.grade, rhs.grade, "cannot add forms of different grade");
        PairForm {
            value: self.value + rhs.value,
            grade: self.grade,
        }
    }
}

impl std::ops::Mul<f64> for PairForm {
    type Output = PairForm;
    fn mul(self, rhs: f64) -> PairForm {
        PairForm {
            value: self.value * rhs,
            grade: self.grade,
        }
    }
}

/// An impair (twisted) form: a representative pair form together with the
/// orientation of the coframe it is expressed in, relative to the fixed
/// reference volume gamma^5. `(rep, o)` and `(-rep, -o)` are the same form.
#[derive(Clone, Copy, Debug)]
pub struct ImpairForm {
    rep: PairForm,
    orientation: Sign,
}

impl ImpairForm {
    pub fn new(rep: PairForm, orientation: Sign) -> ImpairForm {
        ImpairForm { rep, orientation }
    }

    pub fn grade(&self) -> usize {
        self.rep.grade()
    }

    /// Representative in a positively oriented coframe.
    pub fn canonical_rep(&self) -> PairForm {
        match self.orientation {
            Sign::Plus => self.rep,
            Sign::Minus => -self.rep,
        }
    }

    /// Representative in a coframe of the given orientation.
    pub fn rep_in(&self, chart: Sign) -> PairForm {
        match chart {
            Sign::Plus => self.canonical_rep(),
            Sign::Minus => -self.canonical_rep(),
        }
    }

    pub fn orientation(&self) -> Sign {
        self.orientation
    }
}

impl PartialEq for ImpairForm {
    fn eq(&self, other: &ImpairForm) -> bool {
        self.canonical_rep() == other.canonical_rep()
    }
}

/// The orientation data of the spacetime: a pair volume 4-form
/// `s * gamma^5` together with the impair (pseudo) volume element, whose
/// canonical component is +1 in every chart.
#[derive(Clone, Copy, Debug)]
pub struct VolumeElement {
    spacetime_orientation: Sign,
}

impl VolumeElement {
    pub fn new(spacetime_orientation: Sign) -> VolumeElement {
        VolumeElement {
            spacetime_orientation,
        }
    }

    /// The default positive orientation tau = +gamma^5.
    pub fn positive() -> VolumeElement {
        VolumeElement::new(Sign::Plus)
    }

    pub fn negative() -> VolumeElement {
        VolumeElement::new(Sign::Minus)
    }

    pub fn orientation(&self) -> Sign {
        self.spacetime_orientation
    }

    pub fn flipped(&self) -> VolumeElement {
        VolumeElement::new(self.spacetime_orientation.flip())
    }

    /// The pair volume 4-form s * gamma^5.
    pub fn pair(&self) -> PairForm {
        PairForm::project(
            &(Multivector::gamma5() * self.spacetime_orientation.factor()),
            4,
        )
    }

    /// The impair volume element. Its canonical impair component is +1 in
    /// every chart, so as an equivalence class it does not depend on the
    /// spacetime orientation choice.
    pub fn impair(&self) -> ImpairForm {
        ImpairForm::new(PairForm::project(&Multivector::gamma5(), 4), Sign::Plus)
    }

    /// The orientation impair 0-form: value +1 in charts positively oriented
    /// with respect to this volume element. Multiplying impair objects by it
    /// converts them to pair objects (see [`axion_convert`]).
    pub fn axion_scalar(&self) -> ImpairForm {
        ImpairForm::new(
            PairForm::scalar(self.spacetime_orientation.factor()),
            Sign::Plus,
        )
    }
}

/// Orientation of a coframe (presented by its volume 4-form `omega`) relative
/// to the spacetime orientation: the sign of `-omega . tau`.
pub fn coframe_orientation(omega: &PairForm, tau: &VolumeElement) -> Result<Sign, Error> {
    if omega.grade() != 4 {
        return Err(Error::Argument("coframe volume form must have grade 4".into()));
    }
    if omega.is_zero() {
        return Err(Error::Argument("degenerate coframe volume form".into()));
    }
    Sign::of(-omega.value().scalar_product(tau.pair().value()))
}

/// Pair Hodge star: reverse(A) times the pair volume element.
pub fn pair_hodge(form: &PairForm, tau: &VolumeElement) -> PairForm {
    let product = form.value().reverse().geometric_product(tau.pair().value());
    PairForm::project(&product, 4 - form.grade())
}

/// Inverse of the pair Hodge star, via the per-grade sign of the double
/// star in Lorentzian signature: star(star(A_p)) = -(-1)^p A_p.
pub fn pair_hodge_inverse(form: &PairForm, tau: &VolumeElement) -> PairForm {
    let c = double_star_sign(form.grade());
    pair_hodge(form, tau) * c
}

fn double_star_sign(grade: usize) -> f64 {
    if grade % 2 == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Impair Hodge star on a pair form: the result is impair, with the
/// representative computed chart-wise as reverse(A) times the impair volume
/// representative in that chart.
pub fn impair_hodge(form: &PairForm, tau_impair: &ImpairForm) -> ImpairForm {
    let rep = form
        .value()
        .reverse()
        .geometric_product(tau_impair.canonical_rep().value());
    ImpairForm::new(PairForm::project(&rep, 4 - form.grade()), Sign::Plus)
}

/// Impair Hodge star on an impair form: the result is pair. Both
/// representatives are taken in the same chart, so the product is
/// chart-independent.
pub fn impair_hodge_imp(form: &ImpairForm, tau_impair: &ImpairForm) -> PairForm {
    let rep = form
        .canonical_rep()
        .value()
        .reverse()
        .geometric_product(tau_impair.canonical_rep().value());
    PairForm::project(&rep, 4 - form.grade())
}

/// Multiplies an impair form by an impair 0-form (an orientation/axion
/// scalar), producing a pair form independent of the representative chosen.
pub fn axion_convert(form: &ImpairForm, epsilon: &ImpairForm) -> Result<PairForm, Error> {
    if epsilon.grade() != 0 {
        return Err(Error::Argument("axion factor must be an impair 0-form".into()));
    }
    let eps = epsilon.canonical_rep().value().scalar_part();
    Ok(form.canonical_rep() * eps)
}

/// A constant linear coordinate change on Minkowski space, stored as the
/// matrix `lambda[i][j] = d x^i / d x'^j` of old coordinates with respect to
/// new ones.
#[derive(Clone, Copy, Debug)]
pub struct LinearChart {
    lambda: Mat4,
    det: f64,
}

impl LinearChart {
    pub fn new(lambda: Mat4) -> Result<LinearChart, Error> {
        let det = det4(&lambda);
        if !det.is_finite() || det.abs() < 1e-12 {
            return Err(Error::Argument("chart matrix is singular".into()));
        }
        Ok(LinearChart { lambda, det })
    }

    pub fn identity() -> LinearChart {
        LinearChart::new(crate::linalg::IDENTITY4).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.lambda
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn det_sign(&self) -> Sign {
        if self.det > 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// The chart obtained by applying `self` after `other`
    /// (components transform by `other` first, then by `self`).
    pub fn after(&self, other: &LinearChart) -> LinearChart {
        LinearChart::new(matmul(&other.lambda, &self.lambda)).expect("product of invertible maps")
    }

    pub fn inverse(&self) -> LinearChart {
        LinearChart::new(inv4(&self.lambda).expect("chart matrix is invertible"))
            .expect("inverse is invertible")
    }
}

/// Applies the GL(4) component transformation law to a blade coefficient
/// array: p factors of the chart matrix per grade-p component, plus the
/// det-sign factor for impair components.
pub fn transform_components(
    components: &Multivector,
    chart: &LinearChart,
    parity: Parity,
) -> Multivector {
    let lam = chart.matrix();
    let mut out = [0.0; BASIS_SIZE];
    for (mask, slot) in out.iter_mut().enumerate() {
        let p = blade_grade(mask);
        let targets = mask_indices(mask);
        let mut acc = 0.0;
        // sum over all p-tuples of source indices; antisymmetry supplies the sign
        let mut tuple = [0usize; 4];
        let count = 4usize.pow(p as u32);
        for code in 0..count {
            let mut c = code;
            for t in tuple.iter_mut().take(p) {
                *t = c % 4;
                c /= 4;
            }
            let Some((source_mask, sign)) = sorted_mask(&tuple[..p]) else {
                continue;
            };
            let mut factor = sign * components.coeffs[source_mask];
            if factor == 0.0 {
                continue;
            }
            for (slot_idx, &j) in targets.iter().enumerate() {
                factor *= lam[tuple[slot_idx]][j];
            }
            acc += factor;
        }
        *slot = acc;
    }
    let mut result = Multivector::new(out);
    if parity == Parity::Impair {
        result = result * chart.det_sign().factor();
    }
    result
}

fn mask_indices(mask: usize) -> Vec<usize> {
    (0..4).filter(|mu| mask & (1 << mu) != 0).collect()
}

/// Mask and permutation sign of an index tuple; None if an index repeats.
fn sorted_mask(tuple: &[usize]) -> Option<(usize, f64)> {
    let mut v: Vec<usize> = tuple.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            match v[j].cmp(&v[i]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {
                    v.swap(i, j);
                    sign = -sign;
                }
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    let mut mask = 0usize;
    for &mu in &v {
        mask |= 1 << mu;
    }
    Some((mask, sign))
}

/// An axis-aligned box region of spacetime.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Box4 {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl Box4 {
    pub fn unit() -> Box4 {
        Box4 {
            lo: [0.0; 4],
            hi: [1.0; 4],
        }
    }
}

/// Integrates a top-form density over a box by the midpoint rule. The
/// density is the canonical (positive-chart) component; pair integrals flip
/// sign with the chart orientation, impair integrals do not.
pub fn integrate_top_form<F>(
    density: F,
    region: &Box4,
    chart_orientation: Sign,
    parity: Parity,
    points_per_axis: usize,
) -> Result<f64, Error>
where
    F: Fn(&[f64; 4]) -> f64,
{
    let n = points_per_axis.max(1);
    let mut steps = [0.0; 4];
    let mut cell = 1.0;
    for mu in 0..4 {
        steps[mu] = (region.hi[mu] - region.lo[mu]) / n as f64;
        cell *= steps[mu];
    }
    let mut sum = 0.0;
    for idx in 0..n.pow(4) {
        let mut rem = idx;
        let mut x = [0.0; 4];
        for mu in 0..4 {
            let k = rem % n;
            rem /= n;
            x[mu] = region.lo[mu] + (k as f64 + 0.5) * steps[mu];
        }
        let v = density(&x);
        if !v.is_finite() {
            return Err(Error::Numeric(format!("non-finite integrand at {x:?}")));
        }
        sum += v;
    }
    let raw = sum * cell;
    Ok(match parity {
        Parity::Pair => chart_orientation.factor() * raw,
        Parity::Impair => raw,
    })
}

/// Midpoint integral of a scalar function over a 3D box (used for
/// constant-time slices).
pub fn integrate_box3<F>(
    f: F,
    lo: &[f64; 3],
    hi: &[f64; 3],
    points_per_axis: usize,
) -> Result<f64, Error>
where
    F: Fn(&[f64; 3]) -> f64,
{
    let n = points_per_axis.max(1);
    let mut steps = [0.0; 3];
    let mut cell = 1.0;
    for i in 0..3 {
        steps[i] = (hi[i] - lo[i]) / n as f64;
        cell *= steps[i];
    }
    let mut sum = 0.0;
    for idx in 0..n.pow(3) {
        let mut rem = idx;
        let mut x = [0.0; 3];
        for i in 0..3 {
            let k = rem % n;
            rem /= n;
            x[i] = lo[i] + (k as f64 + 0.5) * steps[i];
        }
        let v = f(&x);
        if !v.is_finite() {
            return Err(Error::Numeric(format!("non-finite integrand at {x:?}")));
        }
        sum += v;
    }
    Ok(sum * cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn g(mu: usize) -> Multivector {
        Multivector::gamma(mu)
    }

    fn wedge(indices: &[usize]) -> Multivector {
        let mut acc = Multivector::scalar(1.0);
        for &mu in indices {
            acc = acc.outer(&g(mu));
        }
        acc
    }

    fn random_pform(rng: &mut impl Rng, p: usize) -> PairForm {
        let mut coeffs = [0.0; BASIS_SIZE];
        for (mask, c) in coeffs.iter_mut().enumerate() {
            if blade_grade(mask) == p {
                *c = rng.gen_range(-1.0..1.0);
            }
        }
        PairForm::new(Multivector::new(coeffs), p).unwrap()
    }

    #[test]
    fn coframe_orientation_examples() {
        let tau = VolumeElement::positive();
        let omega = PairForm::project(&wedge(&[0, 1, 2, 3]), 4);
        assert_eq!(coframe_orientation(&omega, &tau).unwrap(), Sign::Plus);

        let neg = PairForm::project(&(-Multivector::gamma5()), 4);
        assert_eq!(coframe_orientation(&neg, &tau).unwrap(), Sign::Minus);

        let two = PairForm::project(&(Multivector::gamma5() * 2.0), 4);
        let tau_neg = VolumeElement::negative();
        assert_eq!(coframe_orientation(&two, &tau_neg).unwrap(), Sign::Minus);

        let zero = PairForm::project(&Multivector::zero(), 4);
        assert!(coframe_orientation(&zero, &tau).is_err());
    }

    #[test]
    fn pair_hodge_examples() {
        let tau = VolumeElement::positive();
        // star(g0) = g1^g2^g3, from the kernel product g0 g5
        let f = PairForm::project(&g(0), 1);
        assert_eq!(*pair_hodge(&f, &tau).value(), wedge(&[1, 2, 3]));
        // star(g0^g1) = -(g2^g3), from (g1 g0) g5
        let f = PairForm::project(&wedge(&[0, 1]), 2);
        assert_eq!(*pair_hodge(&f, &tau).value(), -wedge(&[2, 3]));
        // star(1) with flipped tau is -g5
        let one = PairForm::scalar(1.0);
        assert_eq!(
            *pair_hodge(&one, &VolumeElement::negative()).value(),
            -Multivector::gamma5()
        );
    }

    #[test]
    fn pair_hodge_inverse_examples() {
        let tau = VolumeElement::positive();
        let three = PairForm::project(&wedge(&[1, 2, 3]), 3);
        assert_eq!(*pair_hodge_inverse(&three, &tau).value(), g(0));

        let tau_neg = VolumeElement::negative();
        let f = PairForm::project(&(-Multivector::gamma5()), 4);
        assert_eq!(
            *pair_hodge_inverse(&f, &tau_neg).value(),
            Multivector::scalar(1.0)
        );

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for p in 0..=4 {
            for _ in 0..20 {
                let f = random_pform(&mut rng, p);
                for tau in [VolumeElement::positive(), VolumeElement::negative()] {
                    let back = pair_hodge_inverse(&pair_hodge(&f, &tau), &tau);
                    assert_eq!(*back.value(), *f.value(), "grade {p}");
                    let fwd = pair_hodge(&pair_hodge_inverse(&f, &tau), &tau);
                    assert_eq!(*fwd.value(), *f.value(), "grade {p}");
                }
            }
        }
    }

    #[test]
    fn hodge_defining_identity_randomized() {
        // B ^ star(A) = (B . A) tau for same-grade pairs (1000 cases)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for tau in [VolumeElement::positive(), VolumeElement::negative()] {
            for case in 0..500 {
                let p = case % 5;
                let a = random_pform(&mut rng, p);
                let b = random_pform(&mut rng, p);
                let lhs = b.value().outer(pair_hodge(&a, &tau).value());
                let rhs = *tau.pair().value() * b.value().scalar_product(a.value());
                assert!((lhs - rhs).norm_inf() <= 1e-12, "grade {p}");
            }
        }
    }

    #[test]
    fn hodge_flips_exactly_with_volume() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for p in 0..=4 {
            let a = random_pform(&mut rng, p);
            let plus = pair_hodge(&a, &VolumeElement::positive());
            let minus = pair_hodge(&a, &VolumeElement::negative());
            assert_eq!(*minus.value(), -*plus.value());
        }
    }

    #[test]
    fn impair_equivalence() {
        let rep = PairForm::project(&g(0), 1);
        let a = ImpairForm::new(rep, Sign::Plus);
        let b = ImpairForm::new(-rep, Sign::Minus);
        assert_eq!(a, b);
        let c = ImpairForm::new(-rep, Sign::Plus);
        assert_ne!(a, c);
    }

    #[test]
    fn impair_hodge_matches_pair_in_positive_chart() {
        let tau = VolumeElement::positive();
        let tau_imp = tau.impair();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for p in 0..=4 {
            let f = random_pform(&mut rng, p);
            let imp = impair_hodge(&f, &tau_imp);
            assert_eq!(imp.rep_in(Sign::Plus), pair_hodge(&f, &tau));
            // re-expressed in a negative chart the representative negates
            assert_eq!(imp.rep_in(Sign::Minus), -pair_hodge(&f, &tau));
        }
    }

    #[test]
    fn impair_double_hodge_per_grade() {
        // star(star(.)) through the impair pair of maps matches the pair
        // double star sign -(-1)^p; on gamma^0 this gives +gamma^0.
        let tau_imp = VolumeElement::positive().impair();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for p in 0..=4 {
            let f = random_pform(&mut rng, p);
            let round = impair_hodge_imp(&impair_hodge(&f, &tau_imp), &tau_imp);
            let expected = *f.value() * double_star_sign(p);
            assert_eq!(*round.value(), expected, "grade {p}");
        }
        let g0 = PairForm::project(&g(0), 1);
        let round = impair_hodge_imp(&impair_hodge(&g0, &tau_imp), &tau_imp);
        assert_eq!(*round.value(), g(0));
    }

    #[test]
    fn axion_convert_examples() {
        let j = PairForm::project(&wedge(&[1, 2, 3]), 3);
        let eps = VolumeElement::positive().axion_scalar();
        // positive chart
        let b = ImpairForm::new(j, Sign::Plus);
        assert_eq!(axion_convert(&b, &eps).unwrap(), j);
        // both signs flip
        let b = ImpairForm::new(-j, Sign::Minus);
        assert_eq!(axion_convert(&b, &eps).unwrap(), j);
        // impair volume converts to the pair volume of the chosen orientation
        for tau in [VolumeElement::positive(), VolumeElement::negative()] {
            let converted = axion_convert(&tau.impair(), &tau.axion_scalar()).unwrap();
            assert_eq!(converted, tau.pair());
        }
    }

    #[test]
    fn transform_volume_components() {
        let flip = LinearChart::new([
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let vol = Multivector::gamma5();
        // pair volume component scales by det
        let pair = transform_components(&vol, &flip, Parity::Pair);
        assert_eq!(pair.coeffs[0b1111], -1.0);
        // impair volume component scales by |det|
        let impair = transform_components(&vol, &flip, Parity::Impair);
        assert_eq!(impair.coeffs[0b1111], 1.0);
    }

    #[test]
    fn transform_identity_chart() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let chart = LinearChart::identity();
        for p in 0..=4 {
            let f = random_pform(&mut rng, p);
            assert_eq!(transform_components(f.value(), &chart, Parity::Pair), *f.value());
            assert_eq!(
                transform_components(f.value(), &chart, Parity::Impair),
                *f.value()
            );
        }
    }

    fn random_chart(rng: &mut impl Rng) -> LinearChart {
        loop {
            let mut m = [[0.0; 4]; 4];
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v = rng.gen_range(-1.0..1.0);
                }
            }
            if let Ok(chart) = LinearChart::new(m) {
                if chart.det().abs() > 0.1 {
                    return chart;
                }
            }
        }
    }

    #[test]
    fn transform_functoriality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let c1 = random_chart(&mut rng);
            let c2 = random_chart(&mut rng);
            let combined = c1.after(&c2);
            for p in [1, 2, 4] {
                let f = random_pform(&mut rng, p);
                let two_step =
                    transform_components(&transform_components(f.value(), &c2, Parity::Pair), &c1, Parity::Pair);
                let one_step = transform_components(f.value(), &combined, Parity::Pair);
                assert!(
                    (two_step - one_step).norm_inf() < 1e-10,
                    "grade {p} functoriality"
                );
            }
        }
    }

    #[test]
    fn impair_law_carries_det_sign() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for _ in 0..50 {
            let chart = random_chart(&mut rng);
            let f = random_pform(&mut rng, 2);
            let pair = transform_components(f.value(), &chart, Parity::Pair);
            let impair = transform_components(f.value(), &chart, Parity::Impair);
            assert_eq!(impair, pair * chart.det_sign().factor());
        }
    }

    #[test]
    fn integrate_unit_box() {
        let unit = Box4::unit();
        for o in [Sign::Plus, Sign::Minus] {
            let v = integrate_top_form(|_| 1.0, &unit, o, Parity::Impair, 8).unwrap();
            assert!((v - 1.0).abs() <= 1e-12);
        }
        let v = integrate_top_form(|_| 1.0, &unit, Sign::Minus, Parity::Pair, 8).unwrap();
        assert!((v + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn integrate_rejects_non_finite() {
        let unit = Box4::unit();
        let r = integrate_top_form(
            |x| if x[0] > 0.4 { f64::NAN } else { 1.0 },
            &unit,
            Sign::Plus,
            Parity::Pair,
            4,
        );
        assert!(r.is_err());
    }

    #[test]
    fn impair_integral_invariant_under_box_reparameterization() {
        // change of variables by random axis permutations and scalings with
        // random signs: the impair integral agrees with the original to
        // quadrature tolerance.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let base = Box4 {
            lo: [-1.0, -1.0, -1.0, -1.0],
            hi: [1.0, 1.0, 1.0, 1.0],
        };
        let density = |x: &[f64; 4]| (1.0 + x[0] * x[0] + 0.3 * x[1] - 0.2 * x[2] * x[3]).exp();
        let reference =
            integrate_top_form(density, &base, Sign::Plus, Parity::Impair, 24).unwrap();
        for _ in 0..10 {
            // x = lambda x': diagonal scaling with signs, times a permutation
            let mut perm = [0usize, 1, 2, 3];
            for i in (1..4).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut lam = [[0.0; 4]; 4];
            let mut scale = [0.0; 4];
            for (j, s) in scale.iter_mut().enumerate() {
                *s = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                lam[perm[j]][j] = *s;
            }
            let chart = LinearChart::new(lam).unwrap();
            // primed box: preimage of the base box
            let mut lo = [0.0; 4];
            let mut hi = [0.0; 4];
            for j in 0..4 {
                let a = base.lo[perm[j]] / scale[j];
                let b = base.hi[perm[j]] / scale[j];
                lo[j] = a.min(b);
                hi[j] = a.max(b);
            }
            let primed_box = Box4 { lo, hi };
            // impair component in the primed chart: |det| * density(lambda x')
            let det = chart.det();
            let primed_density = |xp: &[f64; 4]| {
                let mut x = [0.0; 4];
                for i in 0..4 {
                    for (j, xpj) in xp.iter().enumerate() {
                        x[i] += lam[i][j] * xpj;
                    }
                }
                det.abs() * density(&x)
            };
            let transformed =
                integrate_top_form(primed_density, &primed_box, Sign::Plus, Parity::Impair, 24)
                    .unwrap();
            assert!(
                (transformed - reference).abs() < 5e-3 * reference.abs(),
                "reparameterized integral {transformed} vs {reference}"
            );
        }
    }
}
