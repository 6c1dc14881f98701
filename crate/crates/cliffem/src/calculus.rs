//! Fields on Minkowski spacetime and the differential operators: exterior
//! derivative d, coderivative delta, and the Dirac operator
//! `dirac = d - delta`, evaluated by central differences or by user-supplied
//! exact partial derivatives.

use std::sync::Arc;

use crate::forms::{pair_hodge, pair_hodge_inverse, PairForm, VolumeElement};
use crate::kernel::Multivector;
use crate::Error;

/// A point of Minkowski spacetime in global inertial coordinates, x[0] = t.
pub type SpacetimePoint = [f64; 4];

/// Finite-difference settings: central differences of order 2 or 4.
#[derive(Clone, Copy, Debug)]
pub struct StencilConfig {
    pub h: f64,
    pub order: usize,
}

impl Default for StencilConfig {
    fn default() -> StencilConfig {
        StencilConfig { h: 1e-3, order: 2 }
    }
}

impl StencilConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::Argument(format!("stencil step {} must be positive", self.h)));
        }
        if self.order != 2 && self.order != 4 {
            return Err(Error::Argument(format!("stencil order {} must be 2 or 4", self.order)));
        }
        Ok(())
    }
}

type EvalFn = dyn Fn(&SpacetimePoint) -> Multivector + Send + Sync;
type PartialsFn = dyn Fn(&SpacetimePoint) -> [Multivector; 4] + Send + Sync;

/// A multivector-valued field given as a closure, optionally with exact
/// partial derivatives (used in preference to finite differences).
#[derive(Clone)]
pub struct FieldMap {
    eval: Arc<EvalFn>,
    exact_partials: Option<Arc<PartialsFn>>,
}

impl FieldMap {
    pub fn new<F>(eval: F) -> FieldMap
    where
        F: Fn(&SpacetimePoint) -> Multivector + Send + Sync + 'static,
    {
        FieldMap {
            eval: Arc::new(eval),
            exact_partials: None,
        }
    }

    pub fn with_partials<F, G>(eval: F, partials: G) -> FieldMap
    where
        F: Fn(&SpacetimePoint) -> Multivector + Send + Sync + 'static,
        G: Fn(&SpacetimePoint) -> [Multivector; 4] + Send + Sync + 'static,
    {
        FieldMap {
            eval: Arc::new(eval),
            exact_partials: Some(Arc::new(partials)),
        }
    }

    pub fn constant(value: Multivector) -> FieldMap {
        FieldMap::with_partials(move |_| value, |_| [Multivector::ZERO; 4])
    }

    pub fn zero() -> FieldMap {
        FieldMap::constant(Multivector::ZERO)
    }

    pub fn eval(&self, x: &SpacetimePoint) -> Multivector {
        (self.eval)(x)
    }

    pub fn has_exact_partials(&self) -> bool {
        self.exact_partials.is_some()
    }
}

/// Numerical (or exact, when available) partial derivative of the field with
/// respect to x^mu.
pub fn partial(
    field: &FieldMap,
    mu: usize,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
) -> Result<Multivector, Error> {
    if mu > 3 {
        return Err(Error::Argument(format!("coordinate index {mu} out of range")));
    }
    stencil.validate()?;
    if let Some(exact) = &field.exact_partials {
        let d = exact(point)[mu];
        if !d.is_finite() {
            return Err(Error::Numeric(format!("non-finite exact partial at {point:?}")));
        }
        return Ok(d);
    }
    let h = stencil.h;
    let sample = |offset: f64| -> Result<Multivector, Error> {
        let mut x = *point;
        x[mu] += offset;
        let v = field.eval(&x);
        if !v.is_finite() {
            return Err(Error::Numeric(format!("non-finite field sample at {x:?}")));
        }
        Ok(v)
    };
    let d = match stencil.order {
        2 => (sample(h)? - sample(-h)?) * (0.5 / h),
        4 => {
            (sample(-2.0 * h)? - sample(2.0 * h)? + (sample(h)? - sample(-h)?) * 8.0)
                * (1.0 / (12.0 * h))
        }
        _ => unreachable!("validated above"),
    };
    Ok(d)
}

/// Dirac operator: sum over mu of gamma^mu times the partial derivative.
pub fn dirac(
    field: &FieldMap,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
) -> Result<Multivector, Error> {
    let mut acc = Multivector::ZERO;
    for mu in 0..4 {
        acc = acc + Multivector::gamma(mu).geometric_product(&partial(field, mu, point, stencil)?);
    }
    Ok(acc)
}

fn homogeneous_grade_at(field: &FieldMap, point: &SpacetimePoint) -> Result<usize, Error> {
    field
        .eval(point)
        .homogeneous_grade(1e-12)
        .ok_or_else(|| Error::Argument("field is not grade-homogeneous".into()))
}

/// Exterior derivative of a grade-p field: the grade-(p+1) part of the Dirac
/// operator.
pub fn exterior_d(
    field: &FieldMap,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
) -> Result<Multivector, Error> {
    let p = homogeneous_grade_at(field, point)?;
    if p == 4 {
        return Ok(Multivector::ZERO);
    }
    Ok(dirac(field, point, stencil)?.grade(p + 1))
}

/// Coderivative of a grade-p field: minus the grade-(p-1) part of the Dirac
/// operator.
pub fn coderivative(
    field: &FieldMap,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
) -> Result<Multivector, Error> {
    let p = homogeneous_grade_at(field, point)?;
    if p == 0 {
        return Ok(Multivector::ZERO);
    }
    Ok(-(dirac(field, point, stencil)?.grade(p - 1)))
}

/// Coderivative computed through the Hodge route
/// `delta A_p = (-1)^p star^{-1} d star A_p`; agrees with [`coderivative`] to
/// stencil tolerance and serves as its cross-check.
pub fn coderivative_hodge_route(
    field: &FieldMap,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
    tau: &VolumeElement,
) -> Result<Multivector, Error> {
    let p = homogeneous_grade_at(field, point)?;
    if p == 0 {
        return Ok(Multivector::ZERO);
    }
    let tau = *tau;
    let starred = FieldMap::new({
        let inner = field.clone();
        move |x: &SpacetimePoint| {
            *pair_hodge(&PairForm::project(&inner.eval(x), p), &tau).value()
        }
    });
    let d_starred = exterior_d(&starred, point, stencil)?;
    let back = pair_hodge_inverse(&PairForm::project(&d_starred, 4 - p + 1), &tau);
    let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
    Ok(*back.value() * sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn scalar_field<F>(f: F) -> FieldMap
    where
        F: Fn(&SpacetimePoint) -> f64 + Send + Sync + 'static,
    {
        FieldMap::new(move |x| Multivector::scalar(f(x)))
    }

    #[test]
    fn partial_of_linear_scalar() {
        let field = scalar_field(|x| x[1]);
        let st = StencilConfig::default();
        let d = partial(&field, 1, &[0.3, -0.2, 4.0, 1.0], &st).unwrap();
        assert!((d - Multivector::scalar(1.0)).norm_inf() < 1e-9);
        let d0 = partial(&field, 0, &[0.0; 4], &st).unwrap();
        assert!(d0.norm_inf() < 1e-12);
    }

    #[test]
    fn partial_of_constant_is_zero() {
        let field = FieldMap::new(|_| Multivector::gamma5() * 2.0);
        let st = StencilConfig::default();
        for mu in 0..4 {
            assert!(partial(&field, mu, &[1.0; 4], &st).unwrap().norm_inf() < 1e-12);
        }
    }

    #[test]
    fn partial_of_sine_matches_taylor_bound() {
        let field = scalar_field(|x| x[0].sin());
        let st = StencilConfig::default();
        let d = partial(&field, 0, &[0.0; 4], &st).unwrap();
        // central difference truncation: |error| <= h^2/6
        let err = (d.scalar_part() - 1.0).abs();
        assert!(err <= st.h * st.h / 6.0 + 1e-12, "error {err}");
    }

    #[test]
    fn order_four_is_more_accurate() {
        let field = scalar_field(|x| (2.0 * x[2]).sin());
        let p: SpacetimePoint = [0.1, 0.2, 0.3, 0.4];
        let exact = 2.0 * (2.0 * p[2]).cos();
        let e2 = (partial(&field, 2, &p, &StencilConfig { h: 1e-2, order: 2 })
            .unwrap()
            .scalar_part()
            - exact)
            .abs();
        let e4 = (partial(&field, 2, &p, &StencilConfig { h: 1e-2, order: 4 })
            .unwrap()
            .scalar_part()
            - exact)
            .abs();
        assert!(e4 < e2 / 100.0, "e2={e2} e4={e4}");
    }

    #[test]
    fn exact_partials_take_precedence() {
        let field = FieldMap::with_partials(
            |x| Multivector::scalar(x[3] * x[3]),
            |x| {
                [
                    Multivector::ZERO,
                    Multivector::ZERO,
                    Multivector::ZERO,
                    Multivector::scalar(2.0 * x[3]),
                ]
            },
        );
        let st = StencilConfig::default();
        let d = partial(&field, 3, &[0.0, 0.0, 0.0, 1.5], &st).unwrap();
        assert_eq!(d.scalar_part(), 3.0);
    }

    #[test]
    fn invalid_stencil_rejected() {
        let field = FieldMap::zero();
        assert!(partial(&field, 0, &[0.0; 4], &StencilConfig { h: 0.0, order: 2 }).is_err());
        assert!(partial(&field, 0, &[0.0; 4], &StencilConfig { h: 1e-3, order: 3 }).is_err());
        assert!(partial(&field, 7, &[0.0; 4], &StencilConfig::default()).is_err());
    }

    #[test]
    fn dirac_of_coordinate_scalar_is_gamma() {
        let field = scalar_field(|x| x[1]);
        let st = StencilConfig::default();
        let d = dirac(&field, &[0.5, 0.5, 0.5, 0.5], &st).unwrap();
        assert!((d - Multivector::gamma(1)).norm_inf() < 1e-9);
    }

    #[test]
    fn dirac_of_constant_is_zero() {
        let field = FieldMap::constant(Multivector::gamma(2) + Multivector::scalar(3.0));
        let st = StencilConfig::default();
        assert!(dirac(&field, &[0.0; 4], &st).unwrap().norm_inf() < 1e-12);
    }

    #[test]
    fn d_of_coordinate_one_form() {
        // d(x^0 gamma^1) = gamma^0 ^ gamma^1
        let field = FieldMap::new(|x| Multivector::gamma(1) * x[0]);
        let st = StencilConfig::default();
        let d = exterior_d(&field, &[0.2, 0.4, 0.6, 0.8], &st).unwrap();
        let expected = Multivector::gamma(0).outer(&Multivector::gamma(1));
        assert!((d - expected).norm_inf() < 1e-9);
    }

    #[test]
    fn d_squared_vanishes() {
        let st = StencilConfig::default();
        let p = [0.3, -0.1, 0.7, 0.2];
        // A = sin(x0) x1 gamma^2
        let field = FieldMap::new(|x: &SpacetimePoint| Multivector::gamma(2) * (x[0].sin() * x[1]));
        let da = FieldMap::new(move |x: &SpacetimePoint| {
            exterior_d(&field, x, &StencilConfig::default()).unwrap()
        });
        let dda = exterior_d(&da, &p, &st).unwrap();
        assert!(dda.norm_inf() < 1e-6, "d^2 A = {dda:?}");
    }

    #[test]
    fn coderivative_of_scalar_is_zero() {
        let field = scalar_field(|x| x[0] * x[1]);
        let st = StencilConfig::default();
        assert!(coderivative(&field, &[1.0; 4], &st).unwrap().norm_inf() < 1e-12);
    }

    #[test]
    fn dirac_splits_into_d_minus_delta() {
        let st = StencilConfig::default();
        let p = [0.4, 0.1, -0.3, 0.9];
        let field = FieldMap::new(|x: &SpacetimePoint| {
            Multivector::gamma(0).outer(&Multivector::gamma(1)) * (x[2] * x[2])
                + Multivector::gamma(2).outer(&Multivector::gamma(3)) * (x[0] * x[1])
        });
        let full = dirac(&field, &p, &st).unwrap();
        let d = exterior_d(&field, &p, &st).unwrap();
        let delta = coderivative(&field, &p, &st).unwrap();
        assert!((full - (d - delta)).norm_inf() < 1e-12);
    }

    #[test]
    fn hodge_route_matches_grade_projection_route() {
        use crate::kernel::{blade_grade, BASIS_SIZE};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let st = StencilConfig::default();
        let tau = VolumeElement::positive();
        for p in 1..=4 {
            for _ in 0..5 {
                // random polynomial field of grade p: per-blade quadratics
                let mut coeff: Vec<(usize, [f64; 4], [f64; 4])> = Vec::new();
                for mask in 0..BASIS_SIZE {
                    if blade_grade(mask) == p {
                        let mut lin = [0.0; 4];
                        let mut quad = [0.0; 4];
                        for k in 0..4 {
                            lin[k] = rng.gen_range(-1.0..1.0);
                            quad[k] = rng.gen_range(-1.0..1.0);
                        }
                        coeff.push((mask, lin, quad));
                    }
                }
                let terms = coeff.clone();
                let field = FieldMap::new(move |x: &SpacetimePoint| {
                    let mut out = Multivector::ZERO;
                    for (mask, lin, quad) in &terms {
                        let mut v = 0.0;
                        for k in 0..4 {
                            v += lin[k] * x[k] + quad[k] * x[k] * x[k];
                        }
                        out = out + Multivector::basis_blade(*mask) * v;
                    }
                    out
                });
                let point = [
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                ];
                let direct = coderivative(&field, &point, &st).unwrap();
                let via_hodge = coderivative_hodge_route(&field, &point, &st, &tau).unwrap();
                assert!(
                    (direct - via_hodge).norm_inf() < 1e-6,
                    "grade {p}: {direct:?} vs {via_hodge:?}"
                );
            }
        }
    }

    #[test]
    fn stencil_convergence_second_order() {
        // delta(d u) = -box(u) vanishes for the harmonic u = sin(x1) sinh(x2);
        // the discrete residual drops ~4x when h halves
        let p = [0.3, -0.1, 0.7, 0.2];
        let field =
            FieldMap::new(|x: &SpacetimePoint| Multivector::scalar(x[1].sin() * x[2].sinh()));
        let residual = |h: f64| {
            let field = field.clone();
            let du = FieldMap::new(move |x: &SpacetimePoint| {
                exterior_d(&field, x, &StencilConfig { h, order: 2 }).unwrap()
            });
            coderivative(&du, &p, &StencilConfig { h, order: 2 })
                .unwrap()
                .norm_inf()
        };
        let r1 = residual(2e-2);
        let r2 = residual(1e-2);
        let ratio = r1 / r2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio} (r1={r1}, r2={r2})");
    }
}
