//! The Pauli (even) subalgebra of Cl(1,3) and the engineering 3D split.
//!
//! Relative vectors live on the basis `sigma_k = gamma^0 gamma^k`; the
//! relative pseudoscalar is `i = sigma_1 sigma_2 sigma_3 = -gamma5` in the
//! default convention. Flipping the convention to `i = +gamma5` models a
//! left-handed choice of spatial orientation: extracted magnetic fields and
//! cross products change sign while physical predictions stay put.

use crate::calculus::{dirac, partial, FieldMap, SpacetimePoint, StencilConfig};
use crate::electrodynamics::Current;
use crate::forms::PairForm;
use crate::kernel::Multivector;
use crate::Error;

const B23: usize = 0b1100;
const B13: usize = 0b1010;
const B12: usize = 0b0110;

/// Choice of relative pseudoscalar: `i = factor * gamma5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImaginaryConvention {
    /// Right-handed spatial frames: `i = -gamma5` (the default).
    MinusGamma5,
    /// Left-handed spatial frames: `i = +gamma5`.
    PlusGamma5,
}

impl Default for ImaginaryConvention {
    fn default() -> Self {
        ImaginaryConvention::MinusGamma5
    }
}

impl ImaginaryConvention {
    pub fn factor(&self) -> f64 {
        match self {
            ImaginaryConvention::MinusGamma5 => -1.0,
            ImaginaryConvention::PlusGamma5 => 1.0,
        }
    }

    pub fn flip(&self) -> ImaginaryConvention {
        match self {
            ImaginaryConvention::MinusGamma5 => ImaginaryConvention::PlusGamma5,
            ImaginaryConvention::PlusGamma5 => ImaginaryConvention::MinusGamma5,
        }
    }

    pub fn pseudoscalar(&self) -> Multivector {
        Multivector::gamma5() * self.factor()
    }
}

/// The relative basis vector `sigma_k = gamma^0 gamma^k`, k in 1..=3.
pub fn sigma(k: usize) -> Multivector {
    assert!((1..=3).contains(&k), "sigma index {k} out of range");
    Multivector::basis_blade(0b0001 | (1 << k))
}

/// A relative (spatial) vector on the sigma basis.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct RelativeVector(pub [f64; 3]);

impl RelativeVector {
    pub const ZERO: RelativeVector = RelativeVector([0.0; 3]);

    pub fn to_multivector(&self) -> Multivector {
        let mut mv = Multivector::ZERO;
        for k in 0..3 {
            mv.coeffs[0b0001 | (1 << (k + 1))] = self.0[k];
        }
        mv
    }

    /// Extracts the sigma components of an even multivector.
    pub fn from_multivector(mv: &Multivector) -> RelativeVector {
        RelativeVector([mv.coeffs[0b0011], mv.coeffs[0b0101], mv.coeffs[0b1001]])
    }

    pub fn dot(&self, other: &RelativeVector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

impl std::ops::Add for RelativeVector {
    type Output = RelativeVector;
    fn add(self, rhs: RelativeVector) -> RelativeVector {
        RelativeVector([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl std::ops::Sub for RelativeVector {
    type Output = RelativeVector;
    fn sub(self, rhs: RelativeVector) -> RelativeVector {
        RelativeVector([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl std::ops::Neg for RelativeVector {
    type Output = RelativeVector;
    fn neg(self) -> RelativeVector {
        RelativeVector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl std::ops::Mul<f64> for RelativeVector {
    type Output = RelativeVector;
    fn mul(self, rhs: f64) -> RelativeVector {
        RelativeVector([self.0[0] * rhs, self.0[1] * rhs, self.0[2] * rhs])
    }
}

/// An element of the even subalgebra split along the Pauli grades:
/// `scalar + vector.sigma + i pseudovector.sigma + i pseudoscalar`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PauliElement {
    pub scalar: f64,
    pub vector: RelativeVector,
    pub pseudovector: RelativeVector,
    pub pseudoscalar: f64,
}

/// Splits an even multivector along the Pauli grades. Errors on elements
/// with an odd part.
pub fn pauli_split(mv: &Multivector, i: ImaginaryConvention) -> Result<PauliElement, Error> {
    let odd = (mv.grade(1) + mv.grade(3)).norm_inf();
    if odd > 1e-12 {
        return Err(Error::Argument(format!(
            "element has an odd part of size {odd}"
        )));
    }
    let s = i.factor();
    Ok(PauliElement {
        scalar: mv.coeffs[0],
        vector: RelativeVector::from_multivector(mv),
        // i sigma_1 = s gamma^{23}, i sigma_2 = -s gamma^{13}, i sigma_3 = s gamma^{12}
        pseudovector: RelativeVector([
            s * mv.coeffs[B23],
            -s * mv.coeffs[B13],
            s * mv.coeffs[B12],
        ]),
        pseudoscalar: s * mv.coeffs[0b1111],
    })
}

impl PauliElement {
    pub fn to_multivector(&self, i: ImaginaryConvention) -> Multivector {
        let s = i.factor();
        let mut mv = self.vector.to_multivector();
        mv.coeffs[0] = self.scalar;
        mv.coeffs[B23] = s * self.pseudovector.0[0];
        mv.coeffs[B13] = -s * self.pseudovector.0[1];
        mv.coeffs[B12] = s * self.pseudovector.0[2];
        mv.coeffs[0b1111] = s * self.pseudoscalar;
        mv
    }
}

/// Splits a field strength into relative electric and magnetic vectors:
/// `F = E.sigma + i B.sigma`.
pub fn split_eb(f: &PairForm, i: ImaginaryConvention) -> (RelativeVector, RelativeVector) {
    let p = pauli_split(f.value(), i).expect("a 2-form is even");
    (p.vector, p.pseudovector)
}

/// Reassembles a field strength from relative vectors under the convention.
pub fn assemble_eb(e: &RelativeVector, b: &RelativeVector, i: ImaginaryConvention) -> PairForm {
    let p = PauliElement {
        vector: *e,
        pseudovector: *b,
        ..PauliElement::default()
    };
    PairForm::project(&p.to_multivector(i), 2)
}

/// Relative cross product `a x b = -i (a wedge b)`; handedness follows the
/// convention.
pub fn cross(a: &RelativeVector, b: &RelativeVector, i: ImaginaryConvention) -> RelativeVector {
    let (am, bm) = (a.to_multivector(), b.to_multivector());
    let wedge = (am.geometric_product(&bm) - bm.geometric_product(&am)) * 0.5;
    let product = i.pseudoscalar().geometric_product(&wedge) * -1.0;
    pauli_split(&product, i).expect("even by construction").vector
}

fn scalar_partial(
    f: &dyn Fn(&SpacetimePoint) -> f64,
    mu: usize,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
) -> Result<f64, Error> {
    let h = stencil.h;
    stencil.validate()?;
    let sample = |offset: f64| -> Result<f64, Error> {
        let mut x = *point;
        x[mu] += offset;
        let v = f(&x);
        if !v.is_finite() {
            return Err(Error::Numeric(format!("non-finite sample at {x:?}")));
        }
        Ok(v)
    };
    Ok(match stencil.order {
        2 => (sample(h)? - sample(-h)?) * (0.5 / h),
        4 => {
            (sample(-2.0 * h)? - sample(2.0 * h)? + (sample(h)? - sample(-h)?) * 8.0)
                / (12.0 * h)
        }
        _ => unreachable!("validated above"),
    })
}

fn vector_field_map(a: impl Fn(&SpacetimePoint) -> RelativeVector + Send + Sync + 'static) -> FieldMap {
    FieldMap::new(move |x: &SpacetimePoint| a(x).to_multivector())
}

/// Spatial gradient of a scalar field.
pub fn grad(
    f: impl Fn(&SpacetimePoint) -> f64 + Copy,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
) -> Result<RelativeVector, Error> {
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = scalar_partial(&f, k + 1, point, stencil)?;
    }
    Ok(RelativeVector(out))
}

/// Spatial divergence of a relative vector field.
pub fn div(
    a: impl Fn(&SpacetimePoint) -> RelativeVector + Send + Sync + 'static,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
) -> Result<f64, Error> {
    let map = vector_field_map(a);
    let mut acc = 0.0;
    for k in 0..3 {
        acc += RelativeVector::from_multivector(&partial(&map, k + 1, point, stencil)?).0[k];
    }
    Ok(acc)
}

/// Spatial curl `-i (nabla wedge A)`; handedness follows the convention.
pub fn curl(
    a: impl Fn(&SpacetimePoint) -> RelativeVector + Send + Sync + 'static,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
    i: ImaginaryConvention,
) -> Result<RelativeVector, Error> {
    let map = vector_field_map(a);
    let mut partials = [RelativeVector::ZERO; 3];
    for (k, slot) in partials.iter_mut().enumerate() {
        *slot = RelativeVector::from_multivector(&partial(&map, k + 1, point, stencil)?);
    }
    // standard curl, then the handedness sign
    let standard = RelativeVector([
        partials[1].0[2] - partials[2].0[1],
        partials[2].0[0] - partials[0].0[2],
        partials[0].0[1] - partials[1].0[0],
    ]);
    Ok(standard * (-i.factor()))
}

/// The four engineering residuals of Maxwell's equations in a frame:
/// Gauss, Ampere-Maxwell, Faraday, and no-monopole.
#[derive(Clone, Copy, Debug)]
pub struct EngineeringResiduals {
    /// `div E - rho`
    pub gauss: f64,
    /// `curl B - d_t E - j`
    pub ampere: RelativeVector,
    /// `curl E + d_t B`
    pub faraday: RelativeVector,
    /// `div B`
    pub monopole: f64,
}

impl EngineeringResiduals {
    pub fn max_norm(&self) -> f64 {
        self.gauss
            .abs()
            .max(self.ampere.norm_inf())
            .max(self.faraday.norm_inf())
            .max(self.monopole.abs())
    }
}

/// Evaluates the four vector-calculus residuals of a field configuration.
pub fn engineering_residuals(
    f: &FieldMap,
    j: &Current,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
    i: ImaginaryConvention,
) -> Result<EngineeringResiduals, Error> {
    let (fe, fb) = (f.clone(), f.clone());
    let e_field = move |x: &SpacetimePoint| split_eb(&PairForm::project(&fe.eval(x), 2), i).0;
    let b_field = move |x: &SpacetimePoint| split_eb(&PairForm::project(&fb.eval(x), 2), i).1;

    let j_mv = j.eval(point)?;
    let rho = j_mv.coeffs[0b0001];
    let j_rel = RelativeVector([
        -j_mv.coeffs[0b0010],
        -j_mv.coeffs[0b0100],
        -j_mv.coeffs[0b1000],
    ]);

    let map_e = vector_field_map(e_field.clone());
    let map_b = vector_field_map(b_field.clone());
    let dt_e = RelativeVector::from_multivector(&partial(&map_e, 0, point, stencil)?);
    let dt_b = RelativeVector::from_multivector(&partial(&map_b, 0, point, stencil)?);

    Ok(EngineeringResiduals {
        gauss: div(e_field.clone(), point, stencil)? - rho,
        ampere: curl(b_field.clone(), point, stencil, i)? - dt_e - j_rel,
        faraday: curl(e_field, point, stencil, i)? + dt_b,
        monopole: div(b_field, point, stencil)?,
    })
}

/// The Pauli split of `gamma_0 (dirac F - J)`; its grades reproduce the
/// engineering residuals up to a sign on the vector grade.
pub fn clifford_residual_split(
    f: &FieldMap,
    j: &Current,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
    i: ImaginaryConvention,
) -> Result<PauliElement, Error> {
    let residual = dirac(f, point, stencil)? - j.eval(point)?;
    pauli_split(&Multivector::gamma(0).geometric_product(&residual), i)
}

/// Magnetostatic field of an infinite straight wire along z carrying
/// current `amps`: `B = amps/(2 pi r) phi_hat`, zero E.
pub fn wire_field(amps: f64, i: ImaginaryConvention) -> FieldMap {
    FieldMap::new(move |x: &SpacetimePoint| {
        let r2 = x[1] * x[1] + x[2] * x[2];
        let scale = amps / (2.0 * std::f64::consts::PI * r2);
        let b = RelativeVector([-x[2] * scale, x[1] * scale, 0.0]);
        *assemble_eb(&RelativeVector::ZERO, &b, i).value()
    })
}

/// Observables of the wire scenario under a convention: the circulation of
/// the extracted B around a loop of the given radius, and the Lorentz force
/// `q (E + v x B)` on a test charge at `(radius, 0, 0)`.
#[derive(Clone, Copy, Debug)]
pub struct WireReport {
    pub circulation: f64,
    pub force: RelativeVector,
}

pub fn wire_experiment(
    f: &FieldMap,
    radius: f64,
    q: f64,
    v: &RelativeVector,
    i: ImaginaryConvention,
) -> Result<WireReport, Error> {
    if !(radius > 0.0) {
        return Err(Error::Argument(format!("loop radius {radius} must be positive")));
    }
    let eb_at = |x: &SpacetimePoint| split_eb(&PairForm::project(&f.eval(x), 2), i);
    let n = 4096;
    let mut circulation = 0.0;
    for k in 0..n {
        let phi = (k as f64 + 0.5) / n as f64 * 2.0 * std::f64::consts::PI;
        let x = [0.0, radius * phi.cos(), radius * phi.sin(), 0.0];
        let (_, b) = eb_at(&x);
        let dl = RelativeVector([-phi.sin(), phi.cos(), 0.0])
            * (2.0 * std::f64::consts::PI * radius / n as f64);
        circulation += b.dot(&dl);
    }
    let (e, b) = eb_at(&[0.0, radius, 0.0, 0.0]);
    let force = (e + cross(v, &b, i)) * q;
    Ok(WireReport { circulation, force })
}
