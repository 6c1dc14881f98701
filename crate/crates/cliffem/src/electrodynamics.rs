//! Maxwell's equations in three equivalent formulations, currents and charge
//! integrals, constitutive tensors, the magnetic-current generalization, and
//! the retarded-potential solver.
//!
//! Conventions: Heaviside-Lorentz units with c = 1, so the engineering
//! equations read `div E = rho` with no 4 pi, and the Green function carries
//! the 1/(4 pi) normalization. The field strength is stored with blade
//! coefficients equal to the covariant components F_{mu nu}; the current
//! 1-form is `J = rho gamma^0 + j^k gamma_k`, whose blade coefficients are
//! the covariant J_mu.

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::calculus::{dirac, exterior_d, FieldMap, SpacetimePoint, StencilConfig};
use crate::forms::{
    axion_convert, integrate_box3, pair_hodge, pair_hodge_inverse, ImpairForm, PairForm, Parity,
    Sign, VolumeElement,
};
use crate::kernel::Multivector;
use crate::linalg::{det4, inv4, symmetric_eigenvalues, Mat4, MINKOWSKI};
use crate::Error;

const B01: usize = 0b0011;
const B02: usize = 0b0101;
const B03: usize = 0b1001;
const B12: usize = 0b0110;
const B13: usize = 0b1010;
const B23: usize = 0b1100;
const B123: usize = 0b1110;

/// Builds the field-strength 2-form from Cartesian electric and magnetic
/// components: F^{i0} = E_i and F^{ij} = -eps_{ijk} B_k, stored covariantly.
pub fn assemble_f(e: &[f64; 3], b: &[f64; 3]) -> PairForm {
    let mut mv = Multivector::ZERO;
    mv.coeffs[B01] = e[0];
    mv.coeffs[B02] = e[1];
    mv.coeffs[B03] = e[2];
    mv.coeffs[B23] = -b[0];
    mv.coeffs[B13] = b[1];
    mv.coeffs[B12] = -b[2];
    PairForm::project(&mv, 2)
}

/// Inverse of [`assemble_f`]: Cartesian (E, B) from a 2-form.
pub fn split_f(f: &PairForm) -> ([f64; 3], [f64; 3]) {
    let c = &f.value().coeffs;
    (
        [c[B01], c[B02], c[B03]],
        [-c[B23], c[B13], -c[B12]],
    )
}

/// Builds the current 1-form from charge density and 3-current:
/// `J = rho gamma^0 + j^k gamma_k`.
pub fn current_one_form(rho: f64, j: &[f64; 3]) -> Multivector {
    let mut mv = Multivector::ZERO;
    mv.coeffs[0b0001] = rho;
    mv.coeffs[0b0010] = -j[0];
    mv.coeffs[0b0100] = -j[1];
    mv.coeffs[0b1000] = -j[2];
    mv
}

/// Charge density and 3-current back from a current 1-form.
pub fn split_current(j_mv: &Multivector) -> (f64, [f64; 3]) {
    let c = &j_mv.coeffs;
    (c[0b0001], [-c[0b0010], -c[0b0100], -c[0b1000]])
}

/// Spatial support declaration of a smooth source: a ball of the given
/// radius around a (possibly uniformly moving) center.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Support {
    pub center: [f64; 3],
    pub velocity: [f64; 3],
    pub radius: f64,
}

impl Support {
    pub fn center_at(&self, t: f64) -> [f64; 3] {
        [
            self.center[0] + self.velocity[0] * t,
            self.center[1] + self.velocity[1] * t,
            self.center[2] + self.velocity[2] * t,
        ]
    }
}

/// A sampled point-charge trace used by the particle current variant.
#[derive(Clone, Debug)]
pub struct ParticleTrace {
    pub q: f64,
    /// Worldline samples (t, x, y, z), ordered by t.
    pub points: Vec<SpacetimePoint>,
    /// Exclusion radius: field evaluation this close to the trace is a
    /// domain error (the distributional current cannot be sampled).
    pub exclusion: f64,
}

impl ParticleTrace {
    pub fn position_at(&self, t: f64) -> Option<[f64; 3]> {
        if self.points.is_empty() {
            return None;
        }
        let first = &self.points[0];
        let last = &self.points[self.points.len() - 1];
        if t < first[0] || t > last[0] {
            return None;
        }
        let idx = self.points.partition_point(|p| p[0] <= t);
        let (a, b) = if idx == 0 {
            (&self.points[0], &self.points[0])
        } else if idx >= self.points.len() {
            (last, last)
        } else {
            (&self.points[idx - 1], &self.points[idx])
        };
        let dt = b[0] - a[0];
        let w = if dt > 0.0 { (t - a[0]) / dt } else { 0.0 };
        Some([
            a[1] + w * (b[1] - a[1]),
            a[2] + w * (b[2] - a[2]),
            a[3] + w * (b[3] - a[3]),
        ])
    }
}

/// An electromagnetic source: either a smooth current field with declared
/// spatial support, or a list of sampled point-charge traces.
#[derive(Clone)]
pub enum Current {
    Smooth {
        field: FieldMap,
        support: Option<Support>,
        charge: Option<f64>,
    },
    Particles(Vec<ParticleTrace>),
}

impl Current {
    pub fn zero() -> Current {
        Current::Smooth {
            field: FieldMap::zero(),
            support: Some(Support {
                center: [0.0; 3],
                velocity: [0.0; 3],
                radius: 1.0,
            }),
            charge: Some(0.0),
        }
    }

    /// A Gaussian charge blob of total charge q and width sigma, in uniform
    /// motion. The density is the exact Lorentz boost of the static blob, so
    /// the current is conserved identically.
    pub fn gaussian_blob(
        q: f64,
        sigma: f64,
        center: [f64; 3],
        velocity: [f64; 3],
    ) -> Result<Current, Error> {
        if !(sigma > 0.0) {
            return Err(Error::Argument(format!("blob width {sigma} must be positive")));
        }
        let v2 = velocity.iter().map(|v| v * v).sum::<f64>();
        if v2 >= 1.0 {
            return Err(Error::Argument("blob speed must be below 1".into()));
        }
        let gamma = 1.0 / (1.0 - v2).sqrt();
        let norm = q / ((2.0 * std::f64::consts::PI).powf(1.5) * sigma.powi(3));
        let field = FieldMap::new(move |x: &SpacetimePoint| {
            let t = x[0];
            let mut d = [x[1] - center[0], x[2] - center[1], x[3] - center[2]];
            // rest-frame displacement: contract along v by gamma
            if v2 > 0.0 {
                let vdotd = d[0] * velocity[0] + d[1] * velocity[1] + d[2] * velocity[2];
                let par = vdotd / v2;
                for k in 0..3 {
                    d[k] += ((gamma - 1.0) * par - gamma * t) * velocity[k];
                }
            }
            let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            let rho_rest = norm * (-r2 / (2.0 * sigma * sigma)).exp();
            let rho = gamma * rho_rest;
            current_one_form(rho, &[rho * velocity[0], rho * velocity[1], rho * velocity[2]])
        });
        // rest support 6 sigma; the boost only contracts it
        Ok(Current::Smooth {
            field,
            support: Some(Support {
                center,
                velocity,
                radius: 6.0 * sigma,
            }),
            charge: Some(q),
        })
    }

    pub fn smooth(field: FieldMap, support: Option<Support>, charge: Option<f64>) -> Current {
        Current::Smooth {
            field,
            support,
            charge,
        }
    }

    /// Current 1-form at a point. Particle variants are distributional: they
    /// evaluate to zero off their traces and error within the exclusion
    /// radius.
    pub fn eval(&self, x: &SpacetimePoint) -> Result<Multivector, Error> {
        match self {
            Current::Smooth { field, .. } => Ok(field.eval(x)),
            Current::Particles(traces) => {
                for trace in traces {
                    if let Some(p) = trace.position_at(x[0]) {
                        let d2 = (x[1] - p[0]).powi(2)
                            + (x[2] - p[1]).powi(2)
                            + (x[3] - p[2]).powi(2);
                        if d2 < trace.exclusion * trace.exclusion {
                            return Err(Error::Argument(format!(
                                "point {x:?} lies on a worldline support"
                            )));
                        }
                    }
                }
                Ok(Multivector::ZERO)
            }
        }
    }
}

/// Residuals of the three formulations at one point, all zero on solutions.
#[derive(Clone, Copy, Debug)]
pub struct MaxwellResidual {
    /// dF (grade 3).
    pub homogeneous: Multivector,
    /// delta F + J (grade 1).
    pub inhomogeneous: Multivector,
    /// dirac(F) - J.
    pub clifford: Multivector,
    /// The impair-formulation residual d(impair star F) + impair star J,
    /// converted back to a pair 1-form; equals `inhomogeneous` on smooth
    /// fields up to rounding.
    pub impair_inhomogeneous: Multivector,
}

impl MaxwellResidual {
    pub fn norms(&self) -> [f64; 4] {
        [
            self.homogeneous.norm_inf(),
            self.inhomogeneous.norm_inf(),
            self.clifford.norm_inf(),
            self.impair_inhomogeneous.norm_inf(),
        ]
    }

    pub fn max_norm(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }
}

/// Evaluates all three Maxwell-equation formulations at a point.
pub fn maxwell_residual(
    f: &FieldMap,
    j: &Current,
    point: &SpacetimePoint,
    tau: &VolumeElement,
    stencil: &StencilConfig,
) -> Result<MaxwellResidual, Error> {
    let j_mv = j.eval(point)?;
    let df_full = dirac(f, point, stencil)?;
    let homogeneous = df_full.grade(3);
    let inhomogeneous = -df_full.grade(1) + j_mv;
    let clifford = df_full - j_mv;

    // impair route: d(star F) + star J as an impair 3-form, then back to a
    // pair 1-form through the orientation scalar and the inverse pair star
    let positive = VolumeElement::positive();
    let excitation_rep = FieldMap::new({
        let f = f.clone();
        move |x: &SpacetimePoint| {
            *pair_hodge(&PairForm::project(&f.eval(x), 2), &positive).value()
        }
    });
    let d_excitation = dirac(&excitation_rep, point, stencil)?.grade(3);
    let star_j = pair_hodge(&PairForm::project(&j_mv, 1), &positive);
    let impair_res = ImpairForm::new(
        PairForm::project(&(d_excitation + *star_j.value()), 3),
        Sign::Plus,
    );
    let pair_res = axion_convert(&impair_res, &tau.axion_scalar())?;
    let impair_inhomogeneous = *pair_hodge_inverse(&pair_res, tau).value();

    Ok(MaxwellResidual {
        homogeneous,
        inhomogeneous,
        clifford,
        impair_inhomogeneous,
    })
}

/// Residual of the magnetic-monopole generalization
/// `dirac(F) = J_e - star J_m`.
pub fn generalized_residual(
    f: &FieldMap,
    j_e: &Current,
    j_m: &Current,
    point: &SpacetimePoint,
    tau: &VolumeElement,
    stencil: &StencilConfig,
) -> Result<Multivector, Error> {
    let je = j_e.eval(point)?;
    let jm = j_m.eval(point)?;
    let star_jm = pair_hodge(&PairForm::project(&jm, 1), tau);
    Ok(dirac(f, point, stencil)? - je + *star_jm.value())
}

/// A constant-time integration slice.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TimeSlice {
    pub t: f64,
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl TimeSlice {
    pub fn cube(t: f64, center: &[f64; 3], half_width: f64) -> TimeSlice {
        TimeSlice {
            t,
            lo: [
                center[0] - half_width,
                center[1] - half_width,
                center[2] - half_width,
            ],
            hi: [
                center[0] + half_width,
                center[1] + half_width,
                center[2] + half_width,
            ],
        }
    }

    fn contains_ball(&self, center: &[f64; 3], radius: f64) -> bool {
        (0..3).all(|k| center[k] - radius >= self.lo[k] && center[k] + radius <= self.hi[k])
    }
}

/// Total charge on a constant-time slice: the integral of star J over the
/// slice. The pair version flips sign with the chart orientation; the impair
/// version does not.
pub fn charge_integral(
    j: &Current,
    slice: &TimeSlice,
    chart_orientation: Sign,
    parity: Parity,
    points_per_axis: usize,
) -> Result<f64, Error> {
    match j {
        Current::Particles(traces) => {
            let mut total = 0.0;
            for trace in traces {
                if let Some(p) = trace.position_at(slice.t) {
                    if (0..3).all(|k| p[k] >= slice.lo[k] && p[k] <= slice.hi[k]) {
                        total += trace.q;
                    }
                }
            }
            Ok(match parity {
                Parity::Pair => chart_orientation.factor() * total,
                Parity::Impair => total,
            })
        }
        Current::Smooth { field, support, .. } => {
            if let Some(s) = support {
                if !slice.contains_ball(&s.center_at(slice.t), s.radius) {
                    return Err(Error::Argument(
                        "slice box does not contain the source support".into(),
                    ));
                }
            }
            let positive = VolumeElement::positive();
            let t = slice.t;
            let density = |y: &[f64; 3]| {
                let j_mv = field.eval(&[t, y[0], y[1], y[2]]);
                pair_hodge(&PairForm::project(&j_mv, 1), &positive)
                    .value()
                    .coeffs[B123]
            };
            let raw = integrate_box3(density, &slice.lo, &slice.hi, points_per_axis)?;
            Ok(match parity {
                Parity::Pair => chart_orientation.factor() * raw,
                Parity::Impair => raw,
            })
        }
    }
}

/// Ordered bivector index pairs for the 6-dimensional representation:
/// (01, 02, 03, 23, 31, 12). Complementary pairs sit three slots apart and
/// the Levi-Civita sign across each complementary pair is +1.
pub const BIVECTOR_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

fn six_from_form(f: &Multivector) -> [f64; 6] {
    let c = &f.coeffs;
    [c[B01], c[B02], c[B03], c[B23], -c[B13], c[B12]]
}

fn form_from_six(s: &[f64; 6]) -> Multivector {
    let mut mv = Multivector::ZERO;
    mv.coeffs[B01] = s[0];
    mv.coeffs[B02] = s[1];
    mv.coeffs[B03] = s[2];
    mv.coeffs[B23] = s[3];
    mv.coeffs[B13] = -s[4];
    mv.coeffs[B12] = s[5];
    mv
}

/// The 6x6 matrix of the totally antisymmetric (axion) tensor in the fixed
/// bivector basis.
fn eps6() -> [[f64; 6]; 6] {
    let mut m = [[0.0; 6]; 6];
    for (i, row) in m.iter_mut().enumerate() {
        row[(i + 3) % 6] = 1.0;
    }
    m
}

/// A linear constitutive tensor: the rank-4 chi with antisymmetric index
/// pairs, stored over the fixed bivector basis. The excitation density is
/// `G^{mu nu} = (1/2) chi^{mu nu rho sigma} F_{rho sigma}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstitutiveTensor {
    pub chi: [[f64; 6]; 6],
}

/// Principal/skewon/axion split of a constitutive tensor.
#[derive(Clone, Copy, Debug)]
pub struct ConstitutiveParts {
    pub principal: ConstitutiveTensor,
    pub skewon: ConstitutiveTensor,
    pub axion: f64,
}

impl ConstitutiveParts {
    pub fn axion_tensor(&self) -> ConstitutiveTensor {
        ConstitutiveTensor::axion(self.axion)
    }
}

impl ConstitutiveTensor {
    pub fn identity() -> ConstitutiveTensor {
        let mut chi = [[0.0; 6]; 6];
        for (i, row) in chi.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        ConstitutiveTensor { chi }
    }

    /// The pure axion tensor a * eps^{mu nu rho sigma}.
    pub fn axion(a: f64) -> ConstitutiveTensor {
        let mut chi = eps6();
        for row in chi.iter_mut() {
            for v in row.iter_mut() {
                *v *= a;
            }
        }
        ConstitutiveTensor { chi }
    }

    pub fn vacuum() -> ConstitutiveTensor {
        effective_metric_constitutive(&MINKOWSKI).expect("Minkowski metric is Lorentzian")
    }

    /// Applies the linear constitutive law, returning the raw contravariant
    /// excitation density components packed over the bivector blades.
    pub fn apply(&self, f: &PairForm) -> Result<PairForm, Error> {
        if f.grade() != 2 {
            return Err(Error::Argument("constitutive law expects a 2-form".into()));
        }
        let fv = six_from_form(f.value());
        let mut out = [0.0; 6];
        for (i, row) in self.chi.iter().enumerate() {
            out[i] = row.iter().zip(fv.iter()).map(|(c, v)| c * v).sum();
        }
        Ok(PairForm::project(&form_from_six(&out), 2))
    }

    /// Splits into principal (symmetric, axion-free; 20 dimensions), skewon
    /// (antisymmetric; 15), and axion (1) parts, which re-sum exactly.
    pub fn decompose(&self) -> ConstitutiveParts {
        let mut axion = 0.0;
        for i in 0..6 {
            axion += self.chi[i][(i + 3) % 6];
        }
        axion /= 6.0;
        let eps = eps6();
        let mut principal = [[0.0; 6]; 6];
        let mut skewon = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                skewon[i][j] = 0.5 * (self.chi[i][j] - self.chi[j][i]);
                principal[i][j] =
                    0.5 * (self.chi[i][j] + self.chi[j][i]) - axion * eps[i][j];
            }
        }
        ConstitutiveParts {
            principal: ConstitutiveTensor { chi: principal },
            skewon: ConstitutiveTensor { chi: skewon },
            axion,
        }
    }

    pub fn add(&self, other: &ConstitutiveTensor) -> ConstitutiveTensor {
        let mut chi = self.chi;
        for i in 0..6 {
            for j in 0..6 {
                chi[i][j] += other.chi[i][j];
            }
        }
        ConstitutiveTensor { chi }
    }

    pub fn max_abs_diff(&self, other: &ConstitutiveTensor) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                m = m.max((self.chi[i][j] - other.chi[i][j]).abs());
            }
        }
        m
    }
}

/// Converts raw contravariant excitation density components into the
/// excitation 2-form: `G_{alpha beta} = (1/2) eps_{alpha beta mu nu}
/// G-check^{mu nu}` with eps_{0123} = +1 in the positive chart. For the
/// vacuum tensor the full pipeline reproduces the Hodge dual of F.
pub fn density_to_form(density: &PairForm) -> Result<PairForm, Error> {
    if density.grade() != 2 {
        return Err(Error::Argument("density must be packed as a 2-form".into()));
    }
    let d = six_from_form(density.value());
    let mut g = [0.0; 6];
    for (i, slot) in g.iter_mut().enumerate() {
        *slot = d[(i + 3) % 6];
    }
    Ok(PairForm::project(&form_from_six(&g), 2))
}

/// The constitutive tensor of an effective Lorentzian metric:
/// `chi^{l n s k} = sqrt(|det g|) (g^{ls} g^{nk} - g^{lk} g^{ns})`.
pub fn effective_metric_constitutive(g: &Mat4) -> Result<ConstitutiveTensor, Error> {
    for i in 0..4 {
        for j in 0..4 {
            if (g[i][j] - g[j][i]).abs() > 1e-12 * (1.0 + g[i][j].abs()) {
                return Err(Error::Argument("metric must be symmetric".into()));
            }
        }
    }
    let det = det4(g);
    if !(det < 0.0) {
        return Err(Error::Argument("metric must be Lorentzian (negative determinant)".into()));
    }
    let positive = symmetric_eigenvalues(g).iter().filter(|&&e| e > 0.0).count();
    if positive != 1 {
        return Err(Error::Argument("metric must have signature (+,-,-,-)".into()));
    }
    let inv = inv4(g).ok_or_else(|| Error::Argument("metric is singular".into()))?;
    let scale = det.abs().sqrt();
    let mut chi = [[0.0; 6]; 6];
    for (i, &(l, n)) in BIVECTOR_PAIRS.iter().enumerate() {
        for (j, &(s, k)) in BIVECTOR_PAIRS.iter().enumerate() {
            chi[i][j] = scale * (inv[l][s] * inv[n][k] - inv[l][k] * inv[n][s]);
        }
    }
    Ok(ConstitutiveTensor { chi })
}

/// Quadrature settings for the retarded solver.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RetardedQuadrature {
    /// Grid points per axis over the source support cube.
    pub points_per_axis: usize,
    /// Stencil used to differentiate the potential into F.
    pub h: f64,
}

impl Default for RetardedQuadrature {
    fn default() -> RetardedQuadrature {
        RetardedQuadrature {
            points_per_axis: 48,
            h: 1e-3,
        }
    }
}

fn conservation_check(
    field: &FieldMap,
    support: &Support,
    stencil: &StencilConfig,
) -> Result<(), Error> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut peak: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for _ in 0..32 {
        let t = rng.gen_range(-1.0..1.0) * support.radius;
        let c = support.center_at(t);
        let x = [
            t,
            c[0] + rng.gen_range(-1.0..1.0) * support.radius,
            c[1] + rng.gen_range(-1.0..1.0) * support.radius,
            c[2] + rng.gen_range(-1.0..1.0) * support.radius,
        ];
        peak = peak.max(field.eval(&x).norm_inf());
        // div J = d rho / dt + div j, from the covariant blade coefficients
        let mut div = 0.0;
        for mu in 0..4 {
            let d = crate::calculus::partial(field, mu, &x, stencil)?;
            let sign = if mu == 0 { 1.0 } else { -1.0 };
            div += sign * d.coeffs[1 << mu];
        }
        worst = worst.max(div.abs());
    }
    if worst > 1e-6 * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::Argument(format!(
            "current is not conserved: sampled |div J| = {worst:.3e} vs peak |J| = {peak:.3e}"
        )));
    }
    Ok(())
}

/// Solves for F at a point from a smooth conserved current by the retarded
/// potential `A_mu(t,x) = (1/4 pi) int J_mu(t - R, y) / R d^3 y` followed by
/// the exterior derivative.
pub fn retarded_field(
    j: &Current,
    point: &SpacetimePoint,
    quadrature: &RetardedQuadrature,
) -> Result<PairForm, Error> {
    let (field, support) = match j {
        Current::Smooth {
            field,
            support: Some(s),
            ..
        } => (field, *s),
        Current::Smooth { support: None, .. } => {
            return Err(Error::Argument(
                "retarded solver needs a declared source support".into(),
            ))
        }
        Current::Particles(_) => {
            return Err(Error::Argument(
                "retarded solver accepts smooth currents only".into(),
            ))
        }
    };
    let n = quadrature.points_per_axis;
    if n == 0 {
        return Err(Error::Argument("quadrature needs at least one point per axis".into()));
    }
    conservation_check(field, &support, &StencilConfig { h: 1e-3, order: 4 })?;

    // Source cube: covers every y whose retarded-time source position can
    // reach it, for a uniformly moving support ball.
    let speed = support
        .velocity
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    if speed >= 1.0 {
        return Err(Error::Argument("support speed must be below 1".into()));
    }
    let c_now = support.center_at(point[0]);
    let r0 = ((point[1] - c_now[0]).powi(2)
        + (point[2] - c_now[1]).powi(2)
        + (point[3] - c_now[2]).powi(2))
    .sqrt();
    let half = (support.radius + speed * r0) / (1.0 - speed) + support.radius * 0.25;
    let step = 2.0 * half / n as f64;
    let weight = step * step * step / (4.0 * std::f64::consts::PI);

    let mut grid: Vec<[f64; 3]> = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                grid.push([
                    c_now[0] - half + (a as f64 + 0.5) * step,
                    c_now[1] - half + (b as f64 + 0.5) * step,
                    c_now[2] - half + (c as f64 + 0.5) * step,
                ]);
            }
        }
    }

    let field = field.clone();
    let potential = FieldMap::new(move |x: &SpacetimePoint| {
        let mut acc = Multivector::ZERO;
        for y in &grid {
            let r = ((x[1] - y[0]).powi(2) + (x[2] - y[1]).powi(2) + (x[3] - y[2]).powi(2))
                .sqrt()
                .max(1e-12);
            let src = field.eval(&[x[0] - r, y[0], y[1], y[2]]);
            acc = acc + src * (weight / r);
        }
        acc
    });

    let stencil = StencilConfig {
        h: quadrature.h,
        order: 2,
    };
    let f = exterior_d(&potential, point, &stencil)?;
    if !f.is_finite() {
        return Err(Error::Numeric("retarded quadrature produced non-finite field".into()));
    }
    Ok(PairForm::project(&f, 2))
}

/// Enclosed charge of a Gaussian blob inside radius r (exact).
pub fn gaussian_enclosed_charge(q: f64, sigma: f64, r: f64) -> f64 {
    use std::f64::consts::PI;
    let u = r / (std::f64::consts::SQRT_2 * sigma);
    q * (erf(u) - (2.0 / PI).sqrt() * (r / sigma) * (-r * r / (2.0 * sigma * sigma)).exp())
}

/// Maclaurin series below 3 (cancellation stays mild there), Laplace
/// continued fraction for the complement above; both near machine precision.
fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < 3.0 {
        let mut term = x;
        let mut sum = x;
        for k in 1..200 {
            term *= -x * x / k as f64;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return sum * 2.0 / std::f64::consts::PI.sqrt();
    }
    // erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut tail = 0.0;
    for n in (1..=80).rev() {
        tail = 0.5 * n as f64 / (x + tail);
    }
    let erfc = (-x * x).exp() / std::f64::consts::PI.sqrt() / (x + tail);
    1.0 - erfc
}

/// Analytic field of the static Gaussian blob: radial E with
/// `|E|(r) = q_enc(r) / (4 pi r^2)`, B = 0.
pub fn gaussian_blob_field(q: f64, sigma: f64, center: [f64; 3]) -> FieldMap {
    FieldMap::new(move |x: &SpacetimePoint| {
        let d = [x[1] - center[0], x[2] - center[1], x[3] - center[2]];
        let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if r < 1e-9 {
            return Multivector::ZERO;
        }
        let e_mag = gaussian_enclosed_charge(q, sigma, r) / (4.0 * std::f64::consts::PI * r * r);
        let e = [e_mag * d[0] / r, e_mag * d[1] / r, e_mag * d[2] / r];
        *assemble_f(&e, &[0.0; 3]).value()
    })
}

/// Coulomb field of a unit point charge at the origin (valid off the origin).
pub fn coulomb_field(q: f64) -> FieldMap {
    FieldMap::new(move |x: &SpacetimePoint| {
        let r2 = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        let r = r2.sqrt();
        if r < 1e-9 {
            return Multivector::ZERO;
        }
        let scale = q / (4.0 * std::f64::consts::PI * r2 * r);
        *assemble_f(&[scale * x[1], scale * x[2], scale * x[3]], &[0.0; 3]).value()
    })
}

/// Plane wave F = cos(t - z) (E = x-hat, B = y-hat), a vacuum solution.
pub fn plane_wave_field() -> FieldMap {
    FieldMap::new(|x: &SpacetimePoint| {
        let a = (x[0] - x[3]).cos();
        *assemble_f(&[a, 0.0, 0.0], &[0.0, a, 0.0]).value()
    })
}
