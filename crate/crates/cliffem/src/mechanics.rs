//! Electromagnetic stress-energy, force density, the conservation check,
//! relativistic particle pushing, and the orientation-flip experiment.
//!
//! Momenta and velocities are grade-1 multivectors stored, like currents,
//! with covariant blade coefficients: `p = p^mu gamma_mu`.

use std::sync::Arc;

use crate::calculus::{FieldMap, SpacetimePoint, StencilConfig};
use crate::electrodynamics::{charge_integral, Current, TimeSlice};
use crate::forms::{pair_hodge, ImpairForm, PairForm, Parity, Sign, VolumeElement};
use crate::kernel::{Multivector, METRIC};
use crate::Error;

/// One sample of a timelike worldline: proper time, event, unit 4-velocity.
#[derive(Clone, Copy, Debug)]
pub struct WorldlineSample {
    pub s: f64,
    pub z: SpacetimePoint,
    pub v: Multivector,
}

/// A sampled future-pointing timelike curve.
#[derive(Clone, Debug, Default)]
pub struct Worldline {
    pub samples: Vec<WorldlineSample>,
}

impl Worldline {
    pub fn validate(&self) -> Result<(), Error> {
        for sample in &self.samples {
            let v2 = sample.v.scalar_product(&sample.v);
            if (v2 - 1.0).abs() > 1e-9 {
                return Err(Error::Argument(format!("velocity not unit: v.v = {v2}")));
            }
            if sample.v.coeffs[0b0001] <= 0.0 {
                return Err(Error::Argument("velocity not future-pointing".into()));
            }
        }
        Ok(())
    }

    fn bracket(&self, t: f64) -> Result<(usize, usize, f64), Error> {
        if self.samples.is_empty() {
            return Err(Error::Argument("worldline has no samples".into()));
        }
        let t0 = self.samples[0].z[0];
        let t1 = self.samples[self.samples.len() - 1].z[0];
        if t < t0 - 1e-12 || t > t1 + 1e-12 {
            return Err(Error::Argument(format!(
                "time {t} outside sampled range [{t0}, {t1}]"
            )));
        }
        let idx = self.samples.partition_point(|s| s.z[0] <= t);
        if idx == 0 {
            return Ok((0, 0, 0.0));
        }
        if idx >= self.samples.len() {
            let last = self.samples.len() - 1;
            return Ok((last, last, 0.0));
        }
        let (a, b) = (idx - 1, idx);
        let dt = self.samples[b].z[0] - self.samples[a].z[0];
        let w = if dt > 0.0 {
            (t - self.samples[a].z[0]) / dt
        } else {
            0.0
        };
        Ok((a, b, w))
    }

    /// Linear interpolation of the event at coordinate time t.
    pub fn position_at_time(&self, t: f64) -> Result<SpacetimePoint, Error> {
        let (a, b, w) = self.bracket(t)?;
        let (za, zb) = (&self.samples[a].z, &self.samples[b].z);
        let mut z = [0.0; 4];
        for k in 0..4 {
            z[k] = za[k] + w * (zb[k] - za[k]);
        }
        Ok(z)
    }

    /// Linear interpolation of the 4-velocity at coordinate time t.
    pub fn velocity_at_time(&self, t: f64) -> Result<Multivector, Error> {
        let (a, b, w) = self.bracket(t)?;
        Ok(self.samples[a].v * (1.0 - w) + self.samples[b].v * w)
    }

    /// Maximum pointwise coordinate deviation against another worldline
    /// sampled on the same proper-time grid.
    pub fn max_deviation(&self, other: &Worldline) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.samples.iter().zip(other.samples.iter()) {
            for k in 0..4 {
                worst = worst.max((a.z[k] - b.z[k]).abs());
            }
        }
        worst
    }
}

/// A charged particle: mass, charge, and its (possibly single-sample)
/// worldline.
#[derive(Clone, Debug)]
pub struct ChargedParticle {
    pub m: f64,
    pub q: f64,
    pub worldline: Worldline,
}

impl ChargedParticle {
    /// Initializes a particle at an event with the given spatial momentum;
    /// the time component follows from the mass shell `p.p = m^2`.
    pub fn new(m: f64, q: f64, z0: SpacetimePoint, p_spatial: [f64; 3]) -> Result<ChargedParticle, Error> {
        if !(m > 0.0) {
            return Err(Error::Argument(format!("mass {m} must be positive")));
        }
        let p2 = p_spatial.iter().map(|p| p * p).sum::<f64>();
        let p0 = (m * m + p2).sqrt();
        let mut p = Multivector::ZERO;
        p.coeffs[0b0001] = p0;
        for k in 0..3 {
            p.coeffs[1 << (k + 1)] = -p_spatial[k];
        }
        let worldline = Worldline {
            samples: vec![WorldlineSample {
                s: 0.0,
                z: z0,
                v: p * (1.0 / m),
            }],
        };
        worldline.validate()?;
        Ok(ChargedParticle { m, q, worldline })
    }

    pub fn momentum(&self) -> Result<Multivector, Error> {
        let last = self
            .worldline
            .samples
            .last()
            .ok_or_else(|| Error::Argument("worldline has no samples".into()))?;
        Ok(last.v * self.m)
    }
}

/// Electromagnetic stress-energy at a point: the 1-forms
/// `T^alpha = (1/2) F gamma^alpha reverse(F)`, their Hodge duals, and the
/// component matrix `T^{alpha beta} = T^alpha . gamma^beta`.
#[derive(Clone, Debug)]
pub struct StressEnergy {
    pub forms: [Multivector; 4],
    pub dual_forms: [PairForm; 4],
    pub components: [[f64; 4]; 4],
}

pub fn stress_energy(f: &PairForm, tau: &VolumeElement) -> Result<StressEnergy, Error> {
    if f.grade() != 2 {
        return Err(Error::Argument("stress-energy expects a 2-form".into()));
    }
    let fv = f.value();
    let rev = fv.reverse();
    let mut forms = [Multivector::ZERO; 4];
    let mut components = [[0.0; 4]; 4];
    for (alpha, form) in forms.iter_mut().enumerate() {
        let t = fv
            .geometric_product(&Multivector::gamma(alpha))
            .geometric_product(&rev)
            * 0.5;
        *form = t.grade(1);
        for beta in 0..4 {
            components[alpha][beta] = form.scalar_product(&Multivector::gamma(beta));
        }
    }
    let dual_forms = [
        pair_hodge(&PairForm::project(&forms[0], 1), tau),
        pair_hodge(&PairForm::project(&forms[1], 1), tau),
        pair_hodge(&PairForm::project(&forms[2], 1), tau),
        pair_hodge(&PairForm::project(&forms[3], 1), tau),
    ];
    Ok(StressEnergy {
        forms,
        dual_forms,
        components,
    })
}

fn covariant_components(f: &Multivector) -> [[f64; 4]; 4] {
    let mut low = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let c = f.coeffs[(1 << mu) | (1 << nu)];
            low[mu][nu] = c;
            low[nu][mu] = -c;
        }
    }
    low
}

fn contravariant_components(f: &Multivector) -> [[f64; 4]; 4] {
    let low = covariant_components(f);
    let mut up = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            up[mu][nu] = METRIC[mu] * METRIC[nu] * low[mu][nu];
        }
    }
    up
}

/// Stress-energy components through the closed-form tensor expression
/// `T^{ab} = eta^{am} F_{ml} F^{lb} + (1/4) eta^{ab} F_{mn} F^{mn}`;
/// cross-checks the Clifford route.
pub fn stress_energy_components(f: &PairForm) -> [[f64; 4]; 4] {
    let low = covariant_components(f.value());
    let up = contravariant_components(f.value());
    let mut invariant = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            invariant += low[mu][nu] * up[mu][nu];
        }
    }
    let mut t = [[0.0; 4]; 4];
    for alpha in 0..4 {
        for beta in 0..4 {
            let mut s = 0.0;
            for lambda in 0..4 {
                s += METRIC[alpha] * low[alpha][lambda] * up[lambda][beta];
            }
            if alpha == beta {
                s += 0.25 * METRIC[alpha] * invariant;
            }
            t[alpha][beta] = s;
        }
    }
    t
}

/// Scalar coefficients `(gamma^alpha lcontr F) . J = J_nu F^{alpha nu}` of
/// the force density.
pub fn force_coefficients(f: &PairForm, j: &Multivector) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (alpha, slot) in out.iter_mut().enumerate() {
        *slot = Multivector::gamma(alpha)
            .left_contract(f.value())
            .scalar_product(j);
    }
    out
}

/// Pair density of force: `f^alpha = [(gamma^alpha lcontr F) . J] tau`.
pub fn force_density(f: &PairForm, j: &Multivector, tau: &VolumeElement) -> [Multivector; 4] {
    let c = force_coefficients(f, j);
    let vol = *tau.pair().value();
    [vol * c[0], vol * c[1], vol * c[2], vol * c[3]]
}

/// Impair variant: same coefficients against the impair volume element.
pub fn force_density_impair(
    f: &PairForm,
    j: &Multivector,
    tau_impair: &ImpairForm,
) -> [ImpairForm; 4] {
    let c = force_coefficients(f, j);
    let rep = *tau_impair.canonical_rep().value();
    let mk = |coeff: f64| ImpairForm::new(PairForm::project(&(rep * coeff), 4), Sign::Plus);
    [mk(c[0]), mk(c[1]), mk(c[2]), mk(c[3])]
}

/// Conservation residual: `max_alpha |d_nu T^{alpha nu} - J_nu F^{nu alpha}|`
/// with the divergence taken by finite differences.
pub fn divergence_check(
    f: &FieldMap,
    j: &Current,
    point: &SpacetimePoint,
    stencil: &StencilConfig,
) -> Result<f64, Error> {
    stencil.validate()?;
    let j_mv = j.eval(point)?;
    let up = contravariant_components(&f.eval(point));
    let mut rhs = [0.0; 4];
    for alpha in 0..4 {
        for nu in 0..4 {
            rhs[alpha] += j_mv.coeffs[1 << nu] * up[nu][alpha];
        }
    }
    let components_at = |x: &SpacetimePoint| -> [[f64; 4]; 4] {
        stress_energy_components(&PairForm::project(&f.eval(x), 2))
    };
    let h = stencil.h;
    let mut divergence = [0.0; 4];
    for nu in 0..4 {
        let mut plus = *point;
        let mut minus = *point;
        plus[nu] += h;
        minus[nu] -= h;
        let (tp, tm) = match stencil.order {
            2 => (components_at(&plus), components_at(&minus)),
            4 => {
                let mut p2 = *point;
                let mut m2 = *point;
                p2[nu] += 2.0 * h;
                m2[nu] -= 2.0 * h;
                let (tp1, tm1) = (components_at(&plus), components_at(&minus));
                let (tp2, tm2) = (components_at(&p2), components_at(&m2));
                let mut tp = [[0.0; 4]; 4];
                let mut tm = [[0.0; 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        // fourth-order combination folded into one pair
                        tp[a][b] = (8.0 * tp1[a][b] - tp2[a][b]) / 6.0;
                        tm[a][b] = (8.0 * tm1[a][b] - tm2[a][b]) / 6.0;
                    }
                }
                (tp, tm)
            }
            _ => unreachable!("validated above"),
        };
        for alpha in 0..4 {
            divergence[alpha] += (tp[alpha][nu] - tm[alpha][nu]) / (2.0 * h);
        }
    }
    let mut worst: f64 = 0.0;
    for alpha in 0..4 {
        worst = worst.max((divergence[alpha] - rhs[alpha]).abs());
    }
    Ok(worst)
}

fn contravariant_vector(mv: &Multivector) -> [f64; 4] {
    [
        mv.coeffs[0b0001],
        -mv.coeffs[0b0010],
        -mv.coeffs[0b0100],
        -mv.coeffs[0b1000],
    ]
}

/// Integrates the Lorentz force law `dp/ds = q <F v>_1` with classical RK4,
/// renormalizing the velocity onto the mass shell after every step.
pub fn lorentz_push(
    particle: &ChargedParticle,
    f_ext: &FieldMap,
    s_end: f64,
    ds: f64,
) -> Result<Worldline, Error> {
    if !(ds > 0.0) || !(s_end > 0.0) {
        return Err(Error::Argument("proper-time span and step must be positive".into()));
    }
    let start = particle
        .worldline
        .samples
        .last()
        .ok_or_else(|| Error::Argument("worldline has no samples".into()))?;
    let m = particle.m;
    let q = particle.q;
    let mut z = start.z;
    let mut p = start.v * m;
    let mut s = start.s;

    let deriv = |z: &SpacetimePoint, p: &Multivector| -> Result<([f64; 4], Multivector), Error> {
        let f = f_ext.eval(z);
        if !f.is_finite() {
            return Err(Error::Numeric(format!("non-finite field at {z:?}")));
        }
        let v = *p * (1.0 / m);
        let dz = contravariant_vector(&v);
        let dp = f.geometric_product(&v).grade(1) * q;
        Ok((dz, dp))
    };

    let steps = (s_end / ds).ceil() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(WorldlineSample {
        s,
        z,
        v: p * (1.0 / m),
    });
    for _ in 0..steps {
        let step = ds.min(s_end + start.s - s);
        if step <= 0.0 {
            break;
        }
        let (k1z, k1p) = deriv(&z, &p)?;
        let (k2z, k2p) = deriv(&advance(&z, &k1z, step / 2.0), &(p + k1p * (step / 2.0)))?;
        let (k3z, k3p) = deriv(&advance(&z, &k2z, step / 2.0), &(p + k2p * (step / 2.0)))?;
        let (k4z, k4p) = deriv(&advance(&z, &k3z, step), &(p + k3p * step))?;
        for k in 0..4 {
            z[k] += step / 6.0 * (k1z[k] + 2.0 * k2z[k] + 2.0 * k3z[k] + k4z[k]);
        }
        p = p + (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (step / 6.0);
        let p2 = p.scalar_product(&p);
        if !(p2 > 0.0) {
            return Err(Error::Numeric("momentum left the mass shell".into()));
        }
        p = p * (m / p2.sqrt());
        s += step;
        samples.push(WorldlineSample {
            s,
            z,
            v: p * (1.0 / m),
        });
    }
    let worldline = Worldline { samples };
    worldline.validate()?;
    Ok(worldline)
}

fn advance(z: &SpacetimePoint, dz: &[f64; 4], h: f64) -> SpacetimePoint {
    [
        z[0] + h * dz[0],
        z[1] + h * dz[1],
        z[2] + h * dz[2],
        z[3] + h * dz[3],
    ]
}

/// Outcome of the orientation-flip experiment: the trajectory is invariant
/// under the joint flip (q, F) -> (-q, -F), while the pair charge integral
/// tracks the chart orientation and the impair one does not.
#[derive(Clone, Debug)]
pub struct FlipReport {
    pub trajectory_deviation: f64,
    pub charge_positive_chart: f64,
    pub charge_negative_chart: f64,
    pub charge_impair: f64,
    pub original: Worldline,
    pub flipped: Worldline,
}

pub fn orientation_flip_experiment(
    particle: &ChargedParticle,
    f_ext: &FieldMap,
    s_end: f64,
    ds: f64,
) -> Result<FlipReport, Error> {
    let original = lorentz_push(particle, f_ext, s_end, ds)?;
    let negated_field = {
        let f = f_ext.clone();
        FieldMap::new(move |x: &SpacetimePoint| -f.eval(x))
    };
    let mirrored = ChargedParticle {
        q: -particle.q,
        ..particle.clone()
    };
    let flipped = lorentz_push(&mirrored, &negated_field, s_end, ds)?;
    let trajectory_deviation = original.max_deviation(&flipped);

    let sigma = 0.1;
    let blob = Current::gaussian_blob(particle.q.signum(), sigma, [0.0; 3], [0.0; 3])?;
    let slice = TimeSlice::cube(0.0, &[0.0; 3], 8.0 * sigma);
    let n = 48;
    Ok(FlipReport {
        trajectory_deviation,
        charge_positive_chart: charge_integral(&blob, &slice, Sign::Plus, Parity::Pair, n)?,
        charge_negative_chart: charge_integral(&blob, &slice, Sign::Minus, Parity::Pair, n)?,
        charge_impair: charge_integral(&blob, &slice, Sign::Minus, Parity::Impair, n)?,
        original,
        flipped,
    })
}

/// Mollified matter stress-energy of a set of particles: the distributional
/// `T^{alpha} = sum m v^alpha v delta^3` smeared by a spatial Gaussian.
#[derive(Clone)]
pub struct MatterStressEnergy {
    particles: Arc<Vec<ChargedParticle>>,
    sigma: f64,
}

pub fn matter_stress_energy(
    particles: Vec<ChargedParticle>,
    sigma: f64,
) -> Result<MatterStressEnergy, Error> {
    if !(sigma > 0.0) {
        return Err(Error::Argument(format!("mollifier width {sigma} must be positive")));
    }
    Ok(MatterStressEnergy {
        particles: Arc::new(particles),
        sigma,
    })
}

impl MatterStressEnergy {
    /// The grade-1 form `T^alpha` as a field.
    pub fn form(&self, alpha: usize) -> Result<FieldMap, Error> {
        if alpha > 3 {
            return Err(Error::Argument(format!("index {alpha} out of range")));
        }
        let particles = self.particles.clone();
        let sigma = self.sigma;
        Ok(FieldMap::new(move |x: &SpacetimePoint| {
            let mut acc = Multivector::ZERO;
            for p in particles.iter() {
                let (Ok(z), Ok(v)) = (
                    p.worldline.position_at_time(x[0]),
                    p.worldline.velocity_at_time(x[0]),
                ) else {
                    continue;
                };
                let r2 = (x[1] - z[1]).powi(2) + (x[2] - z[2]).powi(2) + (x[3] - z[3]).powi(2);
                let g = (-r2 / (2.0 * sigma * sigma)).exp()
                    / ((2.0 * std::f64::consts::PI).powf(1.5) * sigma.powi(3));
                let v_up = contravariant_vector(&v);
                // d^3 density on a time slice carries 1/v^0
                acc = acc + v * (p.m * v_up[alpha] / v_up[0] * g);
            }
            acc
        }))
    }

    pub fn components(&self, x: &SpacetimePoint) -> Result<[[f64; 4]; 4], Error> {
        let mut t = [[0.0; 4]; 4];
        for alpha in 0..4 {
            let form = self.form(alpha)?.eval(x);
            for beta in 0..4 {
                t[alpha][beta] = form.scalar_product(&Multivector::gamma(beta));
            }
        }
        Ok(t)
    }
}

/// Total mechanical momentum `sum m v` of the particles at coordinate time t.
pub fn total_momentum(particles: &[ChargedParticle], t: f64) -> Result<Multivector, Error> {
    let mut acc = Multivector::ZERO;
    for p in particles {
        acc = acc + p.worldline.velocity_at_time(t)? * p.m;
    }
    Ok(acc)
}
