//! Scenario configuration, experiment runners, and deterministic reporting.
//!
//! A [`Scenario`] is a JSON-serializable description of sources, external
//! field presets, orientation conventions, and numeric settings. Each
//! experiment consumes a scenario and produces a [`Report`] whose checks
//! carry explicit tolerances; the overall status is the conjunction of the
//! individual passes. Re-running with the same config and seed yields a
//! byte-identical report.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{FieldMap, SpacetimePoint, StencilConfig};
use crate::electrodynamics::{
    assemble_f, charge_integral, coulomb_field, gaussian_blob_field, maxwell_residual,
    plane_wave_field, retarded_field, ConstitutiveTensor, Current, RetardedQuadrature, TimeSlice,
    effective_metric_constitutive,
};
use crate::forms::{pair_hodge, pair_hodge_inverse, PairForm, Parity, Sign, VolumeElement};
use crate::kernel::{Multivector, BASIS_SIZE};
use crate::mechanics::{lorentz_push, orientation_flip_experiment, ChargedParticle};
use crate::pauli::{cross, sigma, wire_field, ImaginaryConvention, RelativeVector};
use crate::Error;

/// Named analytic external-field presets.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldPreset {
    Zero,
    Coulomb { q: f64 },
    PlaneWave,
    UniformEb { e: [f64; 3], b: [f64; 3] },
    Wire { amps: f64 },
    GaussianBlob { q: f64, sigma: f64, center: [f64; 3] },
}

impl FieldPreset {
    pub fn build(&self, i: ImaginaryConvention) -> FieldMap {
        match self {
            FieldPreset::Zero => FieldMap::zero(),
            FieldPreset::Coulomb { q } => coulomb_field(*q),
            FieldPreset::PlaneWave => plane_wave_field(),
            FieldPreset::UniformEb { e, b } => FieldMap::constant(*assemble_f(e, b).value()),
            FieldPreset::Wire { amps } => wire_field(*amps, i),
            FieldPreset::GaussianBlob { q, sigma, center } => {
                gaussian_blob_field(*q, *sigma, *center)
            }
        }
    }

    fn validate(&self) -> Result<(), Error> {
        let finite = |vals: &[f64], what: &str| {
            if vals.iter().all(|v| v.is_finite()) {
                Ok(())
            } else {
                Err(Error::Argument(format!("field preset: {what} must be finite")))
            }
        };
        match self {
            FieldPreset::Zero | FieldPreset::PlaneWave => Ok(()),
            FieldPreset::Coulomb { q } => finite(&[*q], "q"),
            FieldPreset::UniformEb { e, b } => {
                finite(e, "e")?;
                finite(b, "b")
            }
            FieldPreset::Wire { amps } => finite(&[*amps], "amps"),
            FieldPreset::GaussianBlob { q, sigma, center } => {
                finite(&[*q, *sigma], "q, sigma")?;
                finite(center, "center")?;
                if *sigma > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Argument(format!("blob sigma {sigma} must be positive")))
                }
            }
        }
    }
}

/// A Gaussian charge blob source.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlobSpec {
    pub q: f64,
    pub sigma: f64,
    #[serde(default)]
    pub center: [f64; 3],
    #[serde(default)]
    pub velocity: [f64; 3],
}

/// A point particle source / test particle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParticleSpec {
    pub m: f64,
    pub q: f64,
    #[serde(default)]
    pub position: [f64; 4],
    #[serde(default)]
    pub momentum: [f64; 3],
}

impl ParticleSpec {
    pub fn build(&self) -> Result<ChargedParticle, Error> {
        ChargedParticle::new(self.m, self.q, self.position, self.momentum)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StencilSettings {
    pub h: f64,
    pub order: usize,
}

impl Default for StencilSettings {
    fn default() -> StencilSettings {
        StencilSettings { h: 1e-3, order: 2 }
    }
}

impl StencilSettings {
    pub fn build(&self) -> StencilConfig {
        StencilConfig {
            h: self.h,
            order: self.order,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub points_per_axis: usize,
    pub h: f64,
}

impl Default for QuadratureSettings {
    fn default() -> QuadratureSettings {
        let d = RetardedQuadrature::default();
        QuadratureSettings {
            points_per_axis: d.points_per_axis,
            h: d.h,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrajectorySettings {
    pub s_end: f64,
    pub ds: f64,
}

impl Default for TrajectorySettings {
    fn default() -> TrajectorySettings {
        TrajectorySettings {
            s_end: 2.0 * std::f64::consts::PI,
            ds: 1e-3,
        }
    }
}

/// Sampling grid for field export: a box swept with the same point count on
/// each axis (axes with lo == hi are sampled once).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GridSettings {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub points_per_axis: usize,
}

impl Default for GridSettings {
    fn default() -> GridSettings {
        GridSettings {
            lo: [0.0, -1.0, -1.0, -1.0],
            hi: [0.0, 1.0, 1.0, 1.0],
            points_per_axis: 3,
        }
    }
}

/// Constitutive tensor selector for the `constitutive` experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConstitutiveSpec {
    Vacuum,
    Axion { a: f64 },
    Matrix { chi: [[f64; 6]; 6] },
    EffectiveMetric { g: [[f64; 4]; 4] },
}

impl ConstitutiveSpec {
    pub fn build(&self) -> Result<ConstitutiveTensor, Error> {
        match self {
            ConstitutiveSpec::Vacuum => Ok(ConstitutiveTensor::vacuum()),
            ConstitutiveSpec::Axion { a } => Ok(ConstitutiveTensor::axion(*a)),
            ConstitutiveSpec::Matrix { chi } => Ok(ConstitutiveTensor { chi: *chi }),
            ConstitutiveSpec::EffectiveMetric { g } => {
                effective_metric_constitutive(g)
            }
        }
    }
}

/// Full experiment configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Chart orientation: +1 or -1.
    #[serde(default = "one")]
    pub orientation: i8,
    /// Relative pseudoscalar sign: -1 for i = -gamma5 (default), +1 for the
    /// left-handed convention.
    #[serde(default = "minus_one")]
    pub i_sign: i8,
    #[serde(default)]
    pub stencil: StencilSettings,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
    #[serde(default)]
    pub trajectory: TrajectorySettings,
    #[serde(default)]
    pub grid: GridSettings,
    #[serde(default)]
    pub field: Option<FieldPreset>,
    #[serde(default)]
    pub blobs: Vec<BlobSpec>,
    #[serde(default)]
    pub particles: Vec<ParticleSpec>,
    #[serde(default)]
    pub constitutive: Option<ConstitutiveSpec>,
}

fn one() -> i8 {
    1
}

fn minus_one() -> i8 {
    -1
}

impl Default for Scenario {
    fn default() -> Scenario {
        Scenario {
            orientation: 1,
            i_sign: -1,
            stencil: StencilSettings::default(),
            quadrature: QuadratureSettings::default(),
            trajectory: TrajectorySettings::default(),
            grid: GridSettings::default(),
            field: None,
            blobs: Vec::new(),
            particles: Vec::new(),
            constitutive: None,
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, Error> {
        let scenario: Scenario =
            serde_json::from_str(text).map_err(|e| Error::Argument(format!("config: {e}")))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_file(path: &Path) -> Result<Scenario, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Argument(format!("config {}: {e}", path.display())))?;
        Scenario::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.orientation != 1 && self.orientation != -1 {
            return Err(Error::Argument(format!(
                "orientation must be +1 or -1, got {}",
                self.orientation
            )));
        }
        if self.i_sign != 1 && self.i_sign != -1 {
            return Err(Error::Argument(format!(
                "i_sign must be +1 or -1, got {}",
                self.i_sign
            )));
        }
        if self.stencil.order != 2 && self.stencil.order != 4 {
            return Err(Error::Argument(format!(
                "stencil order must be 2 or 4, got {}",
                self.stencil.order
            )));
        }
        if !(self.stencil.h > 0.0) {
            return Err(Error::Argument(format!(
                "stencil h must be positive, got {}",
                self.stencil.h
            )));
        }
        if self.quadrature.points_per_axis == 0 {
            return Err(Error::Argument("quadrature points_per_axis must be positive".into()));
        }
        if !(self.trajectory.ds > 0.0) || !(self.trajectory.s_end > 0.0) {
            return Err(Error::Argument("trajectory s_end and ds must be positive".into()));
        }
        if self.grid.points_per_axis == 0 {
            return Err(Error::Argument("grid points_per_axis must be positive".into()));
        }
        for (k, v) in self.grid.lo.iter().chain(self.grid.hi.iter()).enumerate() {
            if !v.is_finite() {
                return Err(Error::Argument(format!("grid bound {k} must be finite")));
            }
        }
        if let Some(preset) = &self.field {
            preset.validate()?;
        }
        for blob in &self.blobs {
            if !(blob.sigma > 0.0) {
                return Err(Error::Argument(format!(
                    "blob sigma {} must be positive",
                    blob.sigma
                )));
            }
            let all = [blob.q, blob.sigma]
                .into_iter()
                .chain(blob.center)
                .chain(blob.velocity);
            for v in all {
                if !v.is_finite() {
                    return Err(Error::Argument("blob parameters must be finite".into()));
                }
            }
        }
        for p in &self.particles {
            if !(p.m > 0.0) {
                return Err(Error::Argument(format!("particle mass {} must be positive", p.m)));
            }
            let all = [p.m, p.q].into_iter().chain(p.position).chain(p.momentum);
            for v in all {
                if !v.is_finite() {
                    return Err(Error::Argument("particle parameters must be finite".into()));
                }
            }
        }
        Ok(())
    }

    pub fn volume_element(&self) -> VolumeElement {
        if self.orientation >= 0 {
            VolumeElement::positive()
        } else {
            VolumeElement::negative()
        }
    }

    pub fn imaginary(&self) -> ImaginaryConvention {
        if self.i_sign >= 0 {
            ImaginaryConvention::PlusGamma5
        } else {
            ImaginaryConvention::MinusGamma5
        }
    }

    pub fn chart_sign(&self) -> Sign {
        if self.orientation >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// One verified quantity: its observed value must stay within tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Deterministic experiment report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl Report {
    pub fn new(experiment: &str, seed: u64) -> Report {
        Report {
            experiment: experiment.to_string(),
            seed,
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Records a |value| <= tolerance check.
    pub fn check(&mut self, name: &str, value: f64, tolerance: f64) {
        let pass = value.is_finite() && value.abs() <= tolerance;
        self.pass &= pass;
        self.checks.push(CheckRecord {
            name: name.to_string(),
            value,
            tolerance,
            pass,
        });
    }

    /// Records a |value - expected| <= tolerance check, reporting the value.
    pub fn check_close(&mut self, name: &str, value: f64, expected: f64, tolerance: f64) {
        let pass = value.is_finite() && (value - expected).abs() <= tolerance;
        self.pass &= pass;
        self.checks.push(CheckRecord {
            name: name.to_string(),
            value,
            tolerance,
            pass,
        });
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// One exported sample row: a spacetime point and 16 blade coefficients.
#[derive(Clone, Copy, Debug)]
pub struct SampleRow {
    pub x: SpacetimePoint,
    pub coeffs: [f64; BASIS_SIZE],
}

pub fn csv_header() -> String {
    let mut cols: Vec<String> = (0..4).map(|k| format!("x{k}")).collect();
    cols.extend((0..BASIS_SIZE).map(|idx| format!("c{idx}")));
    cols.join(",")
}

pub fn rows_to_csv(rows: &[SampleRow]) -> String {
    let mut out = csv_header();
    out.push('\n');
    for row in rows {
        let mut fields: Vec<String> = row.x.iter().map(|v| format!("{v:e}")).collect();
        fields.extend(row.coeffs.iter().map(|v| format!("{v:e}")));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn uniform_random_mv(rng: &mut impl Rng) -> Multivector {
    let mut mv = Multivector::ZERO;
    for c in mv.coeffs.iter_mut() {
        *c = rng.gen_range(-1.0..1.0);
    }
    mv
}

/// Identity suite over kernel, forms, and Pauli algebra, plus the Maxwell
/// formulation cross-checks on the analytic presets, all under the
/// scenario's orientation conventions.
pub fn run_verify(scenario: &Scenario, seed: u64) -> Result<Report, Error> {
    let mut report = Report::new("verify", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = scenario.volume_element();
    let i = scenario.imaginary();
    let stencil = scenario.stencil.build();

    // kernel: associativity and reverse anti-automorphism on random elements
    let mut worst_assoc: f64 = 0.0;
    let mut worst_reverse: f64 = 0.0;
    for _ in 0..64 {
        let (a, b, c) = (
            uniform_random_mv(&mut rng),
            uniform_random_mv(&mut rng),
            uniform_random_mv(&mut rng),
        );
        let left = a.geometric_product(&b).geometric_product(&c);
        let right = a.geometric_product(&b.geometric_product(&c));
        worst_assoc = worst_assoc.max((left - right).norm_inf());
        let rev = a.geometric_product(&b).reverse() - b.reverse().geometric_product(&a.reverse());
        worst_reverse = worst_reverse.max(rev.norm_inf());
    }
    report.check("kernel.associativity", worst_assoc, 1e-12);
    report.check("kernel.reverse_antiautomorphism", worst_reverse, 1e-12);

    // forms: B wedge star A = (B . A) tau and the double-star inverse
    let mut worst_pairing: f64 = 0.0;
    let mut worst_roundtrip: f64 = 0.0;
    for _ in 0..64 {
        let grade = rng.gen_range(0..=4usize);
        let a = PairForm::project(&uniform_random_mv(&mut rng), grade);
        let b = PairForm::project(&uniform_random_mv(&mut rng), grade);
        let lhs = b.value().outer(&pair_hodge(&a, &tau).value().clone());
        let rhs = *tau.pair().value() * b.value().scalar_product(a.value());
        worst_pairing = worst_pairing.max((lhs - rhs).norm_inf());
        let back = pair_hodge_inverse(&pair_hodge(&a, &tau), &tau);
        worst_roundtrip = worst_roundtrip.max((*back.value() - *a.value()).norm_inf());
    }
    report.check("forms.hodge_pairing", worst_pairing, 1e-12);
    report.check("forms.hodge_roundtrip", worst_roundtrip, 1e-12);

    // pauli: anticommutation, i^2 = -1, cross product versus components
    let mut worst_sigma: f64 = 0.0;
    for j in 1..=3 {
        for k in 1..=3 {
            let anti = sigma(j).geometric_product(&sigma(k))
                + sigma(k).geometric_product(&sigma(j));
            let expected = if j == k { 2.0 } else { 0.0 };
            worst_sigma = worst_sigma.max((anti - Multivector::scalar(expected)).norm_inf());
        }
    }
    report.check("pauli.sigma_anticommutation", worst_sigma, 0.0);
    let i_mv = i.pseudoscalar();
    report.check(
        "pauli.i_squared_plus_one",
        (i_mv.geometric_product(&i_mv) + Multivector::scalar(1.0)).norm_inf(),
        0.0,
    );
    let mut worst_cross: f64 = 0.0;
    for _ in 0..64 {
        let a = RelativeVector([
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ]);
        let b = RelativeVector([
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ]);
        let classic = RelativeVector([
            a.0[1] * b.0[2] - a.0[2] * b.0[1],
            a.0[2] * b.0[0] - a.0[0] * b.0[2],
            a.0[0] * b.0[1] - a.0[1] * b.0[0],
        ]) * (-i.factor());
        worst_cross = worst_cross.max((cross(&a, &b, i) - classic).norm_inf());
    }
    report.check("pauli.cross_component_formula", worst_cross, 1e-12);

    // Maxwell formulations on the analytic vacuum presets
    let coulomb = coulomb_field(1.0);
    let r = maxwell_residual(&coulomb, &Current::zero(), &[0.0, 1.0, 0.8, 0.9], &tau, &stencil)?;
    report.check("maxwell.coulomb_residual", r.max_norm(), 1e-6);
    let wave = plane_wave_field();
    let r = maxwell_residual(&wave, &Current::zero(), &[0.3, 0.2, -0.4, 0.7], &tau, &stencil)?;
    report.check("maxwell.plane_wave_residual", r.max_norm(), 1e-6);
    let diff = (r.clifford - (r.homogeneous - r.inhomogeneous)).norm_inf();
    report.check("maxwell.formulations_consistent", diff, 1e-12);
    report.check(
        "maxwell.impair_route_agrees",
        (r.impair_inhomogeneous - r.inhomogeneous).norm_inf(),
        1e-9,
    );
    Ok(report)
}

fn grid_points(grid: &GridSettings) -> Vec<SpacetimePoint> {
    let n = grid.points_per_axis;
    let axis = |k: usize| -> Vec<f64> {
        if grid.lo[k] == grid.hi[k] || n == 1 {
            vec![grid.lo[k]]
        } else {
            (0..n)
                .map(|s| grid.lo[k] + (grid.hi[k] - grid.lo[k]) * s as f64 / (n - 1) as f64)
                .collect()
        }
    };
    let (a0, a1, a2, a3) = (axis(0), axis(1), axis(2), axis(3));
    let mut points = Vec::new();
    for &x0 in &a0 {
        for &x1 in &a1 {
            for &x2 in &a2 {
                for &x3 in &a3 {
                    points.push([x0, x1, x2, x3]);
                }
            }
        }
    }
    points
}

/// Samples the configured field on the configured grid.
pub fn run_fields(scenario: &Scenario, seed: u64) -> Result<(Report, Vec<SampleRow>), Error> {
    let mut report = Report::new("fields", seed);
    let preset = scenario
        .field
        .clone()
        .ok_or_else(|| Error::Argument("fields experiment needs a field preset".into()))?;
    let field = preset.build(scenario.imaginary());
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for x in grid_points(&scenario.grid) {
        let mv = field.eval(&x);
        if !mv.is_finite() {
            worst = f64::INFINITY;
        }
        worst = worst.max(0.0);
        rows.push(SampleRow {
            x,
            coeffs: mv.coeffs,
        });
    }
    report.check("fields.samples_finite", worst, 0.0);
    report.check_close("fields.sample_count", rows.len() as f64, rows.len() as f64, 0.0);
    Ok((report, rows))
}

/// Pushes the first configured particle through the external field and
/// exports the worldline (position row carries the velocity coefficients).
pub fn run_trajectory(scenario: &Scenario, seed: u64) -> Result<(Report, Vec<SampleRow>), Error> {
    let mut report = Report::new("trajectory", seed);
    let spec = scenario
        .particles
        .first()
        .ok_or_else(|| Error::Argument("trajectory experiment needs a particle".into()))?;
    let preset = scenario
        .field
        .clone()
        .unwrap_or(FieldPreset::UniformEb {
            e: [0.0; 3],
            b: [0.0, 0.0, 1.0],
        });
    let field = preset.build(scenario.imaginary());
    let particle = spec.build()?;
    let wl = lorentz_push(&particle, &field, scenario.trajectory.s_end, scenario.trajectory.ds)?;
    let mut worst_shell: f64 = 0.0;
    let mut rows = Vec::with_capacity(wl.samples.len());
    for sample in &wl.samples {
        worst_shell = worst_shell.max((sample.v.scalar_product(&sample.v) - 1.0).abs());
        rows.push(SampleRow {
            x: sample.z,
            coeffs: sample.v.coeffs,
        });
    }
    report.check("trajectory.mass_shell", worst_shell, 1e-9);
    report.check_close(
        "trajectory.samples",
        rows.len() as f64,
        (scenario.trajectory.s_end / scenario.trajectory.ds).ceil() + 1.0,
        1.0,
    );
    Ok((report, rows))
}

/// The orientation-flip experiment: trajectory invariance under the joint
/// flip (q, F) -> (-q, -F) plus the charge-integral convention table.
pub fn run_flip(scenario: &Scenario, seed: u64) -> Result<Report, Error> {
    let mut report = Report::new("flip", seed);
    let spec = scenario
        .particles
        .first()
        .cloned()
        .unwrap_or(ParticleSpec {
            m: 1.0,
            q: 1.0,
            position: [0.0; 4],
            momentum: [1.0, 0.0, 0.0],
        });
    let preset = scenario
        .field
        .clone()
        .unwrap_or(FieldPreset::UniformEb {
            e: [0.0; 3],
            b: [0.0, 0.0, 1.0],
        });
    let field = preset.build(scenario.imaginary());
    let particle = spec.build()?;
    let flip = orientation_flip_experiment(
        &particle,
        &field,
        scenario.trajectory.s_end,
        scenario.trajectory.ds,
    )?;
    report.check("flip.trajectory_deviation", flip.trajectory_deviation, 1e-12);
    let q = spec.q.signum();
    report.check_close("flip.charge_positive_chart", flip.charge_positive_chart, q, 1e-6);
    report.check_close("flip.charge_negative_chart", flip.charge_negative_chart, -q, 1e-6);
    report.check_close("flip.charge_impair", flip.charge_impair, q, 1e-6);
    Ok(report)
}

fn frobenius(t: &ConstitutiveTensor) -> f64 {
    t.chi
        .iter()
        .flatten()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

/// Decomposes the configured constitutive tensor into principal, skewon,
/// and axion parts and verifies the reconstruction.
pub fn run_constitutive(scenario: &Scenario, seed: u64) -> Result<Report, Error> {
    let mut report = Report::new("constitutive", seed);
    let spec = scenario
        .constitutive
        .clone()
        .unwrap_or(ConstitutiveSpec::Vacuum);
    let tensor = spec.build()?;
    let parts = tensor.decompose();
    let resum = parts.principal.add(&parts.skewon).add(&parts.axion_tensor());
    report.check("constitutive.reconstruction", tensor.max_abs_diff(&resum), 1e-12);
    report.check_close("constitutive.axion", parts.axion, parts.axion, 0.0);
    report.check_close(
        "constitutive.skewon_norm",
        frobenius(&parts.skewon),
        frobenius(&parts.skewon),
        0.0,
    );
    report.check_close(
        "constitutive.principal_norm",
        frobenius(&parts.principal),
        frobenius(&parts.principal),
        0.0,
    );
    Ok(report)
}

/// Solves the retarded field of the first blob and, when the blob is
/// static, compares it against the analytic blob field at 5 sigma.
pub fn run_retarded(scenario: &Scenario, seed: u64) -> Result<(Report, Vec<SampleRow>), Error> {
    let mut report = Report::new("retarded", seed);
    let spec = scenario
        .blobs
        .first()
        .cloned()
        .unwrap_or(BlobSpec {
            q: 1.0,
            sigma: 0.05,
            center: [0.0; 3],
            velocity: [0.0; 3],
        });
    let j = Current::gaussian_blob(spec.q, spec.sigma, spec.center, spec.velocity)?;
    let quadrature = RetardedQuadrature {
        points_per_axis: scenario.quadrature.points_per_axis,
        h: scenario.quadrature.h,
    };
    let r = 5.0 * spec.sigma;
    let point = [
        0.0,
        spec.center[0] + r,
        spec.center[1],
        spec.center[2],
    ];
    let f = retarded_field(&j, &point, &quadrature)?;
    let row = SampleRow {
        x: point,
        coeffs: f.value().coeffs,
    };
    let is_static = spec.velocity == [0.0; 3];
    if is_static {
        let exact = gaussian_blob_field(spec.q, spec.sigma, spec.center).eval(&point);
        let scale = exact.norm_inf().max(1e-300);
        report.check(
            "retarded.static_blob_relative_error",
            (*f.value() - exact).norm_inf() / scale,
            5e-3,
        );
    }
    // total charge of the source as seen by the impair 3-form integral
    let slice = TimeSlice::cube(0.0, &spec.center, 8.0 * spec.sigma);
    if is_static {
        let charge = charge_integral(&j, &slice, scenario.chart_sign(), Parity::Impair, 48)?;
        report.check_close("retarded.source_charge", charge, spec.q, 1e-6 * spec.q.abs().max(1.0));
    }
    Ok((report, vec![row]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_validates() {
        let s = Scenario::default();
        s.validate().unwrap();
        assert_eq!(s.orientation, 1);
        assert_eq!(s.i_sign, -1);
    }

    #[test]
    fn config_roundtrip_and_validation_errors() {
        let s: Scenario = Scenario::from_json(
            r#"{
                "orientation": -1,
                "field": {"type": "coulomb", "q": 2.0},
                "blobs": [{"q": 1.0, "sigma": 0.05}],
                "particles": [{"m": 1.0, "q": -1.0, "momentum": [0.5, 0.0, 0.0]}]
            }"#,
        )
        .unwrap();
        assert_eq!(s.orientation, -1);
        assert!(matches!(s.field, Some(FieldPreset::Coulomb { .. })));

        assert!(Scenario::from_json(r#"{"orientation": 2}"#).is_err());
        assert!(Scenario::from_json(r#"{"blobs": [{"q": 1.0, "sigma": -0.1}]}"#).is_err());
        assert!(Scenario::from_json(r#"{"unknown_field": 1}"#).is_err());
        assert!(Scenario::from_json(r#"{"stencil": {"h": 1e-3, "order": 3}}"#).is_err());
    }

    #[test]
    fn verify_suite_passes_under_both_orientations() {
        for orientation in [1, -1] {
            let s = Scenario {
                orientation,
                ..Scenario::default()
            };
            let report = run_verify(&s, 0).unwrap();
            assert!(report.pass, "{}", report.to_json());
        }
    }

    #[test]
    fn verify_report_is_deterministic() {
        let s = Scenario::default();
        let a = run_verify(&s, 7).unwrap().to_json();
        let b = run_verify(&s, 7).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn fields_experiment_samples_grid() {
        let s = Scenario {
            field: Some(FieldPreset::PlaneWave),
            grid: GridSettings {
                lo: [0.0, -1.0, 0.0, -1.0],
                hi: [0.0, 1.0, 0.0, 1.0],
                points_per_axis: 5,
            },
            ..Scenario::default()
        };
        let (report, rows) = run_fields(&s, 0).unwrap();
        assert!(report.pass);
        assert_eq!(rows.len(), 25);
        let csv = rows_to_csv(&rows);
        let header = csv.lines().next().unwrap();
        assert_eq!(header.split(',').count(), 20);
        assert!(header.starts_with("x0,x1,x2,x3,c0,"));
        assert_eq!(csv.lines().count(), 26);
    }

    #[test]
    fn trajectory_and_flip_defaults_pass() {
        let s = Scenario {
            particles: vec![ParticleSpec {
                m: 1.0,
                q: 1.0,
                position: [0.0; 4],
                momentum: [1.0, 0.0, 0.0],
            }],
            trajectory: TrajectorySettings {
                s_end: 1.0,
                ds: 1e-3,
            },
            ..Scenario::default()
        };
        let (report, rows) = run_trajectory(&s, 0).unwrap();
        assert!(report.pass, "{}", report.to_json());
        assert_eq!(rows.len(), 1001);
        let report = run_flip(&s, 0).unwrap();
        assert!(report.pass, "{}", report.to_json());
    }

    #[test]
    fn constitutive_vacuum_has_no_skewon_or_axion() {
        let s = Scenario {
            constitutive: Some(ConstitutiveSpec::Vacuum),
            ..Scenario::default()
        };
        let report = run_constitutive(&s, 0).unwrap();
        assert!(report.pass);
        let axion = report
            .checks
            .iter()
            .find(|c| c.name == "constitutive.axion")
            .unwrap();
        assert_eq!(axion.value, 0.0);
        let skewon = report
            .checks
            .iter()
            .find(|c| c.name == "constitutive.skewon_norm")
            .unwrap();
        assert_eq!(skewon.value, 0.0);
    }

    #[test]
    fn retarded_small_grid_passes() {
        let s = Scenario {
            blobs: vec![BlobSpec {
                q: 1.0,
                sigma: 0.05,
                center: [0.0; 3],
                velocity: [0.0; 3],
            }],
            quadrature: QuadratureSettings {
                points_per_axis: 32,
                h: 1e-3,
            },
            ..Scenario::default()
        };
        let (report, rows) = run_retarded(&s, 0).unwrap();
        assert!(report.pass, "{}", report.to_json());
        assert_eq!(rows.len(), 1);
    }
}
