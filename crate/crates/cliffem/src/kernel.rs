//! The Clifford algebra Cl(1,3) over a blade-bitmask basis.
//!
//! A multivector carries 16 coefficients indexed by a 4-bit blade mask:
//! bit `mu` set means the blade contains the factor `gamma^mu`, factors in
//! ascending index order. Mask 0 is the scalar, mask 0b1111 is the
//! pseudoscalar `gamma^5 = gamma^0 gamma^1 gamma^2 gamma^3`. The metric is
//! fixed to diag(+1,-1,-1,-1).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::Error;

/// Number of basis blades in Cl(1,3).
pub const BASIS_SIZE: usize = 16;

/// Metric diagonal eta^{mu mu} for signature (+,-,-,-).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Grade (number of set bits) of a blade mask.
pub fn blade_grade(mask: usize) -> usize {
    (mask as u32).count_ones() as usize
}

/// Sign of the product of two basis blades, from transposition counting plus
/// metric factors for repeated indices. Indices inside each operand are in
/// ascending order; merging them costs one transposition for every pair
/// (i in a, j in b) with i > j.
fn blade_product_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    let mut sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
    let mut common = a & b;
    while common != 0 {
        let mu = common.trailing_zeros() as usize;
        sign *= METRIC[mu];
        common &= common - 1;
    }
    sign
}

/// Precomputed 16x16 sign table for blade products. The result mask of
/// `blade(a) * blade(b)` is always `a ^ b`; only the sign needs storage.
fn sign_table() -> &'static [[f64; BASIS_SIZE]; BASIS_SIZE] {
    static TABLE: OnceLock<[[f64; BASIS_SIZE]; BASIS_SIZE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0.0; BASIS_SIZE]; BASIS_SIZE];
        for (a, row) in t.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = blade_product_sign(a, b);
            }
        }
        t
    })
}

/// A general element of Cl(1,3): 16 real blade coefficients.
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    pub coeffs: [f64; BASIS_SIZE],
}

impl Multivector {
    pub const ZERO: Multivector = Multivector {
        coeffs: [0.0; BASIS_SIZE],
    };

    pub fn new(coeffs: [f64; BASIS_SIZE]) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.is_finite()));
        Multivector { coeffs }
    }

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn scalar(s: f64) -> Self {
        let mut coeffs = [0.0; BASIS_SIZE];
        coeffs[0] = s;
        Multivector::new(coeffs)
    }

    /// The basis blade with the given bitmask and unit coefficient.
    pub fn basis_blade(mask: usize) -> Self {
        assert!(mask < BASIS_SIZE, "blade mask out of range: {mask}");
        let mut coeffs = [0.0; BASIS_SIZE];
        coeffs[mask] = 1.0;
        Multivector { coeffs }
    }

    /// gamma^mu (upper index; coincides with the basis blade 1 << mu).
    pub fn gamma(mu: usize) -> Self {
        assert!(mu < 4, "index out of range: {mu}");
        Self::basis_blade(1 << mu)
    }

    /// gamma_mu = eta_{mu nu} gamma^nu.
    pub fn gamma_lower(mu: usize) -> Self {
        assert!(mu < 4, "index out of range: {mu}");
        Self::gamma(mu) * METRIC[mu]
    }

    /// The pseudoscalar gamma^5 = gamma^0 gamma^1 gamma^2 gamma^3.
    pub fn gamma5() -> Self {
        Self::basis_blade(0b1111)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Geometric (Clifford) product.
    pub fn geometric_product(&self, rhs: &Multivector) -> Multivector {
        let table = sign_table();
        let mut out = [0.0; BASIS_SIZE];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let row = &table[a];
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                out[a ^ b] += ca * cb * row[b];
            }
        }
        Multivector { coeffs: out }
    }

    /// Outer (exterior) product: the grade-(p+q) selection of the geometric
    /// product, blade pair by blade pair.
    pub fn outer(&self, rhs: &Multivector) -> Multivector {
        let table = sign_table();
        let mut out = [0.0; BASIS_SIZE];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                if blade_grade(a ^ b) == blade_grade(a) + blade_grade(b) {
                    out[a ^ b] += ca * cb * table[a][b];
                }
            }
        }
        Multivector { coeffs: out }
    }

    /// Left contraction: the grade-(q-p) selection of the geometric product.
    pub fn left_contract(&self, rhs: &Multivector) -> Multivector {
        let table = sign_table();
        let mut out = [0.0; BASIS_SIZE];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let (p, q) = (blade_grade(a), blade_grade(b));
                if q >= p && blade_grade(a ^ b) == q - p {
                    out[a ^ b] += ca * cb * table[a][b];
                }
            }
        }
        Multivector { coeffs: out }
    }

    /// Scalar product <A~ B>_0.
    pub fn scalar_product(&self, rhs: &Multivector) -> f64 {
        let table = sign_table();
        let mut acc = 0.0;
        for (a, &ca) in self.coeffs.iter().enumerate() {
            let cb = rhs.coeffs[a];
            if ca == 0.0 || cb == 0.0 {
                continue;
            }
            acc += reverse_sign(blade_grade(a)) * ca * cb * table[a][a];
        }
        acc
    }

    /// Reverse: grade-p part scaled by (-1)^{p(p-1)/2}.
    pub fn reverse(&self) -> Multivector {
        let mut out = self.coeffs;
        for (mask, c) in out.iter_mut().enumerate() {
            *c *= reverse_sign(blade_grade(mask));
        }
        Multivector { coeffs: out }
    }

    /// Grade projection for p in 0..=4.
    pub fn grade_project(&self, p: usize) -> Result<Multivector, Error> {
        if p > 4 {
            return Err(Error::Argument(format!("grade {p} out of range 0..=4")));
        }
        Ok(self.grade(p))
    }

    /// Grade projection; panics if p > 4.
    pub fn grade(&self, p: usize) -> Multivector {
        assert!(p <= 4, "grade {p} out of range 0..=4");
        let mut out = [0.0; BASIS_SIZE];
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if blade_grade(mask) == p {
                out[mask] = c;
            }
        }
        Multivector { coeffs: out }
    }

    /// The grade of the element if it is grade-homogeneous (or zero), measured
    /// against the given absolute tolerance.
    pub fn homogeneous_grade(&self, tol: f64) -> Option<usize> {
        let mut found: Option<usize> = None;
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c.abs() > tol {
                let g = blade_grade(mask);
                match found {
                    None => found = Some(g),
                    Some(prev) if prev != g => return None,
                    _ => {}
                }
            }
        }
        Some(found.unwrap_or(0))
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Max-norm of the coefficients.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean norm of the coefficient vector (a coordinate norm, not the
    /// indefinite Clifford norm).
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

fn reverse_sign(p: usize) -> f64 {
    if (p * (p.saturating_sub(1)) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        let mut out = self.coeffs;
        for (o, r) in out.iter_mut().zip(rhs.coeffs.iter()) {
            *o += r;
        }
        Multivector { coeffs: out }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        let mut out = self.coeffs;
        for (o, r) in out.iter_mut().zip(rhs.coeffs.iter()) {
            *o -= r;
        }
        Multivector { coeffs: out }
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        let mut out = self.coeffs;
        for o in out.iter_mut() {
            *o *= rhs;
        }
        Multivector { coeffs: out }
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self.geometric_product(&rhs)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; BASIS_SIZE] = [
            "1", "g0", "g1", "g01", "g2", "g02", "g12", "g012", "g3", "g03", "g13", "g013", "g23",
            "g023", "g123", "g0123",
        ];
        let mut first = true;
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{c}*{}", NAMES[mask])?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive blade-product oracle: multiplies blades symbol by symbol with
    /// explicit swap counting, independent of the bitmask sign table.
    fn naive_blade_product(a: usize, b: usize) -> (f64, usize) {
        let mut factors: Vec<usize> = Vec::new();
        for mu in 0..4 {
            if a & (1 << mu) != 0 {
                factors.push(mu);
            }
        }
        for mu in 0..4 {
            if b & (1 << mu) != 0 {
                factors.push(mu);
            }
        }
        let mut sign = 1.0;
        // bubble into ascending order, one adjacent swap at a time
        loop {
            let mut swapped = false;
            for i in 0..factors.len().saturating_sub(1) {
                if factors[i] > factors[i + 1] {
                    factors.swap(i, i + 1);
                    sign = -sign;
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        // contract equal neighbours with the metric
        let mut reduced: Vec<usize> = Vec::new();
        for mu in factors {
            if reduced.last() == Some(&mu) {
                reduced.pop();
                sign *= METRIC[mu];
            } else {
                reduced.push(mu);
            }
        }
        let mut mask = 0usize;
        for mu in reduced {
            mask |= 1 << mu;
        }
        (sign, mask)
    }

    fn random_mv(rng: &mut impl rand::Rng) -> Multivector {
        let mut coeffs = [0.0; BASIS_SIZE];
        for c in coeffs.iter_mut() {
            *c = rng.gen_range(-1.0..1.0);
        }
        Multivector::new(coeffs)
    }

    #[test]
    fn blade_table_matches_naive_oracle() {
        for a in 0..BASIS_SIZE {
            for b in 0..BASIS_SIZE {
                let (sign, mask) = naive_blade_product(a, b);
                let product =
                    Multivector::basis_blade(a).geometric_product(&Multivector::basis_blade(b));
                assert_eq!(product.coeffs[mask], sign, "blades {a:#06b} * {b:#06b}");
                for (m, &c) in product.coeffs.iter().enumerate() {
                    if m != mask {
                        assert_eq!(c, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn anticommutation_matches_metric() {
        for mu in 0..4 {
            for nu in 0..4 {
                let gm = Multivector::gamma(mu);
                let gn = Multivector::gamma(nu);
                let anti = gm * gn + gn * gm;
                let expected = if mu == nu { 2.0 * METRIC[mu] } else { 0.0 };
                assert_eq!(anti, Multivector::scalar(expected), "mu={mu} nu={nu}");
            }
        }
    }

    #[test]
    fn signature_squares() {
        // gamma^0 gamma^0 = 1, gamma^1 gamma^1 = -1
        let g0 = Multivector::gamma(0);
        let g1 = Multivector::gamma(1);
        assert_eq!(g0 * g0, Multivector::scalar(1.0));
        assert_eq!(g1 * g1, Multivector::scalar(-1.0));
    }

    #[test]
    fn pseudoscalar_squares_to_minus_one() {
        let g5 = Multivector::gamma5();
        assert_eq!(g5 * g5, Multivector::scalar(-1.0));
    }

    #[test]
    fn outer_of_parallel_vectors_vanishes() {
        let g0 = Multivector::gamma(0);
        assert_eq!(g0.outer(&g0), Multivector::zero());
    }

    #[test]
    fn scalar_product_of_timelike_bivector() {
        // <(g1 g0)(g0 g1)>_0 = -1, expanded with the kernel product
        let b = Multivector::gamma(0).outer(&Multivector::gamma(1));
        let oracle = b.reverse().geometric_product(&b).scalar_part();
        assert_eq!(oracle, -1.0);
        assert_eq!(b.scalar_product(&b), -1.0);
    }

    #[test]
    fn left_contract_vector_into_bivector() {
        // g1 contracted into g1^g2 = grade-1 part of g1 (g1 g2) = -g2
        let g1 = Multivector::gamma(1);
        let b = g1.outer(&Multivector::gamma(2));
        let oracle = g1.geometric_product(&b).grade(1);
        assert_eq!(oracle, -Multivector::gamma(2));
        assert_eq!(g1.left_contract(&b), -Multivector::gamma(2));
    }

    #[test]
    fn left_contract_by_scalar_scales() {
        let b = Multivector::gamma(0).outer(&Multivector::gamma(1));
        assert_eq!(Multivector::scalar(2.0).left_contract(&b), b * 2.0);
    }

    #[test]
    fn reverse_signs_per_grade() {
        let b = Multivector::gamma(0).outer(&Multivector::gamma(1));
        assert_eq!(b.reverse(), -b);
        let g0 = Multivector::gamma(0);
        assert_eq!(g0.reverse(), g0);
    }

    #[test]
    fn grade_projection_selects() {
        let m = Multivector::scalar(1.0) + Multivector::gamma(0) + Multivector::gamma5();
        assert_eq!(m.grade(4), Multivector::gamma5());
        assert_eq!(m.grade(0), Multivector::scalar(1.0));
        assert!(m.grade_project(5).is_err());
    }

    #[test]
    fn grade_projection_idempotent_and_complete() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = random_mv(&mut rng);
            let mut total = Multivector::zero();
            for p in 0..=4 {
                let gp = m.grade(p);
                assert_eq!(gp.grade(p), gp);
                total = total + gp;
            }
            assert_eq!(total, m);
        }
    }

    #[test]
    fn associativity_randomized() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_mv(&mut rng);
            let b = random_mv(&mut rng);
            let c = random_mv(&mut rng);
            let lhs = (a * b) * c;
            let rhs = a * (b * c);
            let scale = lhs.norm_inf().max(1.0);
            assert!((lhs - rhs).norm_inf() / scale < 1e-12);
        }
    }

    #[test]
    fn scalar_grade_commutes() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let a = random_mv(&mut rng);
            let b = random_mv(&mut rng);
            let ab = (a * b).scalar_part();
            let ba = (b * a).scalar_part();
            assert!((ab - ba).abs() < 1e-12 * ab.abs().max(1.0));
        }
    }

    #[test]
    fn outer_is_antisymmetrized_product_on_vectors() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let u = random_mv(&mut rng).grade(1);
            let v = random_mv(&mut rng).grade(1);
            let wedge = u.outer(&v);
            let anti = (u * v - v * u) * 0.5;
            assert!((wedge - anti).norm_inf() < 1e-12);
        }
    }

    #[test]
    fn outer_associative_and_grade_additive() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let a = random_mv(&mut rng);
            let b = random_mv(&mut rng);
            let c = random_mv(&mut rng);
            let lhs = a.outer(&b).outer(&c);
            let rhs = a.outer(&b.outer(&c));
            assert!((lhs - rhs).norm_inf() < 1e-12 * lhs.norm_inf().max(1.0));
        }
    }

    #[test]
    fn scalar_product_symmetric() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let a = random_mv(&mut rng);
            let b = random_mv(&mut rng);
            assert!((a.scalar_product(&b) - b.scalar_product(&a)).abs() < 1e-12);
        }
    }
}
