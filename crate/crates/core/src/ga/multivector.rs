use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::table::{BLADES, BLADE_GRADE, PRODUCT_TABLE};
use super::vector::Vector3;
use super::GaError;

/// Default absolute tolerance on coefficients.
pub const COEFF_TOLERANCE: f64 = 1e-12;

/// Below this bivector magnitude `exp` switches to `1 + B`.
const EXP_SMALL_ANGLE: f64 = 1e-9;

/// A general element of Cl(3,0).
///
/// Coefficients follow the storage order `[1, e1, e2, e3, e23, e31, e12, e123]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 8]", into = "[f64; 8]")]
pub struct Multivector {
    c: [f64; BLADES],
}

impl Multivector {
    pub const ZERO: Self = Self::from_coeffs([0.0; BLADES]);
    pub const ONE: Self = Self::basis(0);
    pub const E1: Self = Self::basis(1);
    pub const E2: Self = Self::basis(2);
    pub const E3: Self = Self::basis(3);
    pub const E23: Self = Self::basis(4);
    pub const E31: Self = Self::basis(5);
    pub const E12: Self = Self::basis(6);
    /// The right-handed unit pseudoscalar `e123`.
    pub const I: Self = Self::basis(7);

    pub const fn from_coeffs(c: [f64; BLADES]) -> Self {
        Self { c }
    }

    /// The unit basis blade stored at `slot`.
    pub const fn basis(slot: usize) -> Self {
        let mut c = [0.0; BLADES];
        c[slot] = 1.0;
        Self { c }
    }

    pub const fn scalar(s: f64) -> Self {
        let mut c = [0.0; BLADES];
        c[0] = s;
        Self { c }
    }

    pub const fn vector(v: Vector3) -> Self {
        Self::from_coeffs([0.0, v.x, v.y, v.z, 0.0, 0.0, 0.0, 0.0])
    }

    /// `p e23 + q e31 + r e12`.
    pub const fn bivector(p: f64, q: f64, r: f64) -> Self {
        Self::from_coeffs([0.0, 0.0, 0.0, 0.0, p, q, r, 0.0])
    }

    pub const fn pseudoscalar(t: f64) -> Self {
        Self::from_coeffs([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, t])
    }

    pub fn coeffs(&self) -> &[f64; BLADES] {
        &self.c
    }

    pub fn coeff(&self, slot: usize) -> f64 {
        self.c[slot]
    }

    pub fn scalar_part(&self) -> f64 {
        self.c[0]
    }

    pub fn vector_part(&self) -> Vector3 {
        Vector3::new(self.c[1], self.c[2], self.c[3])
    }

    /// The `(e23, e31, e12)` coefficients, i.e. the vector dual to the bivector part.
    pub fn bivector_dual(&self) -> Vector3 {
        Vector3::new(self.c[4], self.c[5], self.c[6])
    }

    pub fn pseudoscalar_part(&self) -> f64 {
        self.c[7]
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    /// Grade-`k` projection. `k` must lie in `0..=3`.
    pub fn grade(&self, k: usize) -> Result<Self, GaError> {
        if k > 3 {
            return Err(GaError::GradeOutOfRange(k));
        }
        Ok(self.grade_unchecked(k))
    }

    fn grade_unchecked(&self, k: usize) -> Self {
        let mut out = Self::ZERO;
        for (slot, &g) in BLADE_GRADE.iter().enumerate() {
            if g == k {
                out.c[slot] = self.c[slot];
            }
        }
        out
    }

    /// True when every coefficient outside grade `k` is exactly zero.
    pub fn is_pure_grade(&self, k: usize) -> bool {
        BLADE_GRADE.iter().zip(self.c.iter()).all(|(&g, &x)| g == k || x == 0.0)
    }

    /// Largest absolute coefficient outside grade 0.
    pub fn max_nonscalar(&self) -> f64 {
        self.c[1..].iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Euclidean norm of the non-scalar coefficients.
    pub fn nonscalar_norm(&self) -> f64 {
        self.c[1..].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Grade-wise sign flip `(-1)^{k(k-1)/2}`: negates grades 2 and 3.
    pub fn reverse(&self) -> Self {
        let mut out = *self;
        for (slot, &g) in BLADE_GRADE.iter().enumerate() {
            if g >= 2 {
                out.c[slot] = -out.c[slot];
            }
        }
        out
    }

    /// `sqrt(<a reverse(a)>_0)`, which in Cl(3,0) is the coefficient 2-norm.
    pub fn norm(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn geometric_product(&self, rhs: &Self) -> Self {
        let mut out = [0.0; BLADES];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                let p = PRODUCT_TABLE[i][j];
                out[p.slot] += f64::from(p.sign) * a * b;
            }
        }
        Self { c: out }
    }

    /// `ab - ba`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        *self * *rhs - *rhs * *self
    }

    /// Inverse via `a^-1 = reverse(a) / <a reverse(a)>_0`, accepted only if
    /// both `a a^-1` and `a^-1 a` are within [`COEFF_TOLERANCE`] of 1.
    pub fn inverse(&self) -> Result<Self, GaError> {
        let rev = self.reverse();
        let denom = (*self * rev).scalar_part();
        if denom.is_nan() || denom <= 0.0 || !denom.is_finite() {
            return Err(GaError::NonInvertible { residual: 1.0 });
        }
        let inv = rev * (1.0 / denom);
        let residual = (*self * inv - Self::ONE).max_abs().max((inv * *self - Self::ONE).max_abs());
        if residual > COEFF_TOLERANCE {
            return Err(GaError::NonInvertible { residual });
        }
        Ok(inv)
    }

    /// `exp(B)` for a pure bivector `B`: `cos|B| + (B/|B|) sin|B|`.
    pub fn exp_bivector(&self) -> Result<Self, GaError> {
        if !self.is_pure_grade(2) {
            return Err(GaError::NotBivector);
        }
        let angle = self.norm();
        if angle < EXP_SMALL_ANGLE {
            return Ok(Self::ONE + *self);
        }
        let (s, c) = angle.sin_cos();
        Ok(Self::scalar(c) + *self * (s / angle))
    }
}

impl From<[f64; BLADES]> for Multivector {
    fn from(c: [f64; BLADES]) -> Self {
        Self { c }
    }
}

impl From<Multivector> for [f64; BLADES] {
    fn from(m: Multivector) -> Self {
        m.c
    }
}

impl From<f64> for Multivector {
    fn from(s: f64) -> Self {
        Self::scalar(s)
    }
}

impl From<Vector3> for Multivector {
    fn from(v: Vector3) -> Self {
        Self::vector(v)
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
        self
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.c.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.geometric_product(&rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for a in self.c.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, m: Multivector) -> Multivector {
        m * self
    }
}

impl Sum for Multivector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, m| acc + m)
    }
}

/// A pure grade-2 multivector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(into = "Multivector")]
pub struct Bivector(Multivector);

impl Bivector {
    pub const ZERO: Self = Self(Multivector::ZERO);

    /// The bivector `I v`, dual to `v`.
    pub fn dual_of(v: Vector3) -> Self {
        Self(Multivector::bivector(v.x, v.y, v.z))
    }

    /// `u ^ v`.
    pub fn wedge(u: Vector3, v: Vector3) -> Self {
        Self::dual_of(u.cross(&v))
    }

    pub fn get(&self) -> Multivector {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn exp(&self) -> Multivector {
        self.0.exp_bivector().expect("Bivector is pure grade 2 by construction")
    }
}

impl TryFrom<Multivector> for Bivector {
    type Error = GaError;
    fn try_from(m: Multivector) -> Result<Self, GaError> {
        if m.is_pure_grade(2) {
            Ok(Self(m))
        } else {
            Err(GaError::NotBivector)
        }
    }
}

impl From<Bivector> for Multivector {
    fn from(b: Bivector) -> Self {
        b.0
    }
}

impl Add for Bivector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Neg for Bivector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul<f64> for Bivector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0 * s)
    }
}

/// A multiple of the unit pseudoscalar `I = e123`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trivector(pub f64);

impl Trivector {
    pub const I: Self = Self(1.0);

    pub fn get(&self) -> Multivector {
        Multivector::pseudoscalar(self.0)
    }
}

impl From<Trivector> for Multivector {
    fn from(t: Trivector) -> Self {
        t.get()
    }
}
