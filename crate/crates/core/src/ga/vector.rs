use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::GaError;

/// Tolerance on `| |v| - 1 |` for a vector to count as a unit direction.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A Euclidean 3-vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 1.0, 0.0);
    pub const E3: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs()).max((self.z - other.z).abs())
    }
}

impl From<[f64; 3]> for Vector3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<Vector3> for [f64; 3] {
    fn from(v: Vector3) -> Self {
        v.to_array()
    }
}

impl Add for Vector3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vector3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// A direction: a [`Vector3`] whose norm is 1 to within [`UNIT_TOLERANCE`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vector3", into = "Vector3")]
pub struct UnitVector3(Vector3);

impl UnitVector3 {
    pub const E1: Self = Self(Vector3::E1);
    pub const E2: Self = Self(Vector3::E2);
    pub const E3: Self = Self(Vector3::E3);

    /// Accepts `v` only if it is already unit length.
    pub fn try_new(v: Vector3) -> Result<Self, GaError> {
        if !v.is_finite() {
            return Err(GaError::NonFinite);
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(GaError::NonUnit { norm });
        }
        Ok(Self(v))
    }

    /// Scales `v` onto the unit sphere. Fails for zero or non-finite input.
    pub fn normalize(v: Vector3) -> Result<Self, GaError> {
        if !v.is_finite() {
            return Err(GaError::NonFinite);
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(GaError::NonUnit { norm });
        }
        Ok(Self(v * (1.0 / norm)))
    }

    /// Unit vector at `angle` radians in the plane orthogonal to `axis`,
    /// measured counter-clockwise about `axis` from a fixed reference
    /// direction (e1 for the e3 axis).
    pub fn in_plane(axis: UnitVector3, angle: f64) -> Self {
        let n = axis.get();
        // Pick the coordinate axis least aligned with n and project it out.
        let seed = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
            Vector3::E1
        } else if n.y.abs() <= n.z.abs() {
            Vector3::E2
        } else {
            Vector3::E3
        };
        let reference = seed - n * seed.dot(&n);
        let u = reference * (1.0 / reference.norm());
        let w = n.cross(&u);
        let (s, c) = angle.sin_cos();
        Self(u * c + w * s)
    }

    pub fn get(&self) -> Vector3 {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn cross(&self, other: &Self) -> Vector3 {
        self.0.cross(&other.0)
    }

    /// Unsigned angle in `[0, pi]`.
    pub fn angle_to(&self, other: &Self) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

impl Neg for UnitVector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl TryFrom<Vector3> for UnitVector3 {
    type Error = GaError;
    fn try_from(v: Vector3) -> Result<Self, GaError> {
        Self::try_new(v)
    }
}

impl From<UnitVector3> for Vector3 {
    fn from(u: UnitVector3) -> Self {
        u.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unit() {
        assert!(matches!(UnitVector3::try_new(Vector3::new(2.0, 0.0, 0.0)), Err(GaError::NonUnit { .. })));
        assert!(UnitVector3::normalize(Vector3::ZERO).is_err());
        assert!(UnitVector3::try_new(Vector3::new(f64::NAN, 0.0, 0.0)).is_err());
    }

    #[test]
    fn in_plane_about_e3_starts_at_e1() {
        let u = UnitVector3::in_plane(UnitVector3::E3, 0.0).get();
        assert!(u.max_abs_diff(&Vector3::E1) < 1e-15);
        let v = UnitVector3::in_plane(UnitVector3::E3, std::f64::consts::FRAC_PI_2).get();
        assert!(v.max_abs_diff(&Vector3::E2) < 1e-15);
    }

    #[test]
    fn in_plane_is_orthogonal_to_axis() {
        let axis = UnitVector3::normalize(Vector3::new(0.3, -1.2, 0.7)).unwrap();
        for k in 0..12 {
            let u = UnitVector3::in_plane(axis, k as f64 * 0.5);
            assert!(u.dot(&axis).abs() < 1e-15);
            assert!((u.get().norm() - 1.0).abs() < 1e-15);
        }
    }
}
