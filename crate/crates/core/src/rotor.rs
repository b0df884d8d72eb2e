//! Rotors, the Euler-angle rate singularity, and the quaternion subalgebra.
//!
//! A rotor for a right-handed turn by `theta` about the unit axis `n` is
//! `R = cos(theta/2) - I n sin(theta/2)` and acts on vectors by
//! `v -> R v reverse(R)`. `R` and `-R` give the same rotation.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::ga::{Bivector, GaError, Multivector, UnitVector3, Vector3, COEFF_TOLERANCE};

/// `|det|` below this is reported as gimbal lock.
pub const GIMBAL_LOCK_THRESHOLD: f64 = 1e-6;

/// An even-grade multivector with `R reverse(R) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(into = "Multivector")]
pub struct Rotor(Multivector);

impl Rotor {
    pub const IDENTITY: Self = Self(Multivector::ONE);

    pub fn from_axis_angle(axis: UnitVector3, angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self(Multivector::scalar(c) - Bivector::dual_of(axis.get()).get() * s)
    }

    /// Like [`Rotor::from_axis_angle`] but rejects a non-unit axis.
    pub fn try_from_axis_angle(axis: Vector3, angle: f64) -> Result<Self, GaError> {
        Ok(Self::from_axis_angle(UnitVector3::try_new(axis)?, angle))
    }

    pub fn get(&self) -> Multivector {
        self.0
    }

    pub fn reverse(&self) -> Self {
        Self(self.0.reverse())
    }

    /// Largest coefficient of `R reverse(R) - 1`.
    pub fn normalization_residual(&self) -> f64 {
        (self.0 * self.0.reverse() - Multivector::ONE).max_abs()
    }

    /// `R m reverse(R)`.
    pub fn sandwich(&self, m: &Multivector) -> Multivector {
        self.0 * *m * self.0.reverse()
    }

    pub fn rotate(&self, v: Vector3) -> Vector3 {
        self.sandwich(&Multivector::vector(v)).vector_part()
    }
}

impl TryFrom<Multivector> for Rotor {
    type Error = GaError;
    fn try_from(m: Multivector) -> Result<Self, GaError> {
        if m.coeff(1) != 0.0 || m.coeff(2) != 0.0 || m.coeff(3) != 0.0 || m.coeff(7) != 0.0 {
            return Err(GaError::NotBivector);
        }
        let rotor = Self(m);
        let residual = rotor.normalization_residual();
        if residual > COEFF_TOLERANCE {
            return Err(GaError::NonInvertible { residual });
        }
        Ok(rotor)
    }
}

impl From<Rotor> for Multivector {
    fn from(r: Rotor) -> Self {
        r.0
    }
}

/// Composition: `(a * b).rotate(v) == a.rotate(b.rotate(v))`.
impl Mul for Rotor {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// Intrinsic z-y-x (yaw, pitch, roll) angles in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
}

impl EulerAngles {
    pub const fn new(yaw: f64, pitch: f64, roll: f64) -> Self {
        Self { yaw, pitch, roll }
    }

    pub fn to_rotor(&self) -> Rotor {
        Rotor::from_axis_angle(UnitVector3::E3, self.yaw)
            * Rotor::from_axis_angle(UnitVector3::E2, self.pitch)
            * Rotor::from_axis_angle(UnitVector3::E1, self.roll)
    }

    /// The world-frame axes that the roll, pitch and yaw rates spin about.
    pub fn rate_axes(&self) -> [Vector3; 3] {
        let yaw = Rotor::from_axis_angle(UnitVector3::E3, self.yaw);
        let yaw_pitch = yaw * Rotor::from_axis_angle(UnitVector3::E2, self.pitch);
        [yaw_pitch.rotate(Vector3::E1), yaw.rotate(Vector3::E2), Vector3::E3]
    }

    /// Determinant of the linear map from Euler-angle rates to angular
    /// velocity, with columns ordered (roll, pitch, yaw). Equals `cos(pitch)`.
    pub fn rate_determinant(&self) -> f64 {
        let [roll, pitch, yaw] = self.rate_axes();
        roll.dot(&pitch.cross(&yaw))
    }

    pub fn is_gimbal_locked(&self) -> bool {
        self.rate_determinant().abs() < GIMBAL_LOCK_THRESHOLD
    }
}

/// `(pitch, det)` rows over pitch in `[-pi/2, pi/2]`, one degree apart.
pub fn gimbal_sweep() -> Vec<(f64, f64)> {
    (-90..=90)
        .map(|deg| {
            let pitch = f64::from(deg).to_radians();
            (pitch, EulerAngles::new(0.0, pitch, 0.0).rate_determinant())
        })
        .collect()
}

/// One quaternion identity evaluated in the even subalgebra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub residual: f64,
    pub pass: bool,
}

/// Checks Hamilton's relations for `i = e32`, `j = e13`, `k = e21`.
/// The products are exact in the blade table, so `pass` demands a zero residual.
pub fn quaternion_isomorphism_check() -> Vec<IdentityCheck> {
    let i = -Multivector::E23;
    let j = -Multivector::E31;
    let k = -Multivector::E12;
    let minus_one = -Multivector::ONE;
    let cases = [
        ("i^2 = -1", i * i, minus_one),
        ("j^2 = -1", j * j, minus_one),
        ("k^2 = -1", k * k, minus_one),
        ("ijk = -1", i * j * k, minus_one),
        ("ij = k", i * j, k),
        ("jk = i", j * k, i),
        ("ki = j", k * i, j),
    ];
    cases
        .into_iter()
        .map(|(name, lhs, rhs)| {
            let residual = lhs.max_abs_diff(&rhs);
            IdentityCheck { name, residual, pass: residual == 0.0 }
        })
        .collect()
}
