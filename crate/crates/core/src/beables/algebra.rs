//! Executable versions of the two beable algebras.
//!
//! The scalar suite samples Bell beables `sign(lambda . n)` and checks the
//! eight field axioms exactly. The bivector suite samples `mu n` at
//! `mu = +I` and checks the same additive and associative laws plus the
//! commutator law `[mu a, mu b] = -2 mu (a x b)` in place of commutativity.
//! At `mu = -I` the commutator law is reported as a discrepancy rather
//! than an axiom: the left side is sign-independent and the right side is not.

use serde::Serialize;

use super::{bell_beable, Beable, Microstate};
use crate::ga::{Bivector, Multivector, UnitVector3};
use crate::sampling;

/// Tolerance for the bivector suite.
pub const AXIOM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomRecord {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub suite: String,
    pub seed: u64,
    pub tolerance: f64,
    pub axioms: Vec<AxiomRecord>,
    /// Measured gaps that are recorded but not counted as failures.
    pub discrepancies: Vec<AxiomRecord>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }

    pub fn axiom(&self, name: &str) -> Option<&AxiomRecord> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

/// Running maximum of residuals for a fixed list of named checks.
struct Tally {
    names: &'static [&'static str],
    max: Vec<f64>,
    samples: usize,
}

impl Tally {
    fn new(names: &'static [&'static str]) -> Self {
        Self { names, max: vec![0.0; names.len()], samples: 0 }
    }

    fn record(&mut self, residuals: &[f64]) {
        debug_assert_eq!(residuals.len(), self.max.len());
        for (m, &r) in self.max.iter_mut().zip(residuals) {
            // NaN residuals must stick.
            if r.is_nan() || r > *m {
                *m = r;
            }
        }
    }

    fn into_records(self, tolerance: f64) -> Vec<AxiomRecord> {
        self.names
            .iter()
            .zip(self.max)
            .map(|(name, max_residual)| AxiomRecord {
                name: (*name).to_owned(),
                samples: self.samples,
                max_residual,
                pass: max_residual <= tolerance,
            })
            .collect()
    }
}

const SCALAR_AXIOMS: &[&str] = &[
    "additive inverse and identity",
    "multiplicative inverse and identity",
    "associative law of addition",
    "associative law of multiplication",
    "left distributive law",
    "right distributive law",
    "commutative law of addition",
    "commutative law of multiplication",
];

const BIVECTOR_AXIOMS: &[&str] = &[
    "additive inverse and identity",
    "multiplicative inverse and identity",
    "associative law of addition",
    "associative law of multiplication",
    "left distributive law",
    "right distributive law",
    "commutative law of addition",
    "non-commutative law of multiplication",
];

const MINUS_I_COMMUTATOR: &[&str] = &["non-commutative law of multiplication at mu = -I"];

/// Checks the scalar field axioms on `samples` random triples of Bell
/// beable values. Every residual must be exactly zero.
#[allow(clippy::eq_op)]
pub fn scalar_algebra_suite(samples: usize, seed: u64) -> AxiomReport {
    let mut rng = sampling::stream_rng(seed, 0);
    let mut tally = Tally::new(SCALAR_AXIOMS);
    for _ in 0..samples {
        let lambda = sampling::unit_vector(&mut rng);
        let [a, b, c] = [0; 3].map(|_| f64::from(bell_beable(&lambda, &sampling::unit_vector(&mut rng))));
        let a_inv = 1.0 / a;
        tally.record(&[
            ((-a) + a).abs().max((a + (-a)).abs()).max((a + 0.0 - a).abs()),
            (a_inv * a - 1.0).abs().max((a * a_inv - 1.0).abs()).max((1.0 * a - a).abs()),
            ((a + (b + c)) - ((a + b) + c)).abs(),
            ((a * (b * c)) - ((a * b) * c)).abs(),
            ((a * (b + c)) - (a * b + a * c)).abs(),
            (((b + c) * a) - (b * a + c * a)).abs(),
            ((a + b) - (b + a)).abs(),
            ((a * b) - (b * a)).abs(),
        ]);
        tally.samples += 1;
    }
    AxiomReport {
        suite: "scalar".to_owned(),
        seed,
        tolerance: 0.0,
        axioms: tally.into_records(0.0),
        discrepancies: Vec::new(),
    }
}

/// `[mu a, mu b] + 2 mu (a x b)`: zero when the commutator law holds.
fn commutator_law_residual(mu: Microstate, a: &UnitVector3, b: &UnitVector3) -> f64 {
    let lhs = Beable::new(mu, *a).get().commutator(&Beable::new(mu, *b).get());
    let rhs = dual_beable(mu, a.cross(b)).get() * -2.0;
    lhs.max_abs_diff(&rhs)
}

/// Checks the corrected (bivector) algebra on `samples` random direction
/// triples at `mu = +I`, and measures the commutator law at `mu = -I`.
pub fn bivector_algebra_suite(samples: usize, seed: u64) -> AxiomReport {
    let mut rng = sampling::stream_rng(seed, 1);
    let mut tally = Tally::new(BIVECTOR_AXIOMS);
    let mut minus = Tally::new(MINUS_I_COMMUTATOR);
    let mu = Microstate::Plus;
    for _ in 0..samples {
        let [na, nb, nc] = [0; 3].map(|_| sampling::unit_vector(&mut rng));
        let [a, b, c] = [na, nb, nc].map(|n| Beable::new(mu, n).get());
        let zero = Multivector::ZERO;
        let one = Multivector::ONE;
        let inverse_residual = match a.inverse() {
            Ok(a_inv) => {
                (a_inv * a).max_abs_diff(&one).max((a * a_inv).max_abs_diff(&one)).max((one * a).max_abs_diff(&a))
            }
            Err(_) => f64::INFINITY,
        };
        tally.record(&[
            ((-a) + a).max_abs_diff(&zero).max((a + (-a)).max_abs_diff(&zero)).max((a + zero).max_abs_diff(&a)),
            inverse_residual,
            (a + (b + c)).max_abs_diff(&((a + b) + c)),
            (a * (b * c)).max_abs_diff(&((a * b) * c)),
            (a * (b + c)).max_abs_diff(&(a * b + a * c)),
            ((b + c) * a).max_abs_diff(&(b * a + c * a)),
            (a + b).max_abs_diff(&(b + a)),
            commutator_law_residual(mu, &na, &nb),
        ]);
        tally.samples += 1;
        minus.record(&[commutator_law_residual(Microstate::Minus, &na, &nb)]);
        minus.samples += 1;
    }
    AxiomReport {
        suite: "bivector".to_owned(),
        seed,
        tolerance: AXIOM_TOLERANCE,
        axioms: tally.into_records(AXIOM_TOLERANCE),
        discrepancies: minus.into_records(AXIOM_TOLERANCE),
    }
}

/// `C_v(mu) = mu v` for a vector that need not be unit, as used on the
/// right side of the commutator law.
pub fn dual_beable(mu: Microstate, v: crate::ga::Vector3) -> Bivector {
    Bivector::dual_of(v) * mu.sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_suite_is_exact() {
        let report = scalar_algebra_suite(500, 3);
        assert_eq!(report.axioms.len(), 8);
        for a in &report.axioms {
            assert_eq!(a.max_residual, 0.0, "{}", a.name);
            assert_eq!(a.samples, 500);
        }
        assert!(report.all_pass());
    }

    #[test]
    fn scalar_examples() {
        let (a, b) = (1.0f64, -1.0f64);
        assert_eq!(a * b, -1.0);
        assert_eq!(b * a, -1.0);
        let a = -1.0f64;
        assert_eq!((1.0 / a) * a, 1.0);
        let (a, b, c) = (1.0f64, 1.0f64, -1.0f64);
        assert_eq!(a * (b + c), 0.0);
        assert_eq!(a * b + a * c, 0.0);
    }

    #[test]
    fn bivector_suite_passes_at_plus_i() {
        let report = bivector_algebra_suite(500, 3);
        assert!(report.all_pass(), "{report:#?}");
        let minus = &report.discrepancies[0];
        assert!(!minus.pass);
        assert!(minus.max_residual > 1.0);
    }

    #[test]
    fn commutator_examples() {
        let (e1, e2) = (UnitVector3::E1, UnitVector3::E2);
        let plus = Beable::new(Microstate::Plus, e1).get().commutator(&Beable::new(Microstate::Plus, e2).get());
        assert_eq!(plus, Multivector::E12 * -2.0);
        assert_eq!(commutator_law_residual(Microstate::Plus, &e1, &e2), 0.0);
        let minus = Beable::new(Microstate::Minus, e1).get().commutator(&Beable::new(Microstate::Minus, e2).get());
        assert_eq!(minus, Multivector::E12 * -2.0);
        let rhs = dual_beable(Microstate::Minus, e1.cross(&e2)).get() * -2.0;
        assert_eq!(rhs, Multivector::E12 * 2.0);
        assert_eq!((minus - rhs).norm(), 4.0);
    }

    #[test]
    fn beable_inverse_is_negation() {
        let a = Beable::new(Microstate::Plus, UnitVector3::E1).get();
        assert_eq!(a.inverse().unwrap(), -a);
        assert_eq!(a.inverse().unwrap() * a, Multivector::ONE);
    }
}
