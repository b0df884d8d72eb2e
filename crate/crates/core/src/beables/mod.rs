//! Local beables of the two hidden-variable models.
//!
//! The bivector model assigns to a detector direction `n` the unit bivector
//! `mu n`, where the microstate `mu = +I` or `-I` is the hidden variable.
//! Bell's scalar model assigns `sign(lambda . n)` for a hidden unit vector
//! `lambda`.
//!
//! Two readings of the pair product `(mu a)(mu b)` are provided:
//!
//! * [`pair_product_paper`] evaluates the closed form `-a.b - mu (a x b)`,
//!   whose bivector term follows the sign of `mu`;
//! * [`pair_product_geometric`] multiplies the two beables with the geometric
//!   product, which gives `-a.b - I (a x b)` for either sign.
//!
//! They agree at `mu = +I` and differ by `-2 I (a x b)` at `mu = -I`;
//! [`evaluator_discrepancy`] reports that gap.

mod algebra;
mod evaluator;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ga::{Bivector, GaError, Multivector, UnitVector3, Vector3};

pub use algebra::{
    bivector_algebra_suite, dual_beable, scalar_algebra_suite, AxiomRecord, AxiomReport, AXIOM_TOLERANCE,
};
pub use evaluator::{
    builtin_evaluators, EvaluatorRegistry, GeometricEvaluator, PairEvaluator, PaperEvaluator, DEFAULT_EVALUATOR,
};

/// `|lambda . n|` below this counts as a tie and resolves to `+1`.
pub const BELL_TIE_TOLERANCE: f64 = 1e-15;

/// Below this `|a x b|` the exponential form falls back to the scalar branch.
const PARALLEL_TOLERANCE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BeableError {
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error("unknown evaluator `{0}`")]
    UnknownEvaluator(String),
    #[error("evaluator `{0}` is already registered")]
    DuplicateEvaluator(String),
}

/// The hidden variable: the handedness of the pseudoscalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Microstate {
    Plus,
    Minus,
}

impl Microstate {
    pub const ALL: [Microstate; 2] = [Microstate::Plus, Microstate::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Microstate::Plus => 1.0,
            Microstate::Minus => -1.0,
        }
    }

    /// `mu` as a multivector, `+I` or `-I`.
    pub fn trivector(self) -> Multivector {
        Multivector::pseudoscalar(self.sign())
    }

    pub fn flipped(self) -> Self {
        match self {
            Microstate::Plus => Microstate::Minus,
            Microstate::Minus => Microstate::Plus,
        }
    }
}

/// The bivector beable `mu n` of one detector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Beable {
    pub mu: Microstate,
    pub n: UnitVector3,
    pub value: Bivector,
}

impl Beable {
    pub fn new(mu: Microstate, n: UnitVector3) -> Self {
        let product = mu.trivector() * Multivector::vector(n.get());
        let value = Bivector::try_from(product).expect("I times a vector is a bivector");
        Self { mu, n, value }
    }

    pub fn try_new(mu: Microstate, n: Vector3) -> Result<Self, GaError> {
        Ok(Self::new(mu, UnitVector3::try_new(n)?))
    }

    pub fn get(&self) -> Multivector {
        self.value.get()
    }
}

/// `-(a . b) - sign(mu) I (a x b)`.
pub fn pair_product_paper(mu: Microstate, a: &UnitVector3, b: &UnitVector3) -> Multivector {
    Multivector::scalar(-a.dot(b)) - Bivector::dual_of(a.cross(b)).get() * mu.sign()
}

/// `-exp(mu z theta_ab)` with `z = (a x b)/|a x b|`, or the scalar `-(a . b)`
/// when `a` and `b` are parallel and `z` is undefined.
pub fn pair_product_exponential(mu: Microstate, a: &UnitVector3, b: &UnitVector3) -> Multivector {
    let axis = a.cross(b);
    let sin = axis.norm();
    let cos = a.dot(b);
    if sin < PARALLEL_TOLERANCE {
        return Multivector::scalar(-cos);
    }
    let theta = sin.atan2(cos);
    let z = axis * (1.0 / sin);
    let generator = mu.trivector() * Multivector::vector(z) * theta;
    -generator.exp_bivector().expect("mu z is a bivector")
}

/// `(mu a)(mu b)` by the geometric product.
pub fn pair_product_geometric(mu: Microstate, a: &UnitVector3, b: &UnitVector3) -> Multivector {
    Beable::new(mu, *a).get() * Beable::new(mu, *b).get()
}

/// Literal geometric product minus the closed form, for one pair product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub mu: Microstate,
    pub difference: Multivector,
    pub norm: f64,
}

pub fn evaluator_discrepancy(mu: Microstate, a: &UnitVector3, b: &UnitVector3) -> Discrepancy {
    let difference = pair_product_geometric(mu, a, b) - pair_product_paper(mu, a, b);
    Discrepancy { mu, difference, norm: difference.norm() }
}

/// Bell's scalar beable `sign(lambda . n)`, ties resolved to `+1`.
pub fn bell_beable(lambda: &UnitVector3, n: &UnitVector3) -> i8 {
    let d = lambda.dot(n);
    if d.abs() < BELL_TIE_TOLERANCE || d > 0.0 {
        1
    } else {
        -1
    }
}

/// Both sides of the pointwise relation `A_n = -B_n` and the perfect
/// correlation product `A_n B_n`, with `B_n` built like `A_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerfectCorrelationCheck {
    /// `A_n + B_n`, zero only if the pointwise relation holds.
    pub sum: Multivector,
    /// `A_n B_n`, the scalar `-1` required by `E(n, n) = -1`.
    pub product: Multivector,
}

pub fn perfect_correlation_check(mu: Microstate, n: &UnitVector3) -> PerfectCorrelationCheck {
    let alice = Beable::new(mu, *n).get();
    let bob = Beable::new(mu, *n).get();
    PerfectCorrelationCheck { sum: alice + bob, product: alice * bob }
}

/// `[mu a, mu a']` for two settings on the same side.
pub fn counterfactual_commutator(mu: Microstate, a: &UnitVector3, a_prime: &UnitVector3) -> Multivector {
    Beable::new(mu, *a).get().commutator(&Beable::new(mu, *a_prime).get())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> UnitVector3 {
        [UnitVector3::E1, UnitVector3::E2, UnitVector3::E3][i]
    }

    #[test]
    fn beable_examples() {
        assert_eq!(Beable::new(Microstate::Plus, e(2)).get(), Multivector::E12);
        assert_eq!(Beable::new(Microstate::Minus, e(2)).get(), -Multivector::E12);
        assert_eq!(Beable::new(Microstate::Plus, e(0)).get(), Multivector::E23);
        assert!(Beable::try_new(Microstate::Plus, Vector3::new(0.0, 2.0, 0.0)).is_err());
    }

    #[test]
    fn paper_pair_product_examples() {
        assert_eq!(pair_product_paper(Microstate::Plus, &e(0), &e(1)), -Multivector::E12);
        assert_eq!(pair_product_paper(Microstate::Minus, &e(0), &e(1)), Multivector::E12);
        for mu in Microstate::ALL {
            assert_eq!(pair_product_paper(mu, &e(1), &e(1)), -Multivector::ONE);
        }
    }

    #[test]
    fn geometric_pair_product_examples() {
        assert_eq!(pair_product_geometric(Microstate::Plus, &e(0), &e(1)), -Multivector::E12);
        assert_eq!(pair_product_geometric(Microstate::Minus, &e(0), &e(1)), -Multivector::E12);
        for mu in Microstate::ALL {
            assert_eq!(pair_product_geometric(mu, &e(2), &e(2)), -Multivector::ONE);
        }
    }

    #[test]
    fn exponential_form_matches_closed_form() {
        let a = UnitVector3::normalize(Vector3::new(0.2, -0.7, 0.4)).unwrap();
        let b = UnitVector3::normalize(Vector3::new(-0.9, 0.1, 0.3)).unwrap();
        for mu in Microstate::ALL {
            let closed = pair_product_paper(mu, &a, &b);
            let expo = pair_product_exponential(mu, &a, &b);
            assert!(closed.approx_eq(&expo, 1e-15), "{closed} vs {expo}");
        }
        assert_eq!(pair_product_exponential(Microstate::Minus, &a, &a), Multivector::scalar(-a.dot(&a)));
        assert_eq!(pair_product_exponential(Microstate::Plus, &a, &-a), Multivector::scalar(a.dot(&a)));
    }

    #[test]
    fn discrepancy_examples() {
        let plus = evaluator_discrepancy(Microstate::Plus, &e(0), &e(1));
        assert_eq!(plus.difference, Multivector::ZERO);
        let minus = evaluator_discrepancy(Microstate::Minus, &e(0), &e(1));
        assert_eq!(minus.difference, Multivector::E12 * -2.0);
        assert_eq!(minus.norm, 2.0);
        assert_eq!(evaluator_discrepancy(Microstate::Minus, &e(2), &e(2)).norm, 0.0);
    }

    #[test]
    fn bell_beable_examples() {
        assert_eq!(bell_beable(&e(2), &e(2)), 1);
        assert_eq!(bell_beable(&e(2), &-e(2)), -1);
        assert_eq!(bell_beable(&e(2), &e(0)), 1);
    }

    #[test]
    fn pointwise_relation_fails_while_product_is_minus_one() {
        for mu in Microstate::ALL {
            let check = perfect_correlation_check(mu, &e(1));
            assert_eq!(check.sum, Beable::new(mu, e(1)).get() * 2.0);
            assert_eq!(check.sum.norm(), 2.0);
            assert_eq!(check.product, -Multivector::ONE);
        }
    }

    #[test]
    fn counterfactual_commutator_vanishes_only_when_parallel() {
        assert_eq!(counterfactual_commutator(Microstate::Plus, &e(0), &e(0)), Multivector::ZERO);
        assert_eq!(counterfactual_commutator(Microstate::Minus, &e(0), &-e(0)), Multivector::ZERO);
        assert_eq!(counterfactual_commutator(Microstate::Plus, &e(0), &e(1)).norm(), 2.0);
    }
}
