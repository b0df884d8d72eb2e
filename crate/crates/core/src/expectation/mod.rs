//! Ensemble expectations of pair products.
//!
//! The integrand depends on the microstate only through the sign of `mu`,
//! so an expectation over the orientation ensemble is a weighted sum over
//! the (at most two) atoms `+I` and `-I`.

mod chsh;
mod functional;
mod measure;
mod monte_carlo;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beables::{builtin_evaluators, BeableError, Microstate, PairEvaluator, DEFAULT_EVALUATOR};
use crate::ga::{Multivector, UnitVector3};

pub use chsh::{
    chsh, chsh_closed_form, chsh_directions, chsh_scan, chsh_scan_family, ChshReport, ChshScan, ChshTerm, ScanRow,
};
pub use functional::{functional_axioms_check, left_multiplication_matrix, spectral_norm, FunctionalAxiomReport};
pub use measure::{measure_normalization_report, DirectedMeasureAtom, MeasureReport};
pub use monte_carlo::{
    bell_baseline, bell_linear_prediction, estimate_mean, monte_carlo_expectation, BellBaselineReport, Estimate,
    Execution, BATCH_SIZE,
};

/// Tolerance on the total ensemble weight.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Tolerance used by [`codomain_check`].
pub const CODOMAIN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpectationError {
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("directed measure is not normalized: total deviates from 1 by {deviation:e}")]
    Unnormalized { deviation: f64 },
    #[error("directed measure has no atoms")]
    EmptyMeasure,
    #[error("scan needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error(transparent)]
    Beable(#[from] BeableError),
}

/// A finite distribution over the microstates `+I` and `-I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleRepr", into = "EnsembleRepr")]
pub struct OrientationEnsemble {
    atoms: Vec<(Microstate, f64)>,
}

impl OrientationEnsemble {
    /// `{(+I, 1/2), (-I, 1/2)}`.
    pub fn isotropic() -> Self {
        Self { atoms: vec![(Microstate::Plus, 0.5), (Microstate::Minus, 0.5)] }
    }

    /// All weight on one microstate.
    pub fn pure(mu: Microstate) -> Self {
        Self { atoms: vec![(mu, 1.0)] }
    }

    pub fn new(plus: f64, minus: f64) -> Result<Self, ExpectationError> {
        Self::from_atoms(vec![(Microstate::Plus, plus), (Microstate::Minus, minus)])
    }

    /// Validates weights and drops zero-weight atoms.
    pub fn from_atoms(atoms: Vec<(Microstate, f64)>) -> Result<Self, ExpectationError> {
        let invalid = |msg: String| Err(ExpectationError::InvalidEnsemble(msg));
        for (i, (mu, w)) in atoms.iter().enumerate() {
            if !w.is_finite() || *w < 0.0 {
                return invalid(format!("weight {w} for {mu:?} must be finite and nonnegative"));
            }
            if atoms[..i].iter().any(|(other, _)| other == mu) {
                return invalid(format!("more than one atom for {mu:?}"));
            }
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return invalid(format!("weights sum to {total}, expected 1"));
        }
        Ok(Self { atoms: atoms.into_iter().filter(|(_, w)| *w > 0.0).collect() })
    }

    pub fn atoms(&self) -> &[(Microstate, f64)] {
        &self.atoms
    }

    pub fn weight(&self, mu: Microstate) -> f64 {
        self.atoms.iter().find(|(m, _)| *m == mu).map_or(0.0, |(_, w)| *w)
    }

    pub fn is_isotropic(&self) -> bool {
        self.weight(Microstate::Plus) == 0.5 && self.weight(Microstate::Minus) == 0.5
    }

    /// Weighted sum of `f(mu)` over the atoms.
    pub fn expect<F: Fn(Microstate) -> Multivector>(&self, f: F) -> Multivector {
        self.atoms.iter().map(|&(mu, w)| f(mu) * w).sum()
    }

    /// The atoms as directed measure elements `d rho = w`.
    pub fn directed_measure(&self) -> Vec<DirectedMeasureAtom> {
        self.atoms.iter().map(|&(mu, w)| DirectedMeasureAtom::from_probability(mu, w)).collect()
    }
}

impl Default for OrientationEnsemble {
    fn default() -> Self {
        Self::isotropic()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EnsembleRepr {
    Named(String),
    Weights { plus: f64, minus: f64 },
}

impl TryFrom<EnsembleRepr> for OrientationEnsemble {
    type Error = ExpectationError;
    fn try_from(repr: EnsembleRepr) -> Result<Self, Self::Error> {
        match repr {
            EnsembleRepr::Named(name) if name == "isotropic" => Ok(Self::isotropic()),
            EnsembleRepr::Named(name) => Err(ExpectationError::InvalidEnsemble(format!("unknown ensemble `{name}`"))),
            EnsembleRepr::Weights { plus, minus } => Self::new(plus, minus),
        }
    }
}

impl From<OrientationEnsemble> for EnsembleRepr {
    fn from(e: OrientationEnsemble) -> Self {
        EnsembleRepr::Weights { plus: e.weight(Microstate::Plus), minus: e.weight(Microstate::Minus) }
    }
}

/// Detector settings and run parameters for one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub a: UnitVector3,
    pub a_prime: UnitVector3,
    pub b: UnitVector3,
    pub b_prime: UnitVector3,
    pub ensemble: OrientationEnsemble,
    pub evaluator: String,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    /// Settings at 0, 90, 45 and -45 degrees about e3, isotropic ensemble,
    /// paper evaluator, 10^5 samples, seed 42.
    fn default() -> Self {
        let [a, a_prime, b, b_prime] = chsh_directions(UnitVector3::E3, [0.0, 90.0, 45.0, -45.0]);
        Self {
            a,
            a_prime,
            b,
            b_prime,
            ensemble: OrientationEnsemble::isotropic(),
            evaluator: DEFAULT_EVALUATOR.to_owned(),
            samples: 100_000,
            seed: 42,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExpectationError> {
        if self.samples == 0 {
            return Err(ExpectationError::ZeroSamples);
        }
        self.resolve_evaluator().map(|_| ())
    }

    pub fn resolve_evaluator(&self) -> Result<std::sync::Arc<dyn PairEvaluator>, ExpectationError> {
        Ok(builtin_evaluators().get(&self.evaluator)?)
    }
}

/// A correlation value together with how far it sits from the scalars.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub value: Multivector,
    pub value_text: String,
    pub scalar_part: f64,
    pub residual_nonscalar_norm: f64,
    pub evaluator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl CorrelationReport {
    pub fn new(value: Multivector, evaluator: &str) -> Self {
        Self {
            value,
            value_text: value.to_string(),
            scalar_part: value.scalar_part(),
            residual_nonscalar_norm: value.nonscalar_norm(),
            evaluator: evaluator.to_owned(),
            stderr: None,
            samples: None,
        }
    }
}

/// `E(a, b) = sum_mu w(mu) A_a(mu) B_b(mu)`.
pub fn expectation(
    ensemble: &OrientationEnsemble,
    a: &UnitVector3,
    b: &UnitVector3,
    evaluator: &dyn PairEvaluator,
) -> Multivector {
    ensemble.expect(|mu| evaluator.pair_product(mu, a, b))
}

/// `E(b, a)`: the same sum with the operands of the product swapped.
pub fn expectation_reversed(
    ensemble: &OrientationEnsemble,
    a: &UnitVector3,
    b: &UnitVector3,
    evaluator: &dyn PairEvaluator,
) -> Multivector {
    ensemble.expect(|mu| evaluator.pair_product(mu, b, a))
}

/// Membership in the scalar codomain `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodomainVerdict {
    pub in_codomain: bool,
    /// Largest absolute non-scalar coefficient.
    pub residual: f64,
}

pub fn codomain_check(m: &Multivector) -> CodomainVerdict {
    let residual = m.max_nonscalar();
    let s = m.scalar_part();
    let in_range = (-1.0 - CODOMAIN_TOLERANCE..=1.0 + CODOMAIN_TOLERANCE).contains(&s);
    CodomainVerdict { in_codomain: residual <= CODOMAIN_TOLERANCE && in_range, residual }
}
