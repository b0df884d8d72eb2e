use std::sync::{Arc, OnceLock};

use super::{pair_product_geometric, pair_product_paper, BeableError, Microstate};
use crate::ga::{Multivector, UnitVector3};

/// Name of the evaluator used when none is configured.
pub const DEFAULT_EVALUATOR: &str = "paper";

/// A rule for evaluating the pair product `A_a(mu) B_b(mu)`.
pub trait PairEvaluator: Send + Sync {
    /// Registry key, also written into reports.
    fn name(&self) -> &'static str;

    fn pair_product(&self, mu: Microstate, a: &UnitVector3, b: &UnitVector3) -> Multivector;
}

/// Closed form `-a.b - mu (a x b)`.
#[derive(Debug, Default, Clone, Copy)]
pub struct PaperEvaluator;

impl PairEvaluator for PaperEvaluator {
    fn name(&self) -> &'static str {
        "paper"
    }

    fn pair_product(&self, mu: Microstate, a: &UnitVector3, b: &UnitVector3) -> Multivector {
        pair_product_paper(mu, a, b)
    }
}

/// Literal geometric product of the two beables.
#[derive(Debug, Default, Clone, Copy)]
pub struct GeometricEvaluator;

impl PairEvaluator for GeometricEvaluator {
    fn name(&self) -> &'static str {
        "geometric"
    }

    fn pair_product(&self, mu: Microstate, a: &UnitVector3, b: &UnitVector3) -> Multivector {
        pair_product_geometric(mu, a, b)
    }
}

/// Evaluators selectable by name.
#[derive(Clone, Default)]
pub struct EvaluatorRegistry {
    entries: Vec<Arc<dyn PairEvaluator>>,
}

impl EvaluatorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// A registry holding `paper` and `geometric`.
    pub fn with_builtins() -> Self {
        let mut registry = Self::new();
        registry.register(Arc::new(PaperEvaluator)).expect("fresh registry");
        registry.register(Arc::new(GeometricEvaluator)).expect("fresh registry");
        registry
    }

    pub fn register(&mut self, evaluator: Arc<dyn PairEvaluator>) -> Result<(), BeableError> {
        if self.entries.iter().any(|e| e.name() == evaluator.name()) {
            return Err(BeableError::DuplicateEvaluator(evaluator.name().to_owned()));
        }
        self.entries.push(evaluator);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn PairEvaluator>, BeableError> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .cloned()
            .ok_or_else(|| BeableError::UnknownEvaluator(name.to_owned()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}

impl std::fmt::Debug for EvaluatorRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// Process-wide registry of the built-in evaluators.
pub fn builtin_evaluators() -> &'static EvaluatorRegistry {
    static REGISTRY: OnceLock<EvaluatorRegistry> = OnceLock::new();
    REGISTRY.get_or_init(EvaluatorRegistry::with_builtins)
}
