//! Seeded Monte Carlo estimators.
//!
//! Samples are split into fixed batches of [`BATCH_SIZE`]; batch `k` draws
//! from ChaCha8 stream `k` of the seed, and batch partials are merged in
//! batch order. The result is therefore bit-identical whether batches run
//! serially or on the rayon pool.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{CorrelationReport, ExpectationError, ExperimentConfig};
use crate::beables::{bell_beable, Microstate};
use crate::ga::{Multivector, UnitVector3};
use crate::sampling;

pub const BATCH_SIZE: usize = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Mean of a multivector-valued sample and its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub count: usize,
    pub mean: Multivector,
    /// `sqrt(tr(C) / count)` with `C` the sample covariance of the
    /// coefficient vector: the expected 2-norm error of `mean`.
    pub stderr: f64,
}

#[derive(Clone, Copy)]
struct Partial {
    count: usize,
    sum: Multivector,
    mean: Multivector,
    m2: f64,
}

fn dot(a: &Multivector, b: &Multivector) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y).sum()
}

impl Partial {
    const EMPTY: Self = Self { count: 0, sum: Multivector::ZERO, mean: Multivector::ZERO, m2: 0.0 };

    fn push(&mut self, x: Multivector) {
        self.count += 1;
        self.sum += x;
        let delta = x - self.mean;
        self.mean += delta * (1.0 / self.count as f64);
        self.m2 += dot(&delta, &(x - self.mean));
    }

    fn merge(self, other: Self) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let weight = other.count as f64 / count as f64;
        Self {
            count,
            sum: self.sum + other.sum,
            mean: self.mean + delta * weight,
            m2: self.m2 + other.m2 + dot(&delta, &delta) * self.count as f64 * weight,
        }
    }
}

/// Averages `draw` over `samples` seeded draws.
pub fn estimate_mean<F>(samples: usize, seed: u64, execution: Execution, draw: F) -> Result<Estimate, ExpectationError>
where
    F: Fn(&mut ChaCha8Rng) -> Multivector + Sync,
{
    if samples == 0 {
        return Err(ExpectationError::ZeroSamples);
    }
    let batches = samples.div_ceil(BATCH_SIZE);
    let run_batch = |k: usize| {
        let mut rng = sampling::stream_rng(seed, k as u64);
        let n = BATCH_SIZE.min(samples - k * BATCH_SIZE);
        let mut partial = Partial::EMPTY;
        for _ in 0..n {
            partial.push(draw(&mut rng));
        }
        partial
    };
    let partials: Vec<Partial> = match execution {
        Execution::Serial => (0..batches).map(run_batch).collect(),
        Execution::Parallel => (0..batches).into_par_iter().map(run_batch).collect(),
    };
    let total = partials.into_iter().fold(Partial::EMPTY, Partial::merge);
    let n = total.count as f64;
    let stderr = if total.count > 1 { (total.m2.max(0.0) / (n - 1.0)).sqrt() / n.sqrt() } else { 0.0 };
    let mean = Multivector::from_coeffs(total.sum.coeffs().map(|x| x / n));
    Ok(Estimate { count: total.count, mean, stderr })
}

/// Monte Carlo estimate of `E(a, b)`, drawing microstates from the ensemble.
pub fn monte_carlo_expectation(config: &ExperimentConfig) -> Result<CorrelationReport, ExpectationError> {
    monte_carlo_expectation_with(config, Execution::Parallel)
}

pub(crate) fn monte_carlo_expectation_with(
    config: &ExperimentConfig,
    execution: Execution,
) -> Result<CorrelationReport, ExpectationError> {
    config.validate()?;
    let evaluator = config.resolve_evaluator()?;
    let plus = config.ensemble.weight(Microstate::Plus);
    let (a, b) = (config.a, config.b);
    let estimate = estimate_mean(config.samples, config.seed, execution, |rng| {
        let mu = if rng.random::<f64>() < plus { Microstate::Plus } else { Microstate::Minus };
        evaluator.pair_product(mu, &a, &b)
    })?;
    let mut report = CorrelationReport::new(estimate.mean, evaluator.name());
    report.stderr = Some(estimate.stderr);
    report.samples = Some(estimate.count);
    Ok(report)
}

/// `-1 + 2 theta / pi`, the correlation of Bell's sign model.
pub fn bell_linear_prediction(theta: f64) -> f64 {
    -1.0 + 2.0 * theta / std::f64::consts::PI
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellBaselineReport {
    pub theta_rad: f64,
    pub theta_deg: f64,
    pub e_scalar: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub linear_prediction: f64,
    pub cosine_prediction: f64,
}

/// Bell's model with `A = sign(lambda . a)`, `B = -sign(lambda . b)` and
/// `lambda` uniform on the sphere.
pub fn bell_baseline(
    a: &UnitVector3,
    b: &UnitVector3,
    samples: usize,
    seed: u64,
) -> Result<BellBaselineReport, ExpectationError> {
    bell_baseline_with(a, b, samples, seed, Execution::Parallel)
}

pub(crate) fn bell_baseline_with(
    a: &UnitVector3,
    b: &UnitVector3,
    samples: usize,
    seed: u64,
    execution: Execution,
) -> Result<BellBaselineReport, ExpectationError> {
    let estimate = estimate_mean(samples, seed, execution, |rng| {
        let lambda = sampling::unit_vector(rng);
        let product = bell_beable(&lambda, a) * -bell_beable(&lambda, b);
        Multivector::scalar(f64::from(product))
    })?;
    let theta = a.angle_to(b);
    Ok(BellBaselineReport {
        theta_rad: theta,
        theta_deg: theta.to_degrees(),
        e_scalar: estimate.mean.scalar_part(),
        stderr: estimate.stderr,
        samples: estimate.count,
        seed,
        linear_prediction: bell_linear_prediction(theta),
        cosine_prediction: -theta.cos(),
    })
}
