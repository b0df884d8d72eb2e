//! Axioms of an expectation functional on algebra-valued random functions.
//!
//! A random function here is a beable `A(mu) = mu a`, and the functional is
//! the ensemble sum. Conditions checked, with `~` the reverse:
//!
//! * (a) `E(1) = 1`;
//! * (b) `E(~A A) >= 0`, vanishing only for `A = 0`;
//! * (c) `|E(~B A B)| <= alpha_A E(~B B)` with `alpha_A` the spectral norm of
//!   left multiplication by `A`;
//! * (d) `E(AB) = E(BA)`, products taken with the configured pair evaluator.

use serde::Serialize;

use super::OrientationEnsemble;
use crate::beables::{AxiomRecord, Beable, Microstate, PairEvaluator, AXIOM_TOLERANCE};
use crate::ga::table::BLADES;
use crate::ga::Multivector;
use crate::sampling;

const POWER_ITERATION_TOLERANCE: f64 = 1e-10;
const POWER_ITERATION_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalAxiomReport {
    pub evaluator: String,
    pub seed: u64,
    pub trials: usize,
    pub axioms: Vec<AxiomRecord>,
    /// Largest `alpha_A` encountered.
    pub max_alpha: f64,
}

impl FunctionalAxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }
}

/// The 8x8 matrix of `x -> a x` on coefficient space, row-major.
pub fn left_multiplication_matrix(a: &Multivector) -> [[f64; BLADES]; BLADES] {
    let mut m = [[0.0; BLADES]; BLADES];
    for j in 0..BLADES {
        let column = *a * Multivector::basis(j);
        for (i, row) in m.iter_mut().enumerate() {
            row[j] = column.coeff(i);
        }
    }
    m
}

/// Largest singular value of `m`, by power iteration on `m^T m`.
pub fn spectral_norm(m: &[[f64; BLADES]; BLADES]) -> f64 {
    let apply = |v: &[f64; BLADES]| {
        let mut mv = [0.0; BLADES];
        for (i, row) in m.iter().enumerate() {
            mv[i] = row.iter().zip(v).map(|(x, y)| x * y).sum();
        }
        let mut out = [0.0; BLADES];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..BLADES).map(|i| m[i][j] * mv[i]).sum();
        }
        out
    };
    // Irregular start so it is not orthogonal to the dominant direction.
    let mut v = [0.0; BLADES];
    for (i, x) in v.iter_mut().enumerate() {
        *x = 1.0 + 0.1 * i as f64 + 0.01 * (i * i) as f64;
    }
    let mut eigenvalue = 0.0;
    for _ in 0..POWER_ITERATION_LIMIT {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        let w = apply(&v);
        let next: f64 = w.iter().zip(&v).map(|(x, y)| x * y).sum();
        v = w;
        if (next - eigenvalue).abs() <= POWER_ITERATION_TOLERANCE * next.abs().max(1.0) {
            eigenvalue = next;
            break;
        }
        eigenvalue = next;
    }
    eigenvalue.max(0.0).sqrt()
}

fn alpha(a: &dyn Fn(Microstate) -> Multivector, ensemble: &OrientationEnsemble) -> f64 {
    ensemble.atoms().iter().map(|&(mu, _)| spectral_norm(&left_multiplication_matrix(&a(mu)))).fold(0.0, f64::max)
}

/// Checks conditions (a) through (d) over `trials` random beable pairs.
pub fn functional_axioms_check(
    ensemble: &OrientationEnsemble,
    evaluator: &dyn PairEvaluator,
    trials: usize,
    seed: u64,
) -> FunctionalAxiomReport {
    let mut rng = sampling::stream_rng(seed, 2);
    let trials = trials.max(1);

    // (a) is a single deterministic check.
    let unit = ensemble.expect(|_| Multivector::ONE);
    let a_residual = unit.max_abs_diff(&Multivector::ONE);

    // (b): the zero function must give exactly zero.
    let zero_value = ensemble.expect(|_| Multivector::ZERO.reverse() * Multivector::ZERO);
    let mut b_residual = zero_value.max_abs();
    let mut b_min = f64::INFINITY;
    let mut c_residual: f64 = 0.0;
    let mut d_residual: f64 = 0.0;
    let mut max_alpha: f64 = 0.0;

    for _ in 0..trials {
        let na = sampling::unit_vector(&mut rng);
        let nb = sampling::unit_vector(&mut rng);
        let a_of = move |mu: Microstate| Beable::new(mu, na).get();
        let b_of = move |mu: Microstate| Beable::new(mu, nb).get();

        let norm_a = ensemble.expect(|mu| a_of(mu).reverse() * a_of(mu));
        b_min = b_min.min(norm_a.scalar_part());
        b_residual = b_residual.max(norm_a.max_abs_diff(&Multivector::ONE));

        let alpha_a = alpha(&a_of, ensemble);
        max_alpha = max_alpha.max(alpha_a);
        let sandwiched = ensemble.expect(|mu| b_of(mu).reverse() * a_of(mu) * b_of(mu));
        let norm_b = ensemble.expect(|mu| b_of(mu).reverse() * b_of(mu)).scalar_part();
        c_residual = c_residual.max(sandwiched.norm() - alpha_a * norm_b);

        let ab = ensemble.expect(|mu| evaluator.pair_product(mu, &na, &nb));
        let ba = ensemble.expect(|mu| evaluator.pair_product(mu, &nb, &na));
        d_residual = d_residual.max(ab.max_abs_diff(&ba));
    }

    let record = |name: &str, max_residual: f64, pass: bool| AxiomRecord {
        name: name.to_owned(),
        samples: trials,
        max_residual,
        pass,
    };
    FunctionalAxiomReport {
        evaluator: evaluator.name().to_owned(),
        seed,
        trials,
        axioms: vec![
            record("(a) normalization E(1) = 1", a_residual, a_residual == 0.0),
            record(
                "(b) positivity E(~A A) >= 0, = 1 for unit beables",
                b_residual,
                b_min >= 0.0 && b_residual <= AXIOM_TOLERANCE,
            ),
            record(
                "(c) boundedness |E(~B A B)| <= alpha_A E(~B B)",
                c_residual.max(0.0),
                c_residual <= AXIOM_TOLERANCE,
            ),
            record("(d) symmetry E(AB) = E(BA)", d_residual, d_residual <= AXIOM_TOLERANCE),
        ],
        max_alpha,
    }
}
