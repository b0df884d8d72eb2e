//! Acceptance suite: twelve end-to-end criteria, one report line each.
//!
//! Runs without the libtest harness so that every line is printed on each
//! run. The process exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use beable_lab::beables::{
    bivector_algebra_suite, builtin_evaluators, evaluator_discrepancy, scalar_algebra_suite, Microstate, PairEvaluator,
    PaperEvaluator,
};
use beable_lab::expectation::{
    bell_baseline, bell_linear_prediction, chsh, chsh_directions, chsh_scan, expectation, expectation_reversed,
    functional_axioms_check, measure_normalization_report, monte_carlo_expectation, ExperimentConfig,
    OrientationEnsemble,
};
use beable_lab::ga::{Multivector, UnitVector3, Vector3};
use beable_lab::rotor::{quaternion_isomorphism_check, EulerAngles, Rotor};
use beable_lab::sampling::{stream_rng, unit_vector};
use beable_lab::surface::{builtin_shapes, closed_polyline_integral, closed_surface_integral, ClosedPolyline};
use rand::Rng;

const SEED: u64 = 20_240_601;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn random_pairs(count: usize, stream: u64) -> Vec<(UnitVector3, UnitVector3)> {
    let mut rng = stream_rng(SEED, stream);
    (0..count).map(|_| (unit_vector(&mut rng), unit_vector(&mut rng))).collect()
}

fn within_budget(elapsed: Duration, budget: Duration) -> (bool, String) {
    (elapsed < budget, format!("{:.3} s of {:.0} s", elapsed.as_secs_f64(), budget.as_secs_f64()))
}

fn correlation_reproduction() -> Outcome {
    let start = Instant::now();
    let iso = OrientationEnsemble::isotropic();
    let (mut scalar_err, mut residual): (f64, f64) = (0.0, 0.0);
    for (a, b) in random_pairs(1000, 1) {
        let e = expectation(&iso, &a, &b, &PaperEvaluator);
        scalar_err = scalar_err.max((e.scalar_part() + a.angle_to(&b).cos()).abs());
        residual = residual.max(e.nonscalar_norm());
    }
    let (fast, time) = within_budget(start.elapsed(), Duration::from_secs(1));
    Outcome::new(
        scalar_err <= 1e-12 && residual <= 1e-12 && fast,
        format!("max |E + cos| = {scalar_err:.2e}, max non-scalar = {residual:.2e}, {time}"),
    )
}

/// Directions whose squared norm rounds to exactly 1, so that `n . n = 1`
/// holds in floating point and `-1` can be demanded bit for bit.
fn exactly_unit_directions(count: usize) -> Vec<UnitVector3> {
    let mut rng = stream_rng(SEED, 2);
    let mut out = vec![UnitVector3::E1, UnitVector3::E2, UnitVector3::E3];
    while out.len() < count {
        let n = unit_vector(&mut rng);
        if n.dot(&n) == 1.0 {
            out.push(n);
        }
    }
    out
}

fn perfect_correlation() -> Outcome {
    let minus_one = -Multivector::ONE;
    let mut failures = 0;
    let directions = exactly_unit_directions(1000);
    let iso = OrientationEnsemble::isotropic();
    for name in builtin_evaluators().names() {
        let evaluator = builtin_evaluators().get(name).unwrap();
        for n in &directions {
            for mu in Microstate::ALL {
                failures += usize::from(evaluator.pair_product(mu, n, n) != minus_one);
            }
            failures += usize::from(expectation(&iso, n, n, evaluator.as_ref()) != minus_one);
        }
    }
    // Directions whose squared norm is one ulp off are reported, not required.
    let general = random_pairs(1000, 3)
        .iter()
        .map(|(n, _)| PaperEvaluator.pair_product(Microstate::Minus, n, n).max_abs_diff(&minus_one))
        .fold(0.0, f64::max);
    Outcome::new(
        failures == 0,
        format!(
            "{} directions x 2 microstates x 2 evaluators, {failures} not exactly -1; arbitrary unit vectors within {general:.1e}",
            directions.len()
        ),
    )
}

fn chsh_criterion() -> Outcome {
    let [a, a_prime, b, b_prime] = chsh_directions(UnitVector3::E3, [0.0, 90.0, 45.0, -45.0]);
    let config = ExperimentConfig { a, a_prime, b, b_prime, ..ExperimentConfig::default() };
    let s = chsh(&config).unwrap().s;
    let s_err = (s.scalar_part + 2.0 * SQRT_2).abs().max(s.residual_nonscalar_norm);
    let scan = chsh_scan(UnitVector3::E3, 181, &OrientationEnsemble::isotropic(), &PaperEvaluator).unwrap();
    let peak_err = (scan.peak_abs_s - 2.0 * SQRT_2).abs();
    Outcome::new(
        s_err <= 1e-12 && peak_err <= 1e-9 && scan.peak_abs_s > 2.0,
        format!(
            "S = {:.15}, scan peak |S| = {:.12} at {:.6} deg (bound 2)",
            s.scalar_part, scan.peak_abs_s, scan.peak_offset_deg
        ),
    )
}

fn order_symmetry() -> Outcome {
    let iso = OrientationEnsemble::isotropic();
    let pairs = random_pairs(1000, 4);
    let (mut paper, mut geometric_scalar, mut geometric_full): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let geometric = builtin_evaluators().get("geometric").unwrap();
    for (a, b) in &pairs {
        let gap = expectation(&iso, a, b, &PaperEvaluator) - expectation_reversed(&iso, a, b, &PaperEvaluator);
        paper = paper.max(gap.norm());
        let gap = expectation(&iso, a, b, geometric.as_ref()) - expectation_reversed(&iso, a, b, geometric.as_ref());
        geometric_scalar = geometric_scalar.max(gap.scalar_part().abs());
        geometric_full = geometric_full.max(gap.norm());
    }
    Outcome::new(
        paper <= 1e-12 && geometric_scalar <= 1e-12,
        format!(
            "paper |E(AB)-E(BA)| = {paper:.2e}; geometric scalar gap = {geometric_scalar:.2e} \
             (its bivector gap -2I(a x b) reaches {geometric_full:.3}, recorded not asserted)"
        ),
    )
}

fn algebra_suites() -> Outcome {
    let scalar = scalar_algebra_suite(10_000, SEED);
    let bivector = bivector_algebra_suite(10_000, SEED);
    let commutator = bivector.axiom("non-commutative law of multiplication").unwrap();
    let worst = bivector.axioms.iter().map(|a| a.max_residual).fold(0.0, f64::max);
    let minus = bivector.discrepancies.first().map_or(0.0, |d| d.max_residual);
    Outcome::new(
        scalar.all_pass() && scalar.axioms.len() == 8 && bivector.all_pass() && commutator.pass,
        format!(
            "scalar 8/8 exact: {}; bivector max residual {worst:.2e}; commutator law at +I {:.2e} (at -I {minus:.3})",
            scalar.all_pass(),
            commutator.max_residual
        ),
    )
}

fn discrepancy_exhibit() -> Outcome {
    let (mut norm_err, mut plus_max): (f64, f64) = (0.0, 0.0);
    for (a, b) in random_pairs(1000, 5) {
        let theta = a.angle_to(&b);
        norm_err = norm_err.max((evaluator_discrepancy(Microstate::Minus, &a, &b).norm - 2.0 * theta.sin()).abs());
        plus_max = plus_max.max(evaluator_discrepancy(Microstate::Plus, &a, &b).norm);
    }
    Outcome::new(
        norm_err <= 1e-12 && plus_max == 0.0,
        format!("max | |D(-I)| - 2 sin | = {norm_err:.2e}, max |D(+I)| = {plus_max:e}"),
    )
}

fn functional_axioms() -> Outcome {
    let report = functional_axioms_check(&OrientationEnsemble::isotropic(), &PaperEvaluator, 1000, SEED);
    let residuals: Vec<String> = report.axioms.iter().map(|a| format!("{:.1e}", a.max_residual)).collect();
    Outcome::new(
        report.all_pass(),
        format!("residuals (a)-(d): [{}], max alpha_A = {:.12}", residuals.join(", "), report.max_alpha),
    )
}

fn measure_normalization() -> Outcome {
    let report = measure_normalization_report(&OrientationEnsemble::isotropic().directed_measure()).unwrap();
    let directed = report.directed_total.max_abs_diff(&Multivector::ONE);
    let scalar = report.scalar_total.max_abs_diff(&-Multivector::I);
    Outcome::new(
        directed <= 1e-12 && scalar <= 1e-12,
        format!("sum d rho = {}, sum |d rho| = {}", report.directed_total_text, report.scalar_total_text),
    )
}

fn surface_cancellation() -> Outcome {
    let start = Instant::now();
    let integral = |spec: &str| {
        let closed = builtin_shapes().make_mesh(spec).unwrap().validate().unwrap();
        (closed_surface_integral(&closed).norm(), closed.total_area())
    };
    let (cube, _) = integral("cube");
    let (tet, _) = integral("tetrahedron");
    let (sphere, area) = integral("icosphere:4");
    let mut rng = stream_rng(SEED, 6);
    let mut curves = vec![
        vec![Vector3::ZERO, Vector3::E1, Vector3::E2],
        vec![Vector3::ZERO, Vector3::E1, Vector3::E1 + Vector3::E2, Vector3::E2],
    ];
    for _ in 0..100 {
        let len = rng.random_range(3..50);
        curves.push(
            (0..len)
                .map(|_| {
                    Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                })
                .collect(),
        );
    }
    let polyline = curves
        .into_iter()
        .map(|c| closed_polyline_integral(&ClosedPolyline::new(c).unwrap()).norm())
        .fold(0.0, f64::max);
    let (fast, time) = within_budget(start.elapsed(), Duration::from_secs(1));
    Outcome::new(
        cube <= 1e-13 && tet <= 1e-13 && sphere <= 1e-10 * area && polyline <= 1e-12 && fast,
        format!(
            "cube {cube:.1e}, tetrahedron {tet:.1e}, icosphere(4) {:.1e} x area, polylines {polyline:.1e}, {time}",
            sphere / area
        ),
    )
}

fn rotor_suite() -> Outcome {
    let mut rng = stream_rng(SEED, 7);
    let (mut cover, mut action): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let axis = unit_vector(&mut rng);
        let theta = rng.random_range(-TAU..TAU);
        let v = unit_vector(&mut rng).get();
        let r = Rotor::from_axis_angle(axis, theta);
        let turned = Rotor::from_axis_angle(axis, theta + TAU);
        cover = cover.max(turned.get().max_abs_diff(&-r.get()));
        action = action.max(turned.rotate(v).max_abs_diff(&r.rotate(v)));
    }
    let quaternion = quaternion_isomorphism_check();
    let quaternion_ok = quaternion.iter().all(|c| c.pass);
    let mut det_err: f64 = 0.0;
    for step in 0..=1800 {
        let pitch = -FRAC_PI_2 + PI * f64::from(step) / 1800.0;
        let angles = EulerAngles::new(rng.random_range(-PI..PI), pitch, rng.random_range(-PI..PI));
        det_err = det_err.max((angles.rate_determinant() - pitch.cos()).abs());
    }
    let lock = [FRAC_PI_2, -FRAC_PI_2]
        .map(|p| EulerAngles::new(0.4, p, -1.1).rate_determinant().abs())
        .into_iter()
        .fold(0.0, f64::max);
    Outcome::new(
        cover <= 1e-12 && action <= 1e-12 && quaternion_ok && det_err <= 1e-12 && lock <= 1e-12,
        format!(
            "double cover {cover:.1e} (action {action:.1e}); quaternion identities exact: {quaternion_ok}; \
             |det - cos(pitch)| {det_err:.1e}; |det| at +-90 deg {lock:.1e}"
        ),
    )
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let b = UnitVector3::in_plane(UnitVector3::E3, 60f64.to_radians());
    let config =
        |samples| ExperimentConfig { a: UnitVector3::E1, b, samples, seed: SEED, ..ExperimentConfig::default() };
    let big = monte_carlo_expectation(&config(1_000_000)).unwrap();
    let stderr = big.stderr.unwrap();
    let error = (big.value - Multivector::scalar(-0.5)).norm();
    let rerun = monte_carlo_expectation(&config(1_000_000)).unwrap();
    let identical = big.value.coeffs().map(f64::to_bits) == rerun.value.coeffs().map(f64::to_bits)
        && big.stderr.map(f64::to_bits) == rerun.stderr.map(f64::to_bits);
    let scaled: Vec<f64> = [100, 1_000, 10_000, 100_000, 1_000_000]
        .iter()
        .map(|&n| monte_carlo_expectation(&config(n)).unwrap().stderr.unwrap() * (n as f64).sqrt())
        .collect();
    let spread = scaled.iter().copied().fold(0.0, f64::max) / scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let (fast, time) = within_budget(start.elapsed(), Duration::from_secs(10));
    Outcome::new(
        error <= 3.0 * stderr && spread <= 1.5 && identical && fast,
        format!(
            "E = {:.6} (|E + 0.5| = {error:.2e}, 3 stderr = {:.2e}); stderr*sqrt(N) spread x{spread:.3} over 1e2..1e6; \
             bit-identical rerun: {identical}; {time}",
            big.scalar_part,
            3.0 * stderr
        ),
    )
}

fn bell_baseline_criterion() -> Outcome {
    let mut worst_sigma: f64 = 0.0;
    let mut gap_at_45 = 0.0;
    let mut lines = Vec::new();
    for deg in [0.0, 30.0, 45.0, 60.0, 90.0, 135.0, 180.0] {
        let b = UnitVector3::in_plane(UnitVector3::E3, f64::to_radians(deg));
        let report = bell_baseline(&UnitVector3::E1, &b, 1_000_000, SEED).unwrap();
        let deviation = (report.e_scalar - bell_linear_prediction(report.theta_rad)).abs();
        let sigma = if report.stderr > 0.0 {
            deviation / report.stderr
        } else if deviation == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        worst_sigma = worst_sigma.max(sigma);
        if deg == 45.0 {
            gap_at_45 = report.e_scalar - report.cosine_prediction;
            lines.push(format!("E(45) = {:.4} vs -cos = {:.4}", report.e_scalar, report.cosine_prediction));
        }
    }
    Outcome::new(
        worst_sigma <= 3.0 && gap_at_45 > 0.2,
        format!("max deviation from linear {worst_sigma:.2} stderr; {}; gap {gap_at_45:.4}", lines.join("")),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 12] = [
        ("correlation reproduction", correlation_reproduction),
        ("perfect correlation", perfect_correlation),
        ("CHSH value and scan", chsh_criterion),
        ("order symmetry", order_symmetry),
        ("algebra suites", algebra_suites),
        ("discrepancy exhibit", discrepancy_exhibit),
        ("functional axioms", functional_axioms),
        ("measure normalization", measure_normalization),
        ("closed-surface cancellation", surface_cancellation),
        ("rotor suite", rotor_suite),
        ("Monte Carlo", monte_carlo),
        ("Bell baseline", bell_baseline_criterion),
    ];
    let mut failed = 0;
    println!("acceptance: {} criteria", criteria.len());
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        failed += usize::from(!outcome.pass);
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name}: {}", i + 1, outcome.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
