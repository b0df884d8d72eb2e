use std::f64::consts::SQRT_2;

use beable_lab::beables::{
    bivector_algebra_suite, evaluator_discrepancy, pair_product_geometric, pair_product_paper, scalar_algebra_suite,
    Microstate,
};
use beable_lab::expectation::{
    bell_baseline, chsh, chsh_closed_form, chsh_directions, chsh_scan, codomain_check, expectation,
    functional_axioms_check, monte_carlo_expectation, ExperimentConfig, OrientationEnsemble,
};
use beable_lab::ga::{UnitVector3, Vector3};
use beable_lab::rotor::{gimbal_sweep, Rotor, GIMBAL_LOCK_THRESHOLD};
use beable_lab::surface::{builtin_shapes, closed_surface_integral, parse_off, TriangleMesh};
use serde_json::{json, Value};

use crate::config::{evaluator_name, resolved_json, unit_vector};
use crate::report::{Body, RunManifest, Table};
use crate::{
    AxiomsArgs, BaselineArgs, ChshArgs, CliError, Command, CorrelationArgs, McArgs, ModelArgs, PairArgs, ScanArgs,
    SurfaceArgs,
};

pub(crate) struct Outcome {
    pub manifest: RunManifest,
    pub body: Body,
    /// Set when the report was produced but describes a rejected input.
    pub failure: Option<CliError>,
}

impl Outcome {
    fn new(name: &str, config: &ExperimentConfig, params: Value, body: Body) -> Self {
        Self { manifest: RunManifest::new(name, resolved_json(config), params, config.seed), body, failure: None }
    }
}

pub(crate) fn dispatch(command: Command, mut config: ExperimentConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Correlation(args) => correlation(args, config),
        Command::Chsh(args) => chsh_command(args, config),
        Command::ChshScan(args) => scan(args, config),
        Command::Mc(args) => mc(args, config),
        Command::Axioms(args) => axioms(args, config),
        Command::Discrepancy(args) => {
            apply_pair(&args, &mut config)?;
            Ok(discrepancy(config))
        }
        Command::Gimbal => Ok(gimbal(config)),
        Command::Surface(args) => surface(args, config),
        Command::BaselineBell(args) => baseline(args, config),
    }
}

fn apply_model(model: &ModelArgs, config: &mut ExperimentConfig) -> Result<(), CliError> {
    if let Some(name) = &model.evaluator {
        config.evaluator = evaluator_name(name)?;
    }
    if let Some(p) = model.ensemble {
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::field("ensemble", format!("weight {p} is outside [0, 1]")));
        }
        config.ensemble =
            OrientationEnsemble::new(p, 1.0 - p).map_err(|e| CliError::field("ensemble", e.to_string()))?;
    }
    Ok(())
}

fn apply_pair(pair: &PairArgs, config: &mut ExperimentConfig) -> Result<(), CliError> {
    if let Some(a) = pair.a {
        config.a = unit_vector("a", a)?;
    }
    if let Some(b) = pair.b {
        config.b = unit_vector("b", b)?;
    }
    Ok(())
}

fn evaluator(config: &ExperimentConfig) -> Result<std::sync::Arc<dyn beable_lab::beables::PairEvaluator>, CliError> {
    config.resolve_evaluator().map_err(|e| CliError::field("evaluator", e.to_string()))
}

fn check_steps(steps: usize) -> Result<usize, CliError> {
    if steps < 2 {
        return Err(CliError::field("steps", format!("need at least 2 steps, got {steps}")));
    }
    Ok(steps)
}

/// Unit normal of the plane holding `a` and `b`, or some normal to `a` when
/// they are parallel.
fn plane_normal(a: &UnitVector3, b: &UnitVector3) -> UnitVector3 {
    let cross = a.cross(b);
    if cross.norm() > 1e-9 {
        return UnitVector3::normalize(cross).expect("nonzero cross product");
    }
    let v = a.get();
    let helper = if v.x.abs() <= v.y.abs() && v.x.abs() <= v.z.abs() {
        Vector3::E1
    } else if v.y.abs() <= v.z.abs() {
        Vector3::E2
    } else {
        Vector3::E3
    };
    UnitVector3::normalize(v.cross(&helper)).expect("helper is not parallel to a")
}

/// `(theta_deg, direction)` for `steps` angles from `a` in the plane of `a` and `b`.
fn sweep(a: &UnitVector3, b: &UnitVector3, steps: usize) -> Vec<(f64, UnitVector3)> {
    let normal = plane_normal(a, b);
    (0..steps)
        .map(|i| {
            let deg = if i == steps - 1 { 180.0 } else { 180.0 * i as f64 / (steps - 1) as f64 };
            let rotated = Rotor::from_axis_angle(normal, deg.to_radians()).rotate(a.get());
            (deg, UnitVector3::normalize(rotated).expect("rotation preserves length"))
        })
        .collect()
}

fn correlation(args: CorrelationArgs, mut config: ExperimentConfig) -> Result<Outcome, CliError> {
    apply_pair(&args.pair, &mut config)?;
    apply_model(&args.model, &mut config)?;
    let evaluator = evaluator(&config)?;
    let (a, b) = (config.a, config.b);
    if let Some(steps) = args.steps {
        let steps = check_steps(steps)?;
        let rows: Vec<Vec<f64>> = sweep(&a, &b, steps)
            .into_iter()
            .map(|(deg, b)| {
                let e = expectation(&config.ensemble, &a, &b, evaluator.as_ref());
                vec![deg, e.scalar_part(), e.nonscalar_norm()]
            })
            .collect();
        let max_residual = rows.iter().map(|r| r[2]).fold(0.0, f64::max);
        let summary = json!({ "plane_normal": plane_normal(&a, &b), "max_residual": max_residual });
        let table = Table { header: &["theta_deg", "E_scalar", "residual"], rows, summary };
        return Ok(Outcome::new("correlation", &config, json!({ "steps": steps }), Body::Csv(table)));
    }
    let value = expectation(&config.ensemble, &a, &b, evaluator.as_ref());
    let theta = a.angle_to(&b);
    let report = json!({
        "theta_deg": theta.to_degrees(),
        "expectation": beable_lab::expectation::CorrelationReport::new(value, evaluator.name()),
        "minus_cos_theta": -theta.cos(),
        "codomain": codomain_check(&value),
    });
    Ok(Outcome::new("correlation", &config, json!({}), Body::Json(report)))
}

fn chsh_command(args: ChshArgs, mut config: ExperimentConfig) -> Result<Outcome, CliError> {
    apply_model(&args.model, &mut config)?;
    if let Some(angles) = args.angles {
        [config.a, config.a_prime, config.b, config.b_prime] = chsh_directions(UnitVector3::E3, angles);
    }
    let result = chsh(&config).map_err(|e| CliError::field("evaluator", e.to_string()))?;
    let report = json!({
        "s": result.s,
        "terms": result.terms,
        "isotropic_closed_form": chsh_closed_form(&config.a, &config.a_prime, &config.b, &config.b_prime),
        "classical_bound": 2.0,
        "tsirelson_bound": 2.0 * SQRT_2,
    });
    Ok(Outcome::new("chsh", &config, json!({ "angles_deg": args.angles }), Body::Json(report)))
}

fn scan(args: ScanArgs, mut config: ExperimentConfig) -> Result<Outcome, CliError> {
    apply_model(&args.model, &mut config)?;
    let steps = check_steps(args.steps)?;
    let evaluator = evaluator(&config)?;
    let result = chsh_scan(UnitVector3::E3, steps, &config.ensemble, evaluator.as_ref())
        .map_err(|e| CliError::field("steps", e.to_string()))?;
    let rows = result.rows.iter().map(|r| vec![r.offset_deg, r.s]).collect();
    let summary = json!({
        "family": "a = 0, a' = 90, b = offset, b' = -offset (degrees about e3)",
        "peak_offset_deg": result.peak_offset_deg,
        "peak_abs_s": result.peak_abs_s,
    });
    let table = Table { header: &["offset_deg", "S"], rows, summary };
    Ok(Outcome::new("chsh-scan", &config, json!({ "steps": steps }), Body::Csv(table)))
}

fn mc(args: McArgs, mut config: ExperimentConfig) -> Result<Outcome, CliError> {
    apply_pair(&args.pair, &mut config)?;
    apply_model(&args.model, &mut config)?;
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if config.samples == 0 {
        return Err(CliError::field("samples", "must be at least 1"));
    }
    let estimate = monte_carlo_expectation(&config).map_err(|e| CliError::field("evaluator", e.to_string()))?;
    let exact = expectation(&config.ensemble, &config.a, &config.b, evaluator(&config)?.as_ref());
    let report = json!({
        "estimate": estimate,
        "exact": beable_lab::expectation::CorrelationReport::new(exact, &config.evaluator),
        "error_norm": (estimate.value - exact).norm(),
    });
    Ok(Outcome::new("mc", &config, json!({}), Body::Json(report)))
}

fn axioms(args: AxiomsArgs, mut config: ExperimentConfig) -> Result<Outcome, CliError> {
    apply_model(&args.model, &mut config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.trials == 0 {
        return Err(CliError::field("trials", "must be at least 1"));
    }
    let evaluator = evaluator(&config)?;
    let scalar = scalar_algebra_suite(args.trials, config.seed);
    let bivector = bivector_algebra_suite(args.trials, config.seed);
    let functional = functional_axioms_check(&config.ensemble, evaluator.as_ref(), args.trials, config.seed);
    let report = json!({
        "all_pass": scalar.all_pass() && bivector.all_pass() && functional.all_pass(),
        "scalar": scalar,
        "bivector": bivector,
        "functional": functional,
    });
    Ok(Outcome::new("axioms", &config, json!({ "trials": args.trials }), Body::Json(report)))
}

fn discrepancy(config: ExperimentConfig) -> Outcome {
    let (a, b) = (config.a, config.b);
    let theta = a.angle_to(&b);
    let per_microstate: Vec<Value> = Microstate::ALL
        .iter()
        .map(|&mu| {
            let d = evaluator_discrepancy(mu, &a, &b);
            json!({
                "mu": mu,
                "paper": pair_product_paper(mu, &a, &b).to_string(),
                "geometric": pair_product_geometric(mu, &a, &b).to_string(),
                "difference": d.difference.to_string(),
                "norm": d.norm,
                "predicted_norm": if mu == Microstate::Plus { 0.0 } else { 2.0 * theta.sin() },
            })
        })
        .collect();
    let registry = beable_lab::beables::builtin_evaluators();
    let ensemble: Vec<Value> = registry
        .names()
        .into_iter()
        .map(|name| {
            let e = expectation(&config.ensemble, &a, &b, registry.get(name).expect("listed").as_ref());
            json!({ "evaluator": name, "value": e.to_string(), "residual_nonscalar_norm": e.nonscalar_norm() })
        })
        .collect();
    let report = json!({ "theta_deg": theta.to_degrees(), "microstates": per_microstate, "ensemble": ensemble });
    Outcome::new("discrepancy", &config, json!({}), Body::Json(report))
}

fn gimbal(config: ExperimentConfig) -> Outcome {
    let rows: Vec<Vec<f64>> = gimbal_sweep().into_iter().map(|(pitch, det)| vec![pitch, det]).collect();
    let locked: Vec<f64> = rows.iter().filter(|r| r[1].abs() < GIMBAL_LOCK_THRESHOLD).map(|r| r[0]).collect();
    let summary = json!({
        "pitch_unit": "rad",
        "lock_threshold": GIMBAL_LOCK_THRESHOLD,
        "locked_pitches": locked,
    });
    let table = Table { header: &["pitch", "det"], rows, summary };
    Outcome::new("gimbal", &config, json!({}), Body::Csv(table))
}

fn surface(args: SurfaceArgs, config: ExperimentConfig) -> Result<Outcome, CliError> {
    let (source, mesh): (String, TriangleMesh) = match &args.file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mesh = parse_off(&text).map_err(|e| CliError::field("file", e.to_string()))?;
            (path.display().to_string(), mesh)
        }
        None => {
            let mesh = builtin_shapes().make_mesh(&args.shape).map_err(|e| CliError::field("shape", e.to_string()))?;
            (args.shape.clone(), mesh)
        }
    };
    let (vertices, faces) = (mesh.vertices.len(), mesh.faces.len());
    let params = json!({ "shape": args.shape, "file": args.file.as_ref().map(|p| p.display().to_string()) });
    let outcome = match mesh.validate() {
        Ok(closed) => {
            let integral = closed_surface_integral(&closed);
            let area = closed.total_area();
            let report = json!({
                "source": source,
                "vertices": vertices,
                "faces": faces,
                "valid": true,
                "verdict": "closed, consistently oriented 2-manifold",
                "integral": integral.to_string(),
                "integral_coeffs": integral,
                "integral_norm": integral.norm(),
                "total_area": area,
                "relative_norm": integral.norm() / area,
            });
            Outcome::new("surface", &config, params, Body::Json(report))
        }
        Err(e) => {
            let report = json!({
                "source": source,
                "vertices": vertices,
                "faces": faces,
                "valid": false,
                "verdict": e.to_string(),
                "integral": Value::Null,
            });
            let mut outcome = Outcome::new("surface", &config, params, Body::Json(report));
            outcome.failure = Some(CliError::field("mesh", e.to_string()));
            outcome
        }
    };
    Ok(outcome)
}

fn baseline(args: BaselineArgs, mut config: ExperimentConfig) -> Result<Outcome, CliError> {
    apply_pair(&args.pair, &mut config)?;
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if config.samples == 0 {
        return Err(CliError::field("samples", "must be at least 1"));
    }
    let (a, b) = (config.a, config.b);
    let run = |b: &UnitVector3| bell_baseline(&a, b, config.samples, config.seed).expect("samples checked above");
    if let Some(steps) = args.steps {
        let steps = check_steps(steps)?;
        let rows = sweep(&a, &b, steps)
            .into_iter()
            .map(|(deg, b)| {
                let r = run(&b);
                vec![deg, r.e_scalar, 0.0, r.stderr, r.linear_prediction, r.cosine_prediction]
            })
            .collect();
        let summary = json!({ "model": "A = sign(lambda . a), B = -sign(lambda . b), lambda uniform on the sphere" });
        let table = Table {
            header: &["theta_deg", "E_scalar", "residual", "stderr", "linear_prediction", "cosine_prediction"],
            rows,
            summary,
        };
        return Ok(Outcome::new("baseline-bell", &config, json!({ "steps": steps }), Body::Csv(table)));
    }
    let report = run(&b);
    let gap = report.e_scalar - report.cosine_prediction;
    let report = json!({ "baseline": report, "gap_to_cosine": gap });
    Ok(Outcome::new("baseline-bell", &config, json!({}), Body::Json(report)))
}
