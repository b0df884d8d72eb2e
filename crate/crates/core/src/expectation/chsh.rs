use serde::Serialize;

use super::{expectation, CorrelationReport, ExpectationError, ExperimentConfig, OrientationEnsemble};
use crate::beables::PairEvaluator;
use crate::ga::UnitVector3;

/// One of the four correlations in the CHSH string.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChshTerm {
    pub settings: &'static str,
    pub coefficient: f64,
    pub correlation: CorrelationReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChshReport {
    pub terms: Vec<ChshTerm>,
    pub s: CorrelationReport,
}

/// Detector directions at the given angles (degrees) in the plane
/// orthogonal to `axis`, in the order `[a, a', b, b']`.
pub fn chsh_directions(axis: UnitVector3, angles_deg: [f64; 4]) -> [UnitVector3; 4] {
    angles_deg.map(|deg| UnitVector3::in_plane(axis, deg.to_radians()))
}

/// `S = E(a,b) + E(a,b') + E(a',b) - E(a',b')` from four ensemble expectations.
pub fn chsh(config: &ExperimentConfig) -> Result<ChshReport, ExpectationError> {
    config.validate()?;
    let evaluator = config.resolve_evaluator()?;
    let pairs = [
        ("a,b", 1.0, &config.a, &config.b),
        ("a,b'", 1.0, &config.a, &config.b_prime),
        ("a',b", 1.0, &config.a_prime, &config.b),
        ("a',b'", -1.0, &config.a_prime, &config.b_prime),
    ];
    let mut total = crate::ga::Multivector::ZERO;
    let mut terms = Vec::with_capacity(4);
    for (settings, coefficient, x, y) in pairs {
        let e = expectation(&config.ensemble, x, y, evaluator.as_ref());
        total += e * coefficient;
        terms.push(ChshTerm { settings, coefficient, correlation: CorrelationReport::new(e, evaluator.name()) });
    }
    Ok(ChshReport { terms, s: CorrelationReport::new(total, evaluator.name()) })
}

/// `-cos(ab) - cos(ab') - cos(a'b) + cos(a'b')`, the isotropic closed form.
pub fn chsh_closed_form(a: &UnitVector3, a_prime: &UnitVector3, b: &UnitVector3, b_prime: &UnitVector3) -> f64 {
    let c = |x: &UnitVector3, y: &UnitVector3| x.angle_to(y).cos();
    -c(a, b) - c(a, b_prime) - c(a_prime, b) + c(a_prime, b_prime)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub offset_deg: f64,
    pub s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChshScan {
    pub rows: Vec<ScanRow>,
    /// Offset maximizing `|S|`, refined between grid points.
    pub peak_offset_deg: f64,
    pub peak_abs_s: f64,
}

/// Settings of the scan family at offset `phi` degrees: `a = 0`, `a' = 90`,
/// `b = phi`, `b' = -phi`, all about `axis`.
pub fn chsh_scan_family(axis: UnitVector3, offset_deg: f64) -> [UnitVector3; 4] {
    chsh_directions(axis, [0.0, 90.0, offset_deg, -offset_deg])
}

/// Sweeps the scalar part of `S` over offsets `0..=180` degrees in
/// `steps` evenly spaced points.
pub fn chsh_scan(
    axis: UnitVector3,
    steps: usize,
    ensemble: &OrientationEnsemble,
    evaluator: &dyn PairEvaluator,
) -> Result<ChshScan, ExpectationError> {
    if steps < 2 {
        return Err(ExpectationError::TooFewSteps(steps));
    }
    let s_at = |offset_deg: f64| {
        let [a, a_prime, b, b_prime] = chsh_scan_family(axis, offset_deg);
        let s = expectation(ensemble, &a, &b, evaluator)
            + expectation(ensemble, &a, &b_prime, evaluator)
            + expectation(ensemble, &a_prime, &b, evaluator)
            - expectation(ensemble, &a_prime, &b_prime, evaluator);
        s.scalar_part()
    };
    let span = 180.0;
    let step = span / (steps - 1) as f64;
    let rows: Vec<ScanRow> = (0..steps)
        .map(|i| {
            let offset_deg = if i == steps - 1 { span } else { i as f64 * step };
            ScanRow { offset_deg, s: s_at(offset_deg) }
        })
        .collect();
    let best =
        rows.iter().enumerate().max_by(|x, y| x.1.s.abs().total_cmp(&y.1.s.abs())).map(|(i, _)| i).expect("steps >= 2");
    let lo = rows[best.saturating_sub(1)].offset_deg;
    let hi = rows[(best + 1).min(steps - 1)].offset_deg;
    let (peak_offset_deg, peak_abs_s) = golden_section_max(|x| s_at(x).abs(), lo, hi);
    let grid_peak = rows[best].s.abs();
    let (peak_offset_deg, peak_abs_s) =
        if grid_peak > peak_abs_s { (rows[best].offset_deg, grid_peak) } else { (peak_offset_deg, peak_abs_s) };
    Ok(ChshScan { rows, peak_offset_deg, peak_abs_s })
}

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beables::PaperEvaluator;

    fn config_at(angles: [f64; 4]) -> ExperimentConfig {
        let [a, a_prime, b, b_prime] = chsh_directions(UnitVector3::E3, angles);
        ExperimentConfig { a, a_prime, b, b_prime, ..ExperimentConfig::default() }
    }

    #[test]
    fn tsirelson_angles() {
        let report = chsh(&config_at([0.0, 90.0, 45.0, -45.0])).unwrap();
        assert!((report.s.scalar_part + 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(report.s.residual_nonscalar_norm <= 1e-12);
    }

    #[test]
    fn aligned_and_orthogonal_settings() {
        let aligned = chsh(&config_at([10.0; 4])).unwrap();
        assert!((aligned.s.scalar_part + 2.0).abs() < 1e-12);
        // a, a' along e1, b, b' along e2.
        let cfg = ExperimentConfig {
            a: UnitVector3::E1,
            a_prime: -UnitVector3::E1,
            b: UnitVector3::E2,
            b_prime: UnitVector3::E3,
            ..ExperimentConfig::default()
        };
        assert!(chsh(&cfg).unwrap().s.scalar_part.abs() < 1e-15);
    }

    #[test]
    fn scan_examples() {
        let iso = OrientationEnsemble::isotropic();
        let scan = chsh_scan(UnitVector3::E3, 181, &iso, &PaperEvaluator).unwrap();
        assert_eq!(scan.rows.len(), 181);
        assert!((scan.rows[0].s.abs() - 2.0).abs() < 1e-12);
        assert!((scan.rows[90].s.abs() - 2.0).abs() < 1e-12);
        assert!((scan.rows[45].s.abs() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((scan.peak_abs_s - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!((scan.peak_offset_deg - 45.0).abs() < 1e-3);
        assert!(chsh_scan(UnitVector3::E3, 1, &iso, &PaperEvaluator).is_err());
    }

    #[test]
    fn coarse_scan_still_finds_peak() {
        let iso = OrientationEnsemble::isotropic();
        let scan = chsh_scan(UnitVector3::E3, 7, &iso, &PaperEvaluator).unwrap();
        assert!((scan.peak_abs_s - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    }
}
