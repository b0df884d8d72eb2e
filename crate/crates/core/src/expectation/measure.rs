use serde::Serialize;

use super::{ExpectationError, WEIGHT_TOLERANCE};
use crate::beables::Microstate;
use crate::ga::Multivector;

/// One atom of a directed measure.
///
/// The directed weight `d rho` and the scalar measure `|d rho|` are related
/// by `d rho = I |d rho|`, so `|d rho| = -I d rho`. A probability atom has
/// `d rho = w`, which makes `|d rho| = -I w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirectedMeasureAtom {
    pub sign: Microstate,
    pub directed_weight: Multivector,
}

impl DirectedMeasureAtom {
    pub fn from_probability(sign: Microstate, weight: f64) -> Self {
        Self { sign, directed_weight: Multivector::scalar(weight) }
    }

    /// Builds the atom from its scalar measure `|d rho|`.
    pub fn from_scalar_weight(sign: Microstate, scalar_weight: Multivector) -> Self {
        Self { sign, directed_weight: Multivector::I * scalar_weight }
    }

    /// `|d rho| = -I d rho`.
    pub fn scalar_weight(&self) -> Multivector {
        -Multivector::I * self.directed_weight
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub atoms: usize,
    /// Sum of `d rho`.
    pub directed_total: Multivector,
    pub directed_total_text: String,
    /// Sum of `|d rho|`.
    pub scalar_total: Multivector,
    pub scalar_total_text: String,
}

/// Totals of a directed measure. Fails unless the directed total is the
/// scalar 1 to within [`WEIGHT_TOLERANCE`].
pub fn measure_normalization_report(measure: &[DirectedMeasureAtom]) -> Result<MeasureReport, ExpectationError> {
    if measure.is_empty() {
        return Err(ExpectationError::EmptyMeasure);
    }
    let directed_total: Multivector = measure.iter().map(|a| a.directed_weight).sum();
    let scalar_total: Multivector = measure.iter().map(|a| a.scalar_weight()).sum();
    let deviation = directed_total.max_abs_diff(&Multivector::ONE);
    if deviation.is_nan() || deviation > WEIGHT_TOLERANCE {
        return Err(ExpectationError::Unnormalized { deviation });
    }
    Ok(MeasureReport {
        atoms: measure.len(),
        directed_total,
        directed_total_text: directed_total.to_string(),
        scalar_total,
        scalar_total_text: scalar_total.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expectation::OrientationEnsemble;

    #[test]
    fn isotropic_measure() {
        let report = measure_normalization_report(&OrientationEnsemble::isotropic().directed_measure()).unwrap();
        assert_eq!(report.directed_total, Multivector::ONE);
        assert_eq!(report.scalar_total, -Multivector::I);
        assert_eq!(report.scalar_total_text, "-1 e123");
    }

    #[test]
    fn single_atom() {
        let atom = DirectedMeasureAtom::from_probability(Microstate::Plus, 1.0);
        let report = measure_normalization_report(&[atom]).unwrap();
        assert_eq!(report.directed_total, Multivector::ONE);
        assert_eq!(report.scalar_total, -Multivector::I);
    }

    #[test]
    fn duality_round_trip_is_exact() {
        let atom = DirectedMeasureAtom::from_probability(Microstate::Minus, 0.3);
        assert_eq!(Multivector::I * atom.scalar_weight(), atom.directed_weight);
        let rebuilt = DirectedMeasureAtom::from_scalar_weight(Microstate::Minus, atom.scalar_weight());
        assert_eq!(rebuilt, atom);
    }

    #[test]
    fn unnormalized_rejected() {
        let atoms = [
            DirectedMeasureAtom::from_probability(Microstate::Plus, 0.45),
            DirectedMeasureAtom::from_probability(Microstate::Minus, 0.45),
        ];
        assert!(matches!(measure_normalization_report(&atoms), Err(ExpectationError::Unnormalized { .. })));
        assert_eq!(measure_normalization_report(&[]), Err(ExpectationError::EmptyMeasure));
    }
}
