use serde::{Deserialize, Serialize};

use crate::error::{ChaosError, Result};

/// Finite-cell discretization of a non-atomic control measure.
///
/// Cell `k` is identified with its index; the cells are disjoint by
/// construction and `masses[k]` is the measure of cell `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct DiscreteMeasure {
    masses: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    masses: Vec<f64>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = ChaosError;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.masses)
    }
}

impl From<DiscreteMeasure> for RawMeasure {
    fn from(m: DiscreteMeasure) -> Self {
        RawMeasure { masses: m.masses }
    }
}

impl DiscreteMeasure {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(ChaosError::InvalidMeasure("at least one cell is required".into()));
        }
        if let Some((k, m)) = masses.iter().enumerate().find(|(_, m)| !(m.is_finite() && **m > 0.0)) {
            return Err(ChaosError::InvalidMeasure(format!(
                "mass of cell {k} must be strictly positive and finite, got {m}"
            )));
        }
        Ok(Self { masses })
    }

    /// `n` cells of unit mass.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn cells(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, cell: usize) -> f64 {
        self.masses[cell]
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_and_non_finite_masses() {
        assert!(DiscreteMeasure::new(vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![1.0, 0.0]).is_err());
        assert!(DiscreteMeasure::new(vec![-1.0]).is_err());
        assert!(DiscreteMeasure::new(vec![f64::INFINITY]).is_err());
        assert!(DiscreteMeasure::new(vec![f64::NAN]).is_err());
        let m = DiscreteMeasure::new(vec![0.5, 2.0]).unwrap();
        assert_eq!(m.cells(), 2);
        assert_eq!(m.total_mass(), 2.5);
    }

    #[test]
    fn deserialization_validates() {
        let ok: DiscreteMeasure = serde_json::from_str(r#"{"masses":[1.0,0.25]}"#).unwrap();
        assert_eq!(ok.masses(), &[1.0, 0.25]);
        assert!(serde_json::from_str::<DiscreteMeasure>(r#"{"masses":[1.0,-2.0]}"#).is_err());
    }
}
