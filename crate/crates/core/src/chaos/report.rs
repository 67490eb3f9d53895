use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A named scalar attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Bool(bool),
    Int(i64),
    UInt(u64),
    Real(f64),
    Text(String),
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Real(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Int(v)
    }
}

impl From<u64> for Scalar {
    fn from(v: u64) -> Self {
        i64::try_from(v).map_or(Scalar::UInt(v), Scalar::Int)
    }
}

impl From<usize> for Scalar {
    fn from(v: usize) -> Self {
        Scalar::Int(v as i64)
    }
}

impl From<bool> for Scalar {
    fn from(v: bool) -> Self {
        Scalar::Bool(v)
    }
}

impl From<&str> for Scalar {
    fn from(v: &str) -> Self {
        Scalar::Text(v.to_string())
    }
}

impl From<String> for Scalar {
    fn from(v: String) -> Self {
        Scalar::Text(v)
    }
}

/// Pass/fail record of one identity check.
///
/// `pass` is always `residual <= tolerance`; a NaN residual fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub metadata: BTreeMap<String, Scalar>,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            identity: identity.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<Scalar>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<Scalar>) {
        self.metadata.insert(key.into(), value.into());
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.metadata.get(key)? {
            Scalar::Real(v) => Some(*v),
            Scalar::Int(v) => Some(*v as f64),
            Scalar::UInt(v) => Some(*v as f64),
            _ => None,
        }
    }

    /// Folds several reports into one whose residual is the worst
    /// residual-to-tolerance ratio scaled back to `tolerance`, so the
    /// aggregate passes exactly when every child does. With `tolerance`
    /// zero the worst child residual is carried over unchanged.
    pub fn combine(identity: impl Into<String>, tolerance: f64, reports: &[VerificationReport]) -> Self {
        let ratio = |r: &VerificationReport| {
            if r.residual.is_nan() {
                f64::INFINITY
            } else if r.residual <= 0.0 {
                0.0
            } else if r.tolerance == 0.0 {
                f64::INFINITY
            } else {
                r.residual / r.tolerance
            }
        };
        let worst_ratio = reports.iter().map(ratio).fold(0.0, f64::max);
        let failures = reports.iter().filter(|r| !r.pass).count();
        let worst_residual = reports
            .iter()
            .map(|r| if r.residual.is_nan() { f64::INFINITY } else { r.residual })
            .fold(0.0, f64::max);
        let residual = if tolerance == 0.0 {
            worst_residual
        } else {
            worst_ratio * tolerance
        };
        Self::new(identity, residual, tolerance)
            .with("cases", reports.len())
            .with("failures", failures)
            .with("worst_residual", worst_residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_tracks_residual() {
        assert!(VerificationReport::new("x", 0.0, 1e-12).pass);
        assert!(VerificationReport::new("x", 1e-12, 1e-12).pass);
        assert!(!VerificationReport::new("x", 2e-12, 1e-12).pass);
        assert!(!VerificationReport::new("x", f64::NAN, 1.0).pass);
    }

    #[test]
    fn metadata_serializes_as_plain_scalars() {
        let r = VerificationReport::new("id", 0.5, 1.0)
            .with("cells", 3usize)
            .with("rho", 1.0)
            .with("variant", "proof-step")
            .with("exact", true);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"identity":"id","residual":0.5,"tolerance":1.0,"pass":true,"metadata":{"cells":3,"exact":true,"rho":1.0,"variant":"proof-step"}}"#
        );
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn combine_fails_if_any_child_fails() {
        let ok = VerificationReport::new("a", 1e-13, 1e-12);
        let bad = VerificationReport::new("b", 1e-3, 1e-12);
        let all = VerificationReport::combine("all", 1e-9, &[ok.clone(), bad]);
        assert!(!all.pass);
        let fine = VerificationReport::combine("all", 1e-9, &[ok]);
        assert!(fine.pass);
        assert!((fine.residual - 1e-10).abs() < 1e-22);
    }
}
