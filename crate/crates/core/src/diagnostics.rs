//! JSON diagnostic records `{operation, inputs_digest, verdict, extremal_values, tolerance}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{PositivityReport, RegularityProbe};
use crate::symplectic::PhasePoint;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub operation: String,
    /// Hex SHA-256 of the canonical input text.
    pub inputs_digest: String,
    pub verdict: String,
    pub extremal_values: BTreeMap<String, f64>,
    pub tolerance: f64,
}

pub fn digest(canonical_input: &str) -> String {
    Sha256::digest(canonical_input.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Canonical text of a point list: one `Display` form per line.
pub fn points_canonical(points: &[PhasePoint]) -> String {
    points.iter().map(|p| format!("{p}\n")).collect()
}

impl Diagnostic {
    pub fn new(operation: &str, canonical_input: &str, verdict: impl ToString, tolerance: f64) -> Self {
        Self {
            operation: operation.into(),
            inputs_digest: digest(canonical_input),
            verdict: verdict.to_string(),
            extremal_values: BTreeMap::new(),
            tolerance,
        }
    }

    pub fn with_value(mut self, name: &str, value: f64) -> Self {
        self.extremal_values.insert(name.into(), value);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl<T: Real> From<&PositivityReport<T>> for Diagnostic {
    fn from(r: &PositivityReport<T>) -> Self {
        Diagnostic::new("positivity_check", &points_canonical(&r.points), format!("{:?}", r.verdict), r.tolerance.as_f64())
            .with_value("min_eigenvalue", r.min_eigenvalue.as_f64())
    }
}

impl<T: Real> From<&RegularityProbe<T>> for Diagnostic {
    fn from(r: &RegularityProbe<T>) -> Self {
        let grid: String = r.samples.iter().map(|(t, _)| format!("{t:e}\n")).collect();
        Diagnostic::new("regularity_probe", &grid, format!("{:?}", r.classification), crate::state::JUMP_THRESHOLD)
            .with_value("window_max_deviation", r.window_max_deviation.as_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{kernel_positivity, GeneratingFunction, PSD_TOL};

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn positivity_diagnostic() {
        let pts = [PhasePoint::zero(1), PhasePoint::from_ints(&[1], &[2]).unwrap()];
        let r = kernel_positivity(&GeneratingFunction::<f64>::fock(1), &pts, PSD_TOL).unwrap();
        let d = Diagnostic::from(&r);
        assert_eq!(d.verdict, "Psd");
        assert_eq!(d.inputs_digest, digest(&points_canonical(&pts)));
        let back: Diagnostic = serde_json::from_str(&d.to_json().unwrap()).unwrap();
        assert_eq!(back, d);
    }
}
