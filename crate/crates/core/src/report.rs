use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::matcore::ToleranceConfig;
use crate::seed::Seed;

/// Outcome of one property suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law_id: String,
    pub cases_run: u64,
    pub cases_failed: u64,
    /// Largest relative residual observed, over passing and failing cases.
    pub worst_residual: f64,
    pub seed: Seed,
    /// Inputs of the worst failing case; absent when nothing failed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Value>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.cases_failed == 0
    }

    /// Sub-law named in the counterexample payload, if any.
    pub fn failing_sublaw(&self) -> Option<&str> {
        self.counterexample
            .as_ref()
            .and_then(|c| c.get("sublaw"))
            .and_then(Value::as_str)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Accumulates case outcomes into a [`LawReport`].
pub(crate) struct Tally {
    report: LawReport,
    tol: f64,
    worst_failing: f64,
}

impl Tally {
    pub(crate) fn new(law_id: &str, seed: Seed, cfg: &ToleranceConfig) -> Self {
        Self {
            report: LawReport {
                law_id: law_id.to_string(),
                cases_run: 0,
                cases_failed: 0,
                worst_residual: 0.0,
                seed,
                counterexample: None,
            },
            tol: cfg.tol_rel,
            worst_failing: f64::NEG_INFINITY,
        }
    }

    /// Records a case that passes iff `residual <= tol_rel`. Residuals are
    /// expected to be already scaled.
    pub(crate) fn record(&mut self, sublaw: &str, residual: f64, payload: impl FnOnce() -> Value) {
        let ok = residual <= self.tol;
        self.outcome(sublaw, ok, residual, payload);
    }

    /// Records a case whose verdict is decided by the caller.
    pub(crate) fn outcome(
        &mut self,
        sublaw: &str,
        ok: bool,
        residual: f64,
        payload: impl FnOnce() -> Value,
    ) {
        let residual = if residual.is_finite() {
            residual
        } else {
            f64::MAX
        };
        self.report.cases_run += 1;
        self.report.worst_residual = self.report.worst_residual.max(residual);
        if !ok {
            self.report.cases_failed += 1;
            if residual > self.worst_failing || self.report.counterexample.is_none() {
                self.worst_failing = residual;
                let mut value = payload();
                if let Value::Object(map) = &mut value {
                    map.insert("sublaw".into(), Value::String(sublaw.to_string()));
                    map.insert("residual".into(), Value::from(residual));
                } else {
                    value = serde_json::json!({
                        "sublaw": sublaw,
                        "residual": residual,
                        "inputs": value,
                    });
                }
                self.report.counterexample = Some(value);
            }
        }
    }

    /// Folds a finished sub-report into this tally.
    pub(crate) fn absorb(&mut self, other: LawReport) {
        self.report.cases_run += other.cases_run;
        self.report.cases_failed += other.cases_failed;
        self.report.worst_residual = self.report.worst_residual.max(other.worst_residual);
        if let Some(c) = other.counterexample {
            let r = c
                .get("residual")
                .and_then(Value::as_f64)
                .unwrap_or(f64::MAX);
            if self.report.counterexample.is_none() || r > self.worst_failing {
                self.worst_failing = r;
                self.report.counterexample = Some(c);
            }
        }
    }

    pub(crate) fn finish(self) -> LawReport {
        self.report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn passing_tally_has_no_counterexample() {
        let mut t = Tally::new("x", Seed(1), &ToleranceConfig::default());
        t.record("a", 1e-12, || json!({}));
        t.record("a", 0.0, || json!({}));
        let r = t.finish();
        assert!(r.passed());
        assert_eq!(r.cases_run, 2);
        assert!(r.counterexample.is_none());
    }

    #[test]
    fn worst_failure_is_kept() {
        let mut t = Tally::new("x", Seed(1), &ToleranceConfig::default());
        t.record("a", 1e-3, || json!({"k": 1}));
        t.record("b", 1e-1, || json!({"k": 2}));
        t.record("c", 1e-2, || json!({"k": 3}));
        let r = t.finish();
        assert_eq!(r.cases_failed, 3);
        assert_eq!(r.failing_sublaw(), Some("b"));
        let line = r.to_json_line();
        let back: LawReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn non_finite_residual_fails() {
        let mut t = Tally::new("x", Seed(1), &ToleranceConfig::default());
        t.record("a", f64::NAN, || json!({}));
        let r = t.finish();
        assert!(!r.passed());
        assert!(r.worst_residual.is_finite());
    }
}
