//! Verification reports: which cases ran and which checks failed.

use serde_json::{json, Value};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub case: usize,
    pub check: String,
    pub lhs: Value,
    pub rhs: Value,
}

impl Failure {
    pub fn to_json(&self) -> Value {
        json!({ "case": self.case, "check": self.check, "lhs": self.lhs, "rhs": self.rhs })
    }
}

/// Collects the failed checks of one case.
#[derive(Debug)]
pub struct CaseLog {
    case: usize,
    failures: Vec<Failure>,
}

impl CaseLog {
    pub fn new(case: usize) -> Self {
        CaseLog { case, failures: Vec::new() }
    }

    /// Records a failure unless `lhs == rhs`; serialization only happens on failure.
    pub fn check_eq<T: PartialEq>(&mut self, check: &str, lhs: &T, rhs: &T, to_json: impl Fn(&T) -> Value) -> bool {
        if lhs == rhs {
            return true;
        }
        self.fail(check, to_json(lhs), to_json(rhs));
        false
    }

    pub fn check(&mut self, check: &str, ok: bool, detail: impl FnOnce() -> Value) -> bool {
        if !ok {
            self.fail(check, detail(), Value::Null);
        }
        ok
    }

    pub fn fail(&mut self, check: &str, lhs: Value, rhs: Value) {
        self.failures.push(Failure { case: self.case, check: check.to_string(), lhs, rhs });
    }

    /// Records an error raised while computing a check.
    pub fn error(&mut self, check: &str, err: &Error) {
        self.fail(check, json!({ "error": err.to_string() }), Value::Null);
    }

    /// Runs `body`, turning an error into a recorded failure.
    pub fn run(mut self, check: &str, body: impl FnOnce(&mut Self) -> crate::Result<()>) -> Vec<Failure> {
        if let Err(e) = body(&mut self) {
            self.error(check, &e);
        }
        self.failures
    }

    pub fn into_failures(self) -> Vec<Failure> {
        self.failures
    }
}

/// Outcome of a verification suite. Contains no timing data, so two runs with
/// the same configuration serialize identically.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub suite: String,
    pub config: Value,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn new(suite: &str, config: Value) -> Self {
        VerificationReport { suite: suite.to_string(), config, cases: 0, failures: Vec::new() }
    }

    /// Appends the per-case results of one batch; case numbers are shifted to
    /// follow the cases already recorded, and `label` prefixes every check.
    pub fn absorb(&mut self, label: &str, results: Vec<Vec<Failure>>) {
        let offset = self.cases;
        self.cases += results.len();
        for f in results.into_iter().flatten() {
            let check = if label.is_empty() { f.check } else { format!("{label}: {}", f.check) };
            self.failures.push(Failure { case: f.case + offset, check, ..f });
        }
    }

    /// Appends all cases of another report under `label`.
    pub fn merge(&mut self, label: &str, other: VerificationReport) {
        let offset = self.cases;
        self.cases += other.cases;
        for f in other.failures {
            let check = if label.is_empty() { f.check } else { format!("{label}: {}", f.check) };
            self.failures.push(Failure { case: f.case + offset, check, ..f });
        }
    }

    /// Runs one sub-suite per item and merges the reports, labelled by `label`.
    pub fn over<I: Copy>(
        suite: &str,
        config: Value,
        items: impl IntoIterator<Item = I>,
        label: impl Fn(I) -> String,
        mut run: impl FnMut(I) -> crate::Result<VerificationReport>,
    ) -> crate::Result<VerificationReport> {
        let mut report = VerificationReport::new(suite, config);
        for item in items {
            report.merge(&label(item), run(item)?);
        }
        Ok(report)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "config": self.config,
            "cases": self.cases,
            "failures": self.failures.iter().map(Failure::to_json).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absorb_offsets_cases() {
        let mut r = VerificationReport::new("demo", json!({}));
        let mut log = CaseLog::new(1);
        log.check_eq("eq", &1, &2, |v| json!(v));
        r.absorb("a", vec![vec![], log.into_failures()]);
        r.absorb("b", vec![CaseLog::new(0).run("boom", |_| Err(Error::BudgetExceeded(3)))]);
        assert_eq!(r.cases, 3);
        assert_eq!(r.failures[0].case, 1);
        assert_eq!(r.failures[0].check, "a: eq");
        assert_eq!(r.failures[1].case, 2);
        assert!(!r.passed());
    }
}
