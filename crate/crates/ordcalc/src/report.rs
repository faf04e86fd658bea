//! Pass/fail reporting with re-checkable witnesses.

use serde::{Deserialize, Serialize};

/// Outcome of a single named check. Failing checks carry a witness tuple of
/// element indices that violates the property when re-checked; skipped checks
/// record why their hypotheses did not apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail { witness: Vec<usize> },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl AxiomReport {
    pub fn new(subject: impl Into<String>) -> Self {
        AxiomReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn pass(&mut self, name: &str) {
        self.checks.push(Check {
            name: name.to_string(),
            outcome: Outcome::Pass,
        });
    }

    pub fn fail(&mut self, name: &str, witness: Vec<usize>) {
        self.checks.push(Check {
            name: name.to_string(),
            outcome: Outcome::Fail { witness },
        });
    }

    pub fn skip(&mut self, name: &str, reason: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            outcome: Outcome::Skipped {
                reason: reason.into(),
            },
        });
    }

    pub fn record(&mut self, name: &str, witness: Option<Vec<usize>>) {
        match witness {
            None => self.pass(name),
            Some(w) => self.fail(name, w),
        }
    }

    /// Record a boolean check with a fixed witness used only on failure.
    pub fn record_bool(&mut self, name: &str, ok: bool, witness: Vec<usize>) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, witness);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| matches!(c.outcome, Outcome::Pass | Outcome::Skipped { .. }))
    }

    pub fn passed(&self, name: &str) -> bool {
        self.checks
            .iter()
            .any(|c| c.name == name && matches!(c.outcome, Outcome::Pass))
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Fail { .. }))
    }

    pub fn merge(&mut self, other: AxiomReport) {
        for c in other.checks {
            self.checks.push(Check {
                name: format!("{}.{}", other.subject, c.name),
                outcome: c.outcome,
            });
        }
    }
}
