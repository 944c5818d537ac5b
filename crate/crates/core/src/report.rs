use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    // validation
    DanglingReference,
    DuplicateId,
    Unreachable,
    InvalidComposite,
    // conformance
    UndefinedTransition,
    InvalidOrder,
    // coverage
    UncoveredTransition,
    UncoveredState,
    // variant verification
    BaseTraceLost,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subject: String,
    pub detail: String,
}

impl Violation {
    pub fn new(kind: ViolationKind, subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            subject: subject.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.kind, self.subject, self.detail)
    }
}

/// Verdict plus the violations that caused it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        Report {
            verdict: Verdict::from_pass(violations.is_empty()),
            violations,
        }
    }

    pub fn is_pass(&self) -> bool {
        self.verdict.is_pass()
    }
}

/// Structural problems found in an OLC. Unreachable states are warnings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Violation>,
}

impl ValidationReport {
    pub(crate) fn push(&mut self, kind: ViolationKind, subject: impl Into<String>, detail: impl Into<String>) {
        self.issues.push(Violation::new(kind, subject, detail));
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.issues.iter().filter(|v| v.kind != ViolationKind::Unreachable)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.issues.iter().filter(|v| v.kind == ViolationKind::Unreachable)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }
}
