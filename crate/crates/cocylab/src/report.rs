//! Audit reports shared by the cocycle, symbol and Chevalley verifiers.
//! Violations are data, not errors: a report with a nonempty violation list
//! is a successful audit of a broken object.

use serde::Serialize;

/// One falsified instance of the law under audit. `inputs` are canonical
/// encodings of the sampled arguments; `lhs`/`rhs` are the two sides that
/// failed to agree, re-evaluated before being recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of an audit: total number of instances checked, total number of
/// violations, and the first few violations in sampling order (at most
/// [`AuditReport::MAX_RECORDED`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub checked: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub const MAX_RECORDED: usize = 10;

    pub fn new() -> Self {
        AuditReport { checked: 0, violation_count: 0, violations: Vec::new() }
    }

    pub fn record_check(&mut self) {
        self.checked += 1;
    }

    pub fn record_violation(&mut self, v: Violation) {
        self.violation_count += 1;
        if self.violations.len() < Self::MAX_RECORDED {
            self.violations.push(v);
        }
    }

    pub fn clean(&self) -> bool {
        self.violation_count == 0
    }
}

impl Default for AuditReport {
    fn default() -> Self {
        Self::new()
    }
}
