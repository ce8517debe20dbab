//! Law-check reports shared by every verifier.

use serde::{Deserialize, Serialize};

/// How much of a law's domain was actually inspected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Coverage {
    Exhaustive,
    /// Checked on `samples` seeded pseudo-random points of a domain too large
    /// to enumerate.
    Sampled { samples: u64, seed: u64 },
    /// Every element was checked, but iterated constructions (`T²X`, `T³X`)
    /// were enumerated only up to paths of length `bound`.
    Truncated { bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub at: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub subject: String,
    pub checked: u64,
    pub coverage: Coverage,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> Self {
        LawReport {
            subject: subject.into(),
            checked: 0,
            coverage: Coverage::Exhaustive,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn tick(&mut self) {
        self.checked += 1;
    }

    /// Records one check; pushes a violation when `ok` is false.
    pub fn expect(
        &mut self,
        ok: bool,
        law: &str,
        at: impl FnOnce() -> String,
        detail: impl FnOnce() -> String,
    ) -> bool {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation { law: law.to_string(), at: at(), detail: detail() });
        }
        ok
    }

    pub fn violate(&mut self, law: &str, at: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation { law: law.to_string(), at: at.into(), detail: detail.into() });
    }

    pub fn absorb(&mut self, other: LawReport) {
        self.checked += other.checked;
        if other.coverage != Coverage::Exhaustive {
            self.coverage = other.coverage;
        }
        self.violations.extend(other.violations);
    }
}
