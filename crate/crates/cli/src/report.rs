use std::fmt::Write as _;

use serde::Serialize;
use trivalent::characterize::{CheckReport, Finding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Outcome of one claim of the verification suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub status: Status,
    pub instances: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Finding>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl ClaimReport {
    pub fn from_checks(claim: &str, checks: CheckReport) -> ClaimReport {
        ClaimReport {
            claim: claim.into(),
            status: Status::of(checks.passed()),
            instances: checks.instances,
            failures: checks.failures.len() as u64,
            counterexample: checks.failures.into_iter().next(),
            notes: Vec::new(),
            runtime_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// A failing report for a claim that stopped with an error.
    pub fn errored(claim: &str, e: &trivalent::Error) -> ClaimReport {
        ClaimReport {
            claim: claim.into(),
            status: Status::Fail,
            instances: 0,
            failures: 1,
            counterexample: Some(Finding::new("error", e.to_string())),
            notes: Vec::new(),
            runtime_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub seed: u64,
    pub status: Status,
    pub claims: Vec<ClaimReport>,
}

impl VerifyReport {
    pub fn new(seed: u64, claims: Vec<ClaimReport>, timestamp: Option<u64>) -> VerifyReport {
        VerifyReport {
            timestamp,
            seed,
            status: Status::of(claims.iter().all(ClaimReport::passed)),
            claims,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let status = if c.passed() { "pass" } else { "FAIL" };
            let _ = write!(out, "{status:<5}{:<16}{:>10} instances", c.claim, c.instances);
            if let Some(ms) = c.runtime_ms {
                let _ = write!(out, "  {ms} ms");
            }
            out.push('\n');
            if let Some(cx) = &c.counterexample {
                let _ = writeln!(out, "     {} failure(s), first: {cx}", c.failures);
            }
            for n in &c.notes {
                let _ = writeln!(out, "     note: {n}");
            }
        }
        let _ = writeln!(
            out,
            "{}: {} of {} claims pass (seed {})",
            if self.passed() { "ok" } else { "failed" },
            self.claims.iter().filter(|c| c.passed()).count(),
            self.claims.len(),
            self.seed
        );
        out
    }
}
