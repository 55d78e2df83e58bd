//! Scenario runner behind the `prc verify` command.
//!
//! Each scenario builds a family of towers, series or closure elements from
//! [`ScenarioParams`], runs the corresponding checks and returns a [`Report`].
//! Scenarios are deterministic given the seed.

mod scenarios;
mod subalgebra;

pub use scenarios::random_member;
pub use subalgebra::{chain_form, subalgebra_membership, SubalgebraVerdict};

use std::fmt;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::field::is_supported_prime;

pub const SCENARIOS: [&str; 6] = ["invariants", "reduction", "tensor", "chain", "closure", "roundtrips"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown scenario `{0}` (expected one of invariants, reduction, tensor, chain, closure, roundtrips, all)")]
    UnknownScenario(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScenarioParams {
    pub p: u32,
    pub mu: u32,
    /// Adjunction exponent; `0` selects the trivial tower.
    pub nu: u32,
    /// Chain depth `j`.
    pub depth: usize,
    /// Input precision `N`.
    pub precision: usize,
    pub seed: u64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams { p: 2, mu: 1, nu: 1, depth: 3, precision: 64, seed: 42 }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<(), VerifyError> {
        let out = |m: String| Err(VerifyError::ParamOutOfRange(m));
        if !is_supported_prime(self.p) {
            return out(format!("p = {} is not a prime <= 13", self.p));
        }
        if !(1..=3).contains(&self.mu) {
            return out(format!("mu = {} (expected 1..=3)", self.mu));
        }
        if self.nu > self.mu {
            return out(format!("nu = {} exceeds mu = {}", self.nu, self.mu));
        }
        let q = self.p.pow(self.nu) as usize;
        if q > crate::tower::MAX_DEGREE {
            return out(format!("p^nu = {q} exceeds the maximal tower degree"));
        }
        if !(1..=6).contains(&self.depth) {
            return out(format!("depth = {} (expected 1..=6)", self.depth));
        }
        if self.precision < q * 16 {
            return out(format!("precision {} is below p^nu * 16 = {}", self.precision, q * 16));
        }
        if self.precision > 8192 {
            return out(format!("precision {} exceeds 8192", self.precision));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Unknown,
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Unknown => "unknown",
            CheckStatus::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub status: CheckStatus,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub params: ScenarioParams,
    pub checks: Vec<ReportCheck>,
    pub runtime_ms: u64,
}

impl Report {
    /// Fail if any check fails, else unknown if any is unknown, else pass.
    pub fn overall(&self) -> CheckStatus {
        self.checks.iter().map(|c| c.status).max().unwrap_or(CheckStatus::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        status_exit_code(self.overall())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = format!(
            "{} (p={}, mu={}, nu={}, depth={}, N={}, seed={}): {} [{} ms]\n",
            self.scenario,
            p.p,
            p.mu,
            p.nu,
            p.depth,
            p.precision,
            p.seed,
            self.overall().to_string().to_uppercase(),
            self.runtime_ms
        );
        for c in &self.checks {
            out.push_str(&format!("  {:<8} {}: {}\n", c.status, c.name, c.witness));
        }
        out
    }
}

pub fn status_exit_code(status: CheckStatus) -> i32 {
    match status {
        CheckStatus::Pass => 0,
        CheckStatus::Fail => 1,
        CheckStatus::Unknown => 2,
    }
}

/// Collects checks for a report.
#[derive(Debug, Default)]
pub(crate) struct Checks(Vec<ReportCheck>);

impl Checks {
    pub(crate) fn push(&mut self, name: impl Into<String>, status: CheckStatus, witness: impl Into<String>) {
        self.0.push(ReportCheck { name: name.into(), status, witness: witness.into() });
    }

    pub(crate) fn bool(&mut self, name: impl Into<String>, ok: bool, witness: impl Into<String>) {
        self.push(name, if ok { CheckStatus::Pass } else { CheckStatus::Fail }, witness);
    }
}

pub fn run_scenario(name: &str, params: &ScenarioParams) -> Result<Report, VerifyError> {
    params.validate()?;
    let start = Instant::now();
    let mut checks = Checks::default();
    match name {
        "invariants" => scenarios::invariants(params, &mut checks),
        "reduction" => scenarios::reduction(params, &mut checks),
        "tensor" => scenarios::tensor(params, &mut checks),
        "chain" => scenarios::chain(params, &mut checks),
        "closure" => scenarios::closure(params, &mut checks),
        "roundtrips" => scenarios::roundtrips(params, &mut checks),
        other => return Err(VerifyError::UnknownScenario(other.to_string())),
    }
    Ok(Report {
        scenario: name.to_string(),
        params: *params,
        checks: checks.0,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs every scenario, one thread each, in the order of [`SCENARIOS`].
pub fn run_all(params: &ScenarioParams) -> Result<Vec<Report>, VerifyError> {
    params.validate()?;
    std::thread::scope(|s| {
        let handles: Vec<_> = SCENARIOS.iter().map(|name| s.spawn(move || run_scenario(name, params))).collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_are_validated() {
        let ok = ScenarioParams::default();
        assert!(ok.validate().is_ok());
        let bad = ScenarioParams { precision: 16, nu: 1, p: 3, ..ok };
        assert!(matches!(bad.validate(), Err(VerifyError::ParamOutOfRange(_))));
        let bad = ScenarioParams { nu: 2, ..ok };
        assert!(matches!(bad.validate(), Err(VerifyError::ParamOutOfRange(_))));
        let bad = ScenarioParams { p: 4, ..ok };
        assert!(bad.validate().is_err());
        assert!(matches!(run_scenario("nope", &ok), Err(VerifyError::UnknownScenario(_))));
    }

    #[test]
    fn overall_status_ordering() {
        let mut r = Report { scenario: "x".into(), params: ScenarioParams::default(), checks: vec![], runtime_ms: 0 };
        assert_eq!(r.exit_code(), 0);
        r.checks.push(ReportCheck { name: "a".into(), status: CheckStatus::Unknown, witness: String::new() });
        assert_eq!(r.exit_code(), 2);
        r.checks.push(ReportCheck { name: "b".into(), status: CheckStatus::Fail, witness: String::new() });
        assert_eq!(r.exit_code(), 1);
    }
}
