//! Pass/fail reports for axiom and equation checks.
//!
//! Every verifier returns a [`Report`]: one [`Check`] per axiom or relation,
//! with failure witnesses collected up to a cap rather than stopping at the
//! first counterexample.

use std::fmt;

use serde::Serialize;

/// Witness cap applied by default when collecting failures.
pub const DEFAULT_MAX_WITNESSES: usize = 16;

/// Case-count threshold above which verification switches from exhaustive
/// evaluation to deterministic seeded sampling.
pub const EXHAUSTIVE_CASE_LIMIT: u64 = 10_000_000;

/// Options shared by the table-driven verifiers.
#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub max_witnesses: usize,
    /// Exhaustive up to this many cases, seeded sampling beyond it.
    pub exhaustive_limit: u64,
    /// Seed for the sampling fallback.
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            max_witnesses: DEFAULT_MAX_WITNESSES,
            exhaustive_limit: EXHAUSTIVE_CASE_LIMIT,
            seed: 0,
        }
    }
}

impl CheckOptions {
    pub fn with_max_witnesses(max_witnesses: usize) -> Self {
        Self {
            max_witnesses,
            ..Self::default()
        }
    }
}

/// Outcome of a single named check. `witnesses` holds the failing index
/// tuples (meaning documented per check), capped at the configured limit.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witnesses: Vec<Vec<usize>>,
    pub cases: u64,
    pub sampled: bool,
}

impl Check {
    pub fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: true,
            witnesses: Vec::new(),
            cases: 0,
            sampled: false,
        }
    }

    /// Records one evaluated case; on failure stores the witness up to the cap.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<usize>, cap: usize) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            if self.witnesses.len() < cap {
                self.witnesses.push(witness());
            }
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{:<28} {} ({} cases", self.name, status, self.cases)?;
        if self.sampled {
            write!(f, ", sampled")?;
        }
        write!(f, ")")?;
        if !self.passed {
            write!(f, " witnesses: ")?;
            let shown: Vec<String> = self
                .witnesses
                .iter()
                .map(|w| {
                    let parts: Vec<String> = w.iter().map(|v| v.to_string()).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            write!(f, "{}", shown.join(" "))?;
        }
        Ok(())
    }
}

/// A bundle of checks; passes only if every check passes.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        Ok(())
    }
}
