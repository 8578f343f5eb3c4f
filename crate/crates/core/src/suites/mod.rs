//! Invariant sweeps shared by the acceptance tests and `classsize verify`.
//!
//! Each suite returns a [`SuiteReport`]: how many individual checks ran and
//! which failed. Suites report; callers decide what a failure means.

pub mod exact;
pub mod fixtures;
pub mod inequality;
pub mod multi;
pub mod single;

use std::fmt;

use serde::Serialize;

/// Failure messages kept per suite; the count is always exact.
const KEPT_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checks: 0,
            failed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(message());
            }
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failed += other.failed;
        let room = KEPT_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({} checks, {} failed)",
            self.name, self.checks, self.failed
        )?;
        for msg in &self.failures {
            write!(f, "\n  failure: {msg}")?;
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        Ok(())
    }
}

/// Sweep sizes: `Full` matches the acceptance criteria, `Quick` shrinks
/// every range for smoke runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

/// Every suite, in a fixed order.
pub fn run_all(scale: Scale, seed: u64) -> Vec<SuiteReport> {
    let sweep = single::Sweep::run(&single::SweepGrid::for_scale(scale));
    let mut out = vec![fixtures::worked_examples()];
    out.extend([
        single::near_equality(&sweep),
        single::class_count_gap(&sweep),
        single::all_singleton_region(&sweep),
        single::singleton_bound(&sweep),
        single::low_p_singletons(&sweep),
        single::two_class_structure(&sweep),
        single::subschool_closure(&sweep),
        single::monotone_in_w(&sweep),
        single::lazear_comparison(&sweep),
    ]);
    let (integer_max, root_max) = match scale {
        Scale::Quick => (60, 20),
        Scale::Full => (200, 60),
    };
    out.push(exact::integer_identities(integer_max));
    out.push(exact::crossing_roots(root_max));
    out.push(exact::descartes_consistency(root_max.min(40)));
    out.push(exact::two_class_polynomials(root_max));
    out.push(exact::conjecture_scan(5..=root_max));
    out.push(exact::regions_on_grid(scale));
    out.push(multi::structure_sweep(&multi::MultiGrid::for_scale(scale)));
    out.push(multi::cycle_breaking(100, seed));
    out.push(inequality::all(seed));
    out
}
