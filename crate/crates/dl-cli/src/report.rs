//! Suite reports: one per verification suite, with explicit failure records.

use serde::Serialize;

/// Stored failures are capped; the remainder is only counted, so reports stay
/// readable when an invariant breaks wholesale.
const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: u64,
    pub failures: Vec<Failure>,
    /// Failures beyond the recording cap.
    pub suppressed_failures: u64,
    /// Wall time is reported on stderr only, keeping stdout byte-stable for
    /// identical argv + seed.
    #[serde(skip)]
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            cases: 0,
            failures: Vec::new(),
            suppressed_failures: 0,
            wall_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.suppressed_failures == 0
    }

    /// Records one case; on failure the description closure supplies
    /// (case, expected, actual).
    pub fn check<F>(&mut self, ok: bool, describe: F)
    where
        F: FnOnce() -> (String, String, String),
    {
        self.cases += 1;
        if !ok {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                let (case, expected, actual) = describe();
                self.failures.push(Failure {
                    case,
                    expected,
                    actual,
                });
            } else {
                self.suppressed_failures += 1;
            }
        }
    }
}
