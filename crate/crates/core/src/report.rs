//! Machine-readable verification reports binding each computed value to
//! its source anchor.
//!
//! A check passes exactly when its canonical expected and computed
//! strings are equal. Checks are sorted by id, so reports are
//! byte-identical across runs for the same seed and options. Wall-clock
//! timings are kept for the text rendering but never serialized: the
//! JSON output is the determinism surface.

use serde::Serialize;

#[derive(Clone, Debug)]
pub struct Check {
    pub check_id: String,
    pub paper_anchor: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    pub runtime_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
struct CheckJson<'a> {
    check_id: &'a str,
    paper_anchor: &'a str,
    expected: &'a str,
    computed: &'a str,
    pass: bool,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub seed: u64,
    pub toolchain: String,
    /// Coefficient samples used by randomized witnesses, recorded for
    /// replay (canonical rational strings).
    pub lambda_samples: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    checks: Vec<CheckJson<'a>>,
    seed: u64,
    toolchain: &'a str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    lambda_samples: &'a Vec<Vec<String>>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let body = ReportJson {
            checks: self
                .checks
                .iter()
                .map(|c| CheckJson {
                    check_id: &c.check_id,
                    paper_anchor: &c.paper_anchor,
                    expected: &c.expected,
                    computed: &c.computed,
                    pass: c.pass,
                })
                .collect(),
            seed: self.seed,
            toolchain: &self.toolchain,
            lambda_samples: &self.lambda_samples,
        };
        serde_json::to_string_pretty(&body).expect("report serialization")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{status}] {:<44} expected={} computed={} ({} ms)  [{}]\n",
                c.check_id, c.expected, c.computed, c.runtime_ms, c.paper_anchor
            ));
        }
        let (passed, total) = (
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
        );
        out.push_str(&format!("{passed}/{total} checks passed (seed {})\n", self.seed));
        out
    }
}

/// Accumulates checks; assembles an order-normalized report.
pub struct ReportBuilder {
    seed: u64,
    checks: Vec<Check>,
    lambda_samples: Vec<Vec<String>>,
}

impl ReportBuilder {
    pub fn new(seed: u64) -> Self {
        ReportBuilder {
            seed,
            checks: Vec::new(),
            lambda_samples: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        check_id: impl Into<String>,
        paper_anchor: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        runtime_ms: u128,
    ) {
        let expected = expected.into();
        let computed = computed.into();
        let pass = expected == computed;
        self.checks.push(Check {
            check_id: check_id.into(),
            paper_anchor: paper_anchor.into(),
            expected,
            computed,
            pass,
            runtime_ms,
        });
    }

    /// Runs the body, times it, and records the check.
    pub fn timed(
        &mut self,
        check_id: impl Into<String>,
        paper_anchor: impl Into<String>,
        expected: impl Into<String>,
        body: impl FnOnce() -> String,
    ) {
        let t0 = std::time::Instant::now();
        let computed = body();
        let ms = t0.elapsed().as_millis();
        self.push(check_id, paper_anchor, expected, computed, ms);
    }

    pub fn record_samples(&mut self, samples: impl IntoIterator<Item = Vec<String>>) {
        self.lambda_samples.extend(samples);
    }

    pub fn finish(mut self) -> VerificationReport {
        self.checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        let ids: Vec<&String> = self.checks.iter().map(|c| &c.check_id).collect();
        debug_assert!(
            ids.windows(2).all(|w| w[0] != w[1]),
            "check ids must be unique"
        );
        VerificationReport {
            checks: self.checks,
            seed: self.seed,
            toolchain: format!("prym-verify {}", env!("CARGO_PKG_VERSION")),
            lambda_samples: self.lambda_samples,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_exact_string_equality() {
        let mut b = ReportBuilder::new(0);
        b.push("a", "anchor", "24", "24", 1);
        b.push("b", "anchor", "-1/2", "-0.5", 0);
        let r = b.finish();
        assert!(r.checks[0].pass);
        assert!(!r.checks[1].pass);
        assert!(!r.all_pass());
    }

    #[test]
    fn json_is_deterministic_and_has_no_timing() {
        let build = || {
            let mut b = ReportBuilder::new(7);
            b.push("z.last", "x", "1", "1", 932);
            b.push("a.first", "y", "2", "2", 5);
            b.finish()
        };
        let r1 = build().to_json();
        let r2 = build().to_json();
        assert_eq!(r1, r2);
        assert!(!r1.contains("runtime"));
        // sorted by id
        assert!(r1.find("a.first").unwrap() < r1.find("z.last").unwrap());
    }
}
