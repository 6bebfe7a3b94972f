//! Reporting helpers for the acceptance suite.
//!
//! Each criterion produces an [`Outcome`]: a verdict plus the measured values
//! behind it. [`run_criteria`] prints one `[PASS]`/`[FAIL]` line per criterion.

use std::fmt::Write as _;

/// Verdict and measurements for one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Default for Outcome {
    fn default() -> Self {
        Self::new()
    }
}

impl Outcome {
    pub fn new() -> Self {
        Outcome {
            pass: true,
            details: Vec::new(),
        }
    }

    /// Records a sub-check; any failing check fails the criterion.
    pub fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.pass &= ok;
        let tag = if ok { "ok  " } else { "FAIL" };
        self.details.push(format!("{tag} {}", detail.into()));
    }

    /// Records a measurement that does not affect the verdict.
    pub fn note(&mut self, detail: impl Into<String>) {
        self.details.push(format!("note {}", detail.into()));
    }

    pub fn passed(&self) -> bool {
        self.pass
    }

    pub fn details(&self) -> &[String] {
        &self.details
    }
}

/// Renders one criterion as a verdict line followed by indented details.
pub fn render(name: &str, outcome: &Outcome) -> String {
    let mut s = format!("[{}] {name}\n", if outcome.pass { "PASS" } else { "FAIL" });
    for d in &outcome.details {
        let _ = writeln!(s, "       {d}");
    }
    s
}

/// A named check that produces an [`Outcome`].
pub type Criterion = (&'static str, fn() -> Outcome);

/// Runs every criterion in order, prints the report and returns the number
/// of failed criteria.
pub fn run_criteria(criteria: &[Criterion]) -> usize {
    println!("\nacceptance criteria");
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = run();
        print!("{}", render(name, &outcome));
        failed += usize::from(!outcome.pass);
    }
    println!("\n{} of {} criteria passed", criteria.len() - failed, criteria.len());
    failed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_failed_check_fails_the_outcome() {
        let mut o = Outcome::new();
        o.check(true, "a");
        o.note("b");
        assert!(o.passed());
        o.check(false, "c");
        o.check(true, "d");
        assert!(!o.passed());
        assert_eq!(o.details().len(), 4);
    }

    #[test]
    fn render_layout() {
        let mut o = Outcome::new();
        o.check(false, "x = 1");
        o.note("y = 2");
        assert_eq!(render("C0 demo", &o), "[FAIL] C0 demo\n       FAIL x = 1\n       note y = 2\n");
    }
}
