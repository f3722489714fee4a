use std::fmt;

use serde::{Deserialize, Serialize};

/// One named verification outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    /// A deviation check; NaN deviations fail.
    pub fn within(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: deviation < tolerance,
            deviation: Some(deviation),
            tolerance: Some(tolerance),
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            deviation: None,
            tolerance: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}", self.name)?;
        if let (Some(d), Some(t)) = (self.deviation, self.tolerance) {
            write!(f, ": {d:.3e} (tol {t:.1e})")?;
        }
        if let Some(detail) = &self.detail {
            write!(f, " -- {detail}")?;
        }
        Ok(())
    }
}

/// A titled list of checks. Passes iff every check passes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_fails() {
        assert!(!Check::within("x", f64::NAN, 1.0).passed);
        assert!(Check::within("x", 0.5, 1.0).passed);
        assert!(!Check::within("x", 1.0, 1.0).passed);
    }

    #[test]
    fn report_aggregates() {
        let mut r = Report::new("t");
        r.push(Check::flag("a", true));
        assert!(r.passed());
        r.push(Check::flag("b", false));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        assert!(r.get("a").unwrap().passed);
    }
}
