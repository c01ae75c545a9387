//! Structured pass/fail records for CLI commands and reproduction scripts.

use serde::Serialize;

/// One verified property: what was claimed, what was observed.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// the property being checked, stated as a formula or short claim
    pub property: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: &str,
        property: &str,
        expected: impl ToString,
        observed: impl ToString,
    ) -> Self {
        let expected = expected.to_string();
        let observed = observed.to_string();
        let pass = expected == observed;
        Check {
            name: name.to_string(),
            property: property.to_string(),
            expected,
            observed,
            pass,
        }
    }

    pub fn bool(name: &str, property: &str, pass: bool) -> Self {
        Check {
            name: name.to_string(),
            property: property.to_string(),
            expected: "true".to_string(),
            observed: pass.to_string(),
            pass,
        }
    }
}

/// Report for one command run; `pass` holds iff every check passed.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub runtime_ms: u128,
}

impl VerificationReport {
    pub fn new(command: &str, checks: Vec<Check>, runtime_ms: u128) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        VerificationReport {
            command: command.to_string(),
            checks,
            pass,
            runtime_ms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_pass_iff_all_checks_pass() {
        let good = Check::new("a", "x == y", 1, 1);
        let bad = Check::new("b", "x == y", 1, 2);
        assert!(good.pass);
        assert!(!bad.pass);
        let r = VerificationReport::new("t", vec![good.clone()], 0);
        assert!(r.pass);
        let r = VerificationReport::new("t", vec![good, bad], 0);
        assert!(!r.pass);
    }
}
