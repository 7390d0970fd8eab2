use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One verified identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The identity being certified, as a formula.
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// The configuration a report was produced with.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub dim: u8,
    pub kappa: Option<String>,
    pub beta: Option<String>,
    pub suites: Vec<String>,
    pub seed: u64,
    pub level_cap: u8,
    pub unsafe_caps: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub config: ConfigEcho,
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(report: &VerificationReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("reports serialize");
            out.push(b'\n');
            out
        }
        Format::Text => text(report).into_bytes(),
    }
}

fn text(report: &VerificationReport) -> String {
    let mut out = String::new();
    let width = report.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in &report.checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status}  {:width$}  {}", c.id, c.anchor);
        if let Some(r) = &c.residual {
            let _ = writeln!(out, "      residual: {r}");
        }
    }
    let failed = report.failures().count();
    let _ = write!(
        out,
        "suite {}: {} checks, {} passed, {} failed",
        report.suite,
        report.checks.len(),
        report.checks.len() - failed,
        failed
    );
    if let Some(ms) = report.elapsed_ms {
        let _ = write!(out, " in {ms} ms");
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let r = VerificationReport::default();
        let json = emit_report(&r, Format::Json);
        let back: VerificationReport = serde_json::from_slice(&json).unwrap();
        assert_eq!(back, r);
        assert!(back.passed());
        assert!(String::from_utf8(emit_report(&r, Format::Text)).unwrap().contains("0 checks"));
    }

    #[test]
    fn round_trip_with_failure() {
        let r = VerificationReport {
            suite: "phase".into(),
            checks: vec![Check {
                id: "phase.maurer_cartan".into(),
                anchor: "Q(q*k) = 0".into(),
                status: Status::Fail,
                residual: Some("-dx1*dx2*dx3*dx4".into()),
            }],
            ..Default::default()
        };
        let json = emit_report(&r, Format::Json);
        let back: VerificationReport = serde_json::from_slice(&json).unwrap();
        assert_eq!(emit_report(&back, Format::Json), json);
        assert!(!back.passed());
    }
}
