//! Machine-readable experiment reports: a JSON form mirroring the full
//! report, and a CSV table with one row per fitted observable check and per
//! inequality check.
//!
//! The CSV carries no timestamp, so identical runs produce byte-identical
//! files; the JSON provenance block holds the only nondeterministic fields.

use anyhow::Result;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Echo of the configuration that produced this report.
    pub config: ExperimentConfig,
    pub infrared_horizon: f64,
    /// Requested end time after clamping to the infrared horizon.
    pub effective_t_end: f64,
    pub schedule: Vec<f64>,
    pub observables: Vec<ObservableReport>,
    pub pitt: Vec<PittReport>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservableReport {
    pub label: String,
    pub i: u8,
    pub a: f64,
    pub norm: String,
    /// Measured norm at each schedule time.
    pub values: Vec<f64>,
    pub fit: Option<FitReport>,
    /// Set when the fit was impossible (zero data or too few usable samples).
    pub degenerate: bool,
    pub checks: Vec<RateCheckReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub window: (f64, f64),
    pub samples_used: usize,
    pub slope: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateCheckReport {
    pub family: String,
    pub term: String,
    pub m: f64,
    pub a: f64,
    pub j: u8,
    pub kind: String,
    pub exponent: f64,
    pub dimension_bound: f64,
    pub data_space_u0: String,
    pub data_space_u1: String,
    /// Violated validity conditions of the quoted estimate, if any.
    pub validity: Vec<String>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Degenerate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Degenerate => write!(f, "degenerate"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PittReport {
    pub r1: f64,
    pub r2: f64,
    pub s1: f64,
    pub s2: f64,
    pub n: usize,
    pub admissible: bool,
    pub violations: Vec<String>,
    /// (dilation λ, measured ratio) over the generator family.
    pub ratios: Vec<(f64, f64)>,
    /// Ratio at λ = 1 on the refined (2N) grid.
    pub refined_ratio: Option<f64>,
    /// Ratios stable under dilation (±2%) and refinement (±5%).
    pub stable: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub timestamp_unix_s: u64,
    pub wall_time_ms: u64,
}

impl ExperimentReport {
    /// True when every check in the report passed (degenerate counts as a
    /// failure for exit-code purposes only when a check was requested).
    pub fn all_checks_pass(&self) -> bool {
        self.observables
            .iter()
            .flat_map(|o| o.checks.iter())
            .all(|c| c.verdict == Verdict::Pass)
            && self.pitt.iter().all(|p| p.stable.unwrap_or(true) && p.admissible)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// CSV with header (observable, t_window, slope, stderr, theory, verdict).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("observable,t_window,slope,stderr,theory,verdict\n");
        for obs in &self.observables {
            let window = obs
                .fit
                .as_ref()
                .map(|f| format!("{:.6}..{:.6}", f.window.0, f.window.1))
                .unwrap_or_else(|| "-".to_string());
            let slope = obs
                .fit
                .as_ref()
                .map(|f| format!("{:.10e}", f.slope))
                .unwrap_or_else(|| "-".to_string());
            let stderr = obs
                .fit
                .as_ref()
                .map(|f| format!("{:.10e}", f.stderr))
                .unwrap_or_else(|| "-".to_string());
            if obs.checks.is_empty() {
                let verdict = if obs.degenerate { "degenerate" } else { "fitted" };
                out.push_str(&format!(
                    "{},{window},{slope},{stderr},-,{verdict}\n",
                    csv_field(&obs.label)
                ));
            }
            for check in &obs.checks {
                out.push_str(&format!(
                    "{},{window},{slope},{stderr},{:.10e},{}\n",
                    csv_field(&obs.label),
                    check.exponent,
                    check.verdict
                ));
            }
        }
        for p in &self.pitt {
            let label = format!("pitt(r1={} r2={} s1={} s2={} n={})", p.r1, p.r2, p.s1, p.s2, p.n);
            let (ratio, spread) = ratio_summary(&p.ratios);
            let verdict = if !p.admissible {
                "inadmissible".to_string()
            } else {
                match p.stable {
                    Some(true) => "stable".to_string(),
                    Some(false) => "unstable".to_string(),
                    None => "-".to_string(),
                }
            };
            out.push_str(&format!("{},-,{ratio},{spread},-,{verdict}\n", csv_field(&label)));
        }
        out
    }
}

fn ratio_summary(ratios: &[(f64, f64)]) -> (String, String) {
    if ratios.is_empty() {
        return ("-".to_string(), "-".to_string());
    }
    let base = ratios
        .iter()
        .find(|(l, _)| (*l - 1.0).abs() < 1e-12)
        .map(|(_, r)| *r)
        .unwrap_or(ratios[0].1);
    let spread = ratios
        .iter()
        .map(|(_, r)| (r / base - 1.0).abs())
        .fold(0.0f64, f64::max);
    (format!("{base:.10e}"), format!("{spread:.10e}"))
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_display() {
        assert_eq!(Verdict::Pass.to_string(), "pass");
        assert_eq!(Verdict::Fail.to_string(), "fail");
        assert_eq!(Verdict::Degenerate.to_string(), "degenerate");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
