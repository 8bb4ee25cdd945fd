//! Per-job reports and the run manifest.

use fraclt_core::lieb_thirring::{Theorem, VerificationReport, Verdict};
use serde::{Deserialize, Serialize};

use crate::config::ResolvedJob;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JobStatus {
    Passed,
    Violated,
    Failed,
}

/// Quadrature value of the job's integral next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralCrossCheck {
    pub closed_form: f64,
    pub quadrature: f64,
    pub relative_error: f64,
}

/// Everything computed for one job. Contains no timings, so identical
/// inputs give byte-identical files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobReport {
    pub version: u32,
    pub job: ResolvedJob,
    pub status: JobStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integral_check: Option<IntegralCrossCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
}

impl JobReport {
    pub fn new(job: ResolvedJob, outcome: Result<(VerificationReport, IntegralCrossCheck), String>) -> Self {
        match outcome {
            Ok((report, check)) => JobReport {
                version: REPORT_VERSION,
                status: status_of(&report),
                job,
                error: None,
                integral_check: Some(check),
                report: Some(report),
            },
            Err(e) => JobReport {
                version: REPORT_VERSION,
                job,
                status: JobStatus::Failed,
                error: Some(e),
                integral_check: None,
                report: None,
            },
        }
    }

    pub fn verdict(&self) -> Option<Verdict> {
        self.report.as_ref().map(|r| r.verdict)
    }
}

/// Explicit bounds pass when they hold; property-only runs pass when the
/// recorded ratio is finite.
pub fn status_of(r: &VerificationReport) -> JobStatus {
    let ok = match r.verdict {
        Verdict::Holds => true,
        Verdict::Violated => false,
        Verdict::PropertyOnly => r.ratio.is_finite() && r.ratio >= 0.0,
    };
    if ok {
        JobStatus::Passed
    } else {
        JobStatus::Violated
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub name: String,
    pub theorem: Theorem,
    pub status: JobStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    pub wall_time_s: f64,
    pub report_path: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub toolkit_version: String,
    pub config_hash: String,
    pub workers: usize,
    pub total_wall_time_s: f64,
    pub exit_code: u8,
    pub jobs: Vec<ManifestEntry>,
}

/// 0 when every job passed, 1 otherwise.
pub fn exit_code(reports: &[JobReport]) -> u8 {
    u8::from(reports.iter().any(|r| r.status != JobStatus::Passed))
}
