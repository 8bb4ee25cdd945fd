//! Executes resolved jobs on a bounded pool and persists their reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use fraclt_core::lieb_thirring::verify;
use fraclt_core::numerics::{IntegralSpec, QuadConfig};
use rayon::prelude::*;

use crate::config::{ResolvedJob, RunConfig};
use crate::error::{CliError, Result};
use crate::report::{exit_code, IntegralCrossCheck, JobReport, ManifestEntry, RunManifest};

pub const OUTPUT_DIR_ENV: &str = "FRACLT_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "fraclt-out";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Flag value, then the configuration, then the environment, then the default.
pub fn output_dir(flag: Option<&Path>, cfg: &RunConfig) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

/// Runs one job to completion; numerical failures become a failed report.
pub fn run_job(job: &ResolvedJob, quad_tol: f64) -> JobReport {
    let outcome = (|| -> fraclt_core::Result<_> {
        let v = job.potential.sample(&job.grid)?;
        let report = verify(job.theorem, &job.grid, &job.params, &v, &job.options)?;
        let (a, b) = report.constants.integral_exponents;
        let closed_form = report.constants.integral;
        let quadrature = IntegralSpec::Rational { a, b }.quadrature(&QuadConfig::relative(quad_tol))?.value;
        let check = IntegralCrossCheck {
            closed_form,
            quadrature,
            relative_error: (quadrature - closed_form).abs() / closed_form,
        };
        Ok((report, check))
    })();
    JobReport::new(job.clone(), outcome.map_err(|e| e.to_string()))
}

#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub reports: Vec<JobReport>,
    pub dir: PathBuf,
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Validates, runs every job with at most `workers` in flight, then writes
/// `reports/<index>-<name>.json` and `manifest.json` under `dir`.
pub fn run_config(cfg: &RunConfig, dir: &Path, workers: Option<usize>) -> Result<RunOutcome> {
    let jobs = cfg.resolve()?;
    let workers = workers.unwrap_or(cfg.workers).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))?;
    let start = Instant::now();
    let timed: Vec<(JobReport, f64)> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let t = Instant::now();
                let r = run_job(job, cfg.quad_tol);
                (r, t.elapsed().as_secs_f64())
            })
            .collect()
    });
    let reports_dir = dir.join("reports");
    std::fs::create_dir_all(&reports_dir).map_err(|e| CliError::io(&reports_dir, e))?;
    let mut entries = Vec::with_capacity(timed.len());
    for (r, secs) in &timed {
        let rel = format!("reports/{:03}-{}.json", r.job.index, r.job.name);
        write_json(&dir.join(&rel), r)?;
        entries.push(ManifestEntry {
            index: r.job.index,
            name: r.job.name.clone(),
            theorem: r.job.theorem,
            status: r.status,
            verdict: r.verdict(),
            ratio: r.report.as_ref().map(|x| x.ratio),
            wall_time_s: *secs,
            report_path: rel,
        });
    }
    let reports: Vec<JobReport> = timed.into_iter().map(|(r, _)| r).collect();
    let manifest = RunManifest {
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: cfg.hash(),
        workers,
        total_wall_time_s: start.elapsed().as_secs_f64(),
        exit_code: exit_code(&reports),
        jobs: entries,
    };
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    Ok(RunOutcome {
        manifest,
        reports,
        dir: dir.to_path_buf(),
    })
}
