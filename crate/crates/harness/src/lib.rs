//! Verification driver: runs named suites of checks against one surface and
//! collects the results into a [`Report`].

mod checks;
mod config;
mod report;

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;

pub use config::{HarnessError, Suite, SuiteConfig, Surface};
pub use report::{CheckRecord, Report, Status};

/// Runs every selected check concurrently. Records are sorted by id, so the
/// report does not depend on scheduling. Writes the report to `cfg.out` when
/// set.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let mut seen = HashSet::new();
    let checks: Vec<_> = checks::build_checks(cfg).into_iter().filter(|c| seen.insert(c.id.clone())).collect();
    let mut records: Vec<CheckRecord> = checks
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.run)();
            CheckRecord {
                id: c.id.clone(),
                anchor: c.anchor,
                status: outcome.status,
                witness: outcome.witness,
                detail: outcome.detail,
                elapsed: start.elapsed(),
            }
        })
        .collect();
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let p = &cfg.policy;
    let levels: Vec<String> = p.rou_levels.iter().map(usize::to_string).collect();
    let params: Vec<String> = cfg.params.iter().map(|x| format!("({x})")).collect();
    let suites: Vec<&str> = cfg.suites.iter().map(|s| s.name()).collect();
    let report = Report {
        header: vec![
            ("surface".into(), cfg.surface.name.clone()),
            ("suites".into(), if suites.is_empty() { "-".into() } else { suites.join(",") }),
            ("params".into(), params.join(",")),
            ("seed".into(), p.seed.to_string()),
            ("q1_points".into(), p.q1_points.to_string()),
            ("N".into(), levels.join(",")),
            ("tol".into(), format!("{:e}", p.tolerance)),
        ],
        records,
    };
    if let Some(path) = &cfg.out {
        std::fs::write(path, report.to_text()).map_err(|source| HarnessError::Io { path: path.clone(), source })?;
    }
    Ok(report)
}
