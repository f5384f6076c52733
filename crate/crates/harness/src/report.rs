//! Line-oriented report format.
//!
//! ```text
//! # teich-report v1
//! # surface=torus-1 seed=0 q1_points=8 N=3,5 tol=1e-9
//! # id status anchor witness detail time_ms
//! compat/a=q^-2,b=q^3/base/rotate(1) PASS compat-rotation - 3 generators 12
//! # summary checks=1 passed=1 failed=0
//! ```
//!
//! Fields are separated by tabs (shown as spaces above) in the order of the
//! third header line. Records are sorted by id. Only `time_ms` varies between
//! runs with the same configuration.

use std::fmt;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub id: String,
    /// The statement being checked, shared by every instance of it.
    pub anchor: &'static str,
    pub status: Status,
    /// Reproduction data for a failure: context, seed and residual.
    pub witness: Option<String>,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct Report {
    /// `key=value` pairs describing the run.
    pub header: Vec<(String, String)>,
    pub records: Vec<CheckRecord>,
}

fn one_line(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

impl Report {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# teich-report v1\n#");
        for (k, v) in &self.header {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push_str("\n# id\tstatus\tanchor\twitness\tdetail\ttime_ms\n");
        for r in &self.records {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                one_line(&r.id),
                r.status,
                r.anchor,
                r.witness.as_deref().map_or("-".to_string(), one_line),
                one_line(&r.detail),
                r.elapsed.as_millis()
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "# summary checks={} passed={} failed={failed}\n",
            self.records.len(),
            self.records.len() - failed
        ));
        out
    }
}
