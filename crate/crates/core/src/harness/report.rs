use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::check::{cmd_check_all, VerificationReport};
use super::search::{branch_ids, cmd_search_nonexistence, Grid, SearchReport};
use crate::error::{Error, Result};

pub const SCHEMA: &str = "liecyclic-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct SkippedRestriction {
    pub family: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionSummary {
    pub checked: usize,
    pub cyclic: usize,
    pub skipped: Vec<SkippedRestriction>,
}

/// Wall-clock data; the only part of a report that varies between runs.
#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub generated_at_unix_ms: u128,
    pub elapsed_ms: u128,
    pub family_ms: BTreeMap<String, u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub seed: u64,
    pub families: Vec<VerificationReport>,
    pub searches: Vec<SearchReport>,
    pub restriction_summary: RestrictionSummary,
    pub consistency_ok: bool,
    pub failing: Vec<String>,
    pub pass: bool,
    pub timing: Timing,
}

impl Report {
    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => serde_json::to_string_pretty(self)
                .map(|s| s + "\n")
                .map_err(|e| Error::Io(e.to_string())),
            ReportFormat::Text => Ok(self.text()),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} (seed {})", self.schema, self.seed);
        let _ = writeln!(s, "\nfamilies");
        for r in &self.families {
            let defects: Vec<&str> = r.cyclic_defects.iter().map(|d| d.defect.as_str()).collect();
            let _ = writeln!(
                s,
                "  {} {:<24} verdict={:<15} jacobi={} defects=[{}]",
                if r.pass { "PASS" } else { "FAIL" },
                r.label(),
                serde_json::to_value(r.verdict)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                if r.jacobi_ok {
                    "ok"
                } else if r.jacobi_expected {
                    "FAILED"
                } else {
                    "n/a"
                },
                defects.join(", ")
            );
            let _ = writeln!(s, "       claim: {}", r.claimed_condition);
            if !r.group.names.is_empty() {
                let _ = writeln!(s, "       groups: {}", r.group.names.join(", "));
            }
            if let Some(flat) = r.curvature.flat {
                let _ = writeln!(
                    s,
                    "       flat={} locally_symmetric={} scalar={}",
                    flat,
                    r.curvature
                        .locally_symmetric
                        .map(|b| b.to_string())
                        .unwrap_or_else(|| "?".into()),
                    r.curvature.scalar.as_deref().unwrap_or("?")
                );
            }
            if let Some(x) = &r.restriction {
                let _ = writeln!(
                    s,
                    "       restriction to h: {}{}",
                    x.status,
                    x.reason.as_ref().map(|r| format!(" ({r})")).unwrap_or_default()
                );
            }
        }
        let _ = writeln!(s, "\nbounded nonexistence searches");
        for r in &self.searches {
            let _ = writeln!(
                s,
                "  {} {:<18} grid={} points={} solved={} witnesses={}",
                if r.pass { "PASS" } else { "FAIL" },
                r.branch,
                r.grid,
                r.points_tested,
                r.points_solved,
                r.witnesses.len()
            );
        }
        let rs = &self.restriction_summary;
        let _ = writeln!(
            s,
            "\nrestrictions: {} checked, {} cyclic, {} skipped",
            rs.checked,
            rs.cyclic,
            rs.skipped.len()
        );
        let _ = writeln!(s, "consistency: {}", if self.consistency_ok { "ok" } else { "FAILED" });
        let _ = writeln!(s, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        if !self.failing.is_empty() {
            let _ = writeln!(s, "failing: {}", self.failing.join(", "));
        }
        s
    }
}

/// Runs every family check and every search branch, writing the rendered
/// report to `out` when given.
pub fn cmd_report(format: ReportFormat, out: Option<&Path>, seed: u64) -> Result<(Report, String)> {
    let start = Instant::now();
    let families = cmd_check_all(seed)?;
    let searches = branch_ids()
        .into_iter()
        .map(|b| cmd_search_nonexistence(b, &Grid::default(), seed))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = RestrictionSummary {
        checked: 0,
        cyclic: 0,
        skipped: Vec::new(),
    };
    for r in &families {
        if let Some(x) = &r.restriction {
            match x.status {
                "skipped" => summary.skipped.push(SkippedRestriction {
                    family: r.label(),
                    reason: x.reason.clone().unwrap_or_default(),
                }),
                status => {
                    summary.checked += 1;
                    if status == "cyclic" {
                        summary.cyclic += 1;
                    }
                }
            }
        }
    }
    let consistency_ok = families.iter().all(|r| r.consistency.ok());
    let failing: Vec<String> = families
        .iter()
        .filter(|r| !r.pass)
        .map(VerificationReport::label)
        .chain(searches.iter().filter(|s| !s.pass).map(|s| s.branch.clone()))
        .collect();
    let timing = Timing {
        generated_at_unix_ms: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
        elapsed_ms: start.elapsed().as_millis(),
        family_ms: families.iter().map(|r| (r.label(), r.timing_ms)).collect(),
    };
    let report = Report {
        schema: SCHEMA,
        seed,
        pass: failing.is_empty() && consistency_ok,
        families,
        searches,
        restriction_summary: summary,
        consistency_ok,
        failing,
        timing,
    };
    let rendered = report.render(format)?;
    if let Some(path) = out {
        std::fs::write(path, &rendered)?;
    }
    Ok((report, rendered))
}
