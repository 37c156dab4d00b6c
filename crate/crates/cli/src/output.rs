use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cstar_core::{Error, LawReport, Result};
use serde_json::Value;

pub fn summary_table(reports: &[LawReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.law_id.len())
        .max()
        .unwrap_or(0)
        .max("law".len());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>8}  {:>7}  {:>14}  verdict",
        "law", "cases", "failed", "worst residual"
    );
    for r in reports {
        let verdict = match r.failing_sublaw() {
            None => "pass".to_string(),
            Some(sub) => format!("FAIL ({sub})"),
        };
        let _ = writeln!(
            out,
            "{:<width$}  {:>8}  {:>7}  {:>14.3e}  {verdict}",
            r.law_id, r.cases_run, r.cases_failed, r.worst_residual
        );
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = write!(
        out,
        "{} of {} suites passed",
        reports.len() - failed,
        reports.len()
    );
    out
}

pub fn print_reports(reports: &[LawReport]) {
    for r in reports {
        println!("{}", r.to_json_line());
    }
    println!();
    println!("{}", summary_table(reports));
}

fn write_file(path: &Path, text: String) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_report_lines(path: Option<&Path>, reports: &[LawReport]) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    let text: String = reports.iter().map(|r| r.to_json_line() + "\n").collect();
    write_file(path, text)
}

pub fn write_value(path: Option<&Path>, value: &Value) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    write_file(path, serde_json::to_string_pretty(value)? + "\n")
}
