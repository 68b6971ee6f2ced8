//! Byte-stable JSON and CSV rendering of crossover reports. Floats are
//! written with 17 significant digits so they parse back bit-for-bit.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{CrossoverFit, CrossoverReport};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::invalid(format!("unknown format {other:?}; expected json or csv"))),
        }
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn text(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn fit_json(fit: &CrossoverFit, out: &mut String) {
    let ratios: Vec<String> = fit.ratios.iter().map(|&r| num(r)).collect();
    let _ = write!(
        out,
        "{{\n    \"ratios\": [{}],\n    \"mean_ratio\": {},\n    \"log_slope\": {},\n    \"r_squared\": {}\n  }}",
        ratios.join(", "),
        num(fit.mean_ratio),
        num(fit.log_slope),
        num(fit.r_squared)
    );
}

pub fn render_report(report: &CrossoverReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Json => {
            let notes: Vec<String> = report.notes.iter().map(|n| text(n)).collect();
            let _ = write!(
                out,
                "{{\n  \"d\": {},\n  \"k\": {},\n  \"epsilon\": {},\n  \"resource\": {},\n  \"family\": {},\n  \"notes\": [{}],\n  \"rows\": [",
                report.d,
                report.k,
                num(report.epsilon),
                text(report.resource.as_str()),
                text(&report.family),
                notes.join(", ")
            );
            for (i, r) in report.rows.iter().enumerate() {
                let _ = write!(
                    out,
                    "{}\n    {{\"L\": {}, \"m\": {}, \"n\": {}, \"grassmann_lower_log\": {}, \"minimal\": {}, \"bound_log\": {}}}",
                    if i == 0 { "" } else { "," },
                    r.sites,
                    r.m,
                    r.n,
                    num(r.grassmann_lower_log),
                    num(r.minimal),
                    num(r.bound_log)
                );
            }
            out.push_str("\n  ],\n  \"fit\": ");
            match &report.fit {
                Some(fit) => fit_json(fit, &mut out),
                None => out.push_str("null"),
            }
            out.push_str("\n}\n");
        }
        ReportFormat::Csv => {
            out.push_str("L,m,n,grassmann_lower_log,minimal,bound_log\n");
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.sites,
                    r.m,
                    r.n,
                    num(r.grassmann_lower_log),
                    num(r.minimal),
                    num(r.bound_log)
                );
            }
        }
    }
    out
}

pub fn emit_report(report: &CrossoverReport, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_report(report, format))?;
    Ok(())
}

pub fn parse_report_json(s: &str) -> Result<CrossoverReport> {
    Ok(serde_json::from_str(s)?)
}
