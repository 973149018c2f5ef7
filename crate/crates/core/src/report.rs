//! Rendering of reports to text, JSON, and CSV.
//!
//! Canonical outputs are deterministic: no timestamps, wall times, or thread
//! counts, so identical inputs produce byte-identical files.

use serde::Serialize;

use crate::bound::BoundResult;
use crate::cocycle::Configuration;
use crate::error::{Error, Result};
use crate::ordercomb::RankVector;
use crate::search::NormReport;
use crate::verify::{Status, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Validation(format!(
                "unknown format `{other}` (expected text, json, csv)"
            ))),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Validation(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn factors_line(cfg: &Configuration) -> String {
    cfg.factors()
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_norm(report: &NormReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut out = String::from("pattern,max\n");
            for pm in &report.per_pattern_maxima {
                out.push_str(&format!("\"{}\",{}\n", pm.pattern, pm.max));
            }
            Ok(out)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("norm report (format {})\n", report.format));
            out.push_str(&format!("n: {}\n", report.n));
            out.push_str(&format!("mode: {}\n", report.mode.as_str()));
            out.push_str(&format!(
                "norm: {} (~{:.9})\n",
                report.norm,
                report.norm.to_f64()
            ));
            out.push_str(&format!("complete: {}\n", report.complete));
            if let Some(sample) = &report.sample {
                out.push_str(&format!(
                    "samples: {} evaluated of {} requested (seed {})\n",
                    sample.evaluated, sample.requested, sample.seed
                ));
            }
            if !report.class_tables.is_empty() {
                out.push_str("class tables:\n");
                for t in &report.class_tables {
                    out.push_str(&format!(
                        "  {}: {} columns, fingerprint {}\n",
                        t.table, t.columns, t.fingerprint
                    ));
                }
            }
            out.push_str(&format!(
                "witnesses ({} reported, cap {}):\n",
                report.witnesses.len(),
                report.witness_cap
            ));
            for (i, w) in report.witnesses.iter().enumerate() {
                out.push_str(&format!("  {}: {}\n", i + 1, factors_line(w)));
            }
            out.push_str("per-pattern maxima:\n");
            for pm in &report.per_pattern_maxima {
                out.push_str(&format!("  {}: {}\n", pm.pattern, pm.max));
            }
            Ok(out)
        }
    }
}

/// Parses a JSON norm report back (round-trip support).
pub fn parse_norm_json(text: &str) -> Result<NormReport> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: 0,
        field: "norm report".into(),
        message: e.to_string(),
    })
}

pub fn render_verification(report: &VerificationReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut out = String::from("id,status,expected,computed\n");
            for item in &report.items {
                out.push_str(&format!(
                    "{},{},\"{}\",\"{}\"\n",
                    item.id,
                    status_str(item.status),
                    item.expected,
                    item.computed
                ));
            }
            Ok(out)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "verification report (suite {}, seed {}, samples {})\n",
                report.suite, report.seed, report.samples
            ));
            let width = report.items.iter().map(|i| i.id.len()).max().unwrap_or(0);
            for item in &report.items {
                out.push_str(&format!(
                    "{:<4} {:<width$}  expected {:<12} computed {}\n",
                    status_str(item.status),
                    item.id,
                    item.expected,
                    item.computed,
                ));
            }
            let fails = report.failures();
            let infos = report
                .items
                .iter()
                .filter(|i| i.status == Status::Info)
                .count();
            out.push_str(&format!(
                "result: {} ({} pass, {} fail, {} info)\n",
                if fails == 0 { "PASS" } else { "FAIL" },
                report.items.len() - fails - infos,
                fails,
                infos
            ));
            Ok(out)
        }
    }
}

fn status_str(status: Status) -> &'static str {
    match status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Info => "INFO",
    }
}

/// Result of evaluating one configuration.
#[derive(Clone, Debug, Serialize)]
pub struct EvalResult {
    pub n: usize,
    pub value: crate::rat::Rat,
    pub decimal: String,
    pub configuration: String,
}

pub fn render_eval(result: &EvalResult, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(result),
        OutputFormat::Csv => Ok(format!(
            "n,value,decimal\n{},{},{}\n",
            result.n, result.value, result.decimal
        )),
        OutputFormat::Text => Ok(format!(
            "value: {} (~{})\n{}",
            result.value, result.decimal, result.configuration
        )),
    }
}

pub fn render_bound(result: &BoundResult, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(result),
        OutputFormat::Csv => Ok(format!(
            "n,norm,volume,symbolic,decimal\n{},{},\"{}\",\"{}\",{}\n",
            result.n, result.norm, result.volume, result.symbolic, result.decimal
        )),
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str("simplicial-volume lower bound\n");
            out.push_str(&format!("n: {}\n", result.n));
            out.push_str(&format!("cocycle norm: {}\n", result.norm));
            out.push_str(&format!("volume: {}\n", result.volume));
            out.push_str(&format!("bound (symbolic): {}\n", result.symbolic));
            if let Some(exact) = &result.exact {
                out.push_str(&format!("bound (exact): {exact}\n"));
            }
            out.push_str(&format!(
                "bound ({} significant digits): {}\n",
                result.digits, result.decimal
            ));
            Ok(out)
        }
    }
}

pub fn render_classes(
    kind: &str,
    classes: &[RankVector],
    format: OutputFormat,
) -> Result<String> {
    match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct ClassDump<'a> {
                kind: &'a str,
                count: usize,
                classes: &'a [RankVector],
            }
            to_json(&ClassDump {
                kind,
                count: classes.len(),
                classes,
            })
        }
        OutputFormat::Csv => {
            let mut out = String::from("index,ranks\n");
            for (i, c) in classes.iter().enumerate() {
                let ranks = c
                    .ranks()
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push_str(&format!("{i},\"{ranks}\"\n"));
            }
            Ok(out)
        }
        OutputFormat::Text => {
            let mut out = format!("{kind} classes: {}\n", classes.len());
            for (i, c) in classes.iter().enumerate() {
                out.push_str(&format!("{i:6}  {c}\n"));
            }
            Ok(out)
        }
    }
}
