//! Report rendering: result records to CSV tables, plot data, and JSONL logs.
//!
//! All rates in reports are percentages (accuracy 95.29 means 95.29%), and
//! improvements are percentage points, matching how results are usually
//! quoted. Records themselves keep fractional rates; only rendering scales.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::experiments::records::ResultRecord;
use crate::experiments::stats::{bonferroni_threshold, welch_t_test};
use crate::experiments::compute_improvement;
use crate::{Error, Result};

/// One row of a rendered report: an arm's performance, plus its comparison
/// against the ablation baseline when one is present.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub arm: String,
    pub rule: Option<u8>,
    /// Mean test accuracy, percent.
    pub accuracy: f64,
    /// Mean test error rate, percent.
    pub error_rate: f64,
    /// Baseline error minus this arm's error, percentage points.
    pub improvement: Option<f64>,
    /// Improvement relative to the baseline error, percent.
    pub improvement_pct: Option<f64>,
    /// Welch two-sample p-value against the baseline repetitions.
    pub p_value: Option<f64>,
    /// Whether `p_value` clears the Bonferroni-corrected threshold.
    pub significant: Option<bool>,
}

/// Builds report rows from a set of records, comparing every rule arm
/// against the `none` baseline record when one exists. The correction
/// divides `alpha` by the number of rule arms. Rows are sorted by error
/// rate ascending (ties broken by rule number, baseline first).
pub fn build_report_rows(records: &[ResultRecord], alpha: f64) -> Result<Vec<ReportRow>> {
    if records.is_empty() {
        return Err(Error::EmptyReport);
    }
    let baseline = records.iter().find(|r| r.payload.rule.is_none());
    let comparisons = records.iter().filter(|r| r.payload.rule.is_some()).count();
    let threshold = bonferroni_threshold(alpha, comparisons);
    let mut rows = Vec::with_capacity(records.len());
    for record in records {
        let p = &record.payload;
        let mut row = ReportRow {
            arm: p.arm.clone(),
            rule: p.rule,
            accuracy: 100.0 * p.mean_accuracy,
            error_rate: 100.0 * p.mean_error_rate,
            improvement: None,
            improvement_pct: None,
            p_value: None,
            significant: None,
        };
        if let (Some(base), Some(_)) = (baseline, p.rule) {
            let (imp, imp_pct) =
                compute_improvement(p.mean_error_rate, base.payload.mean_error_rate)?;
            row.improvement = Some(100.0 * imp);
            row.improvement_pct = Some(100.0 * imp_pct);
            if p.repetition_accuracies.len() >= 2
                && base.payload.repetition_accuracies.len() >= 2
            {
                let test = welch_t_test(
                    &p.repetition_accuracies,
                    &base.payload.repetition_accuracies,
                )?;
                row.p_value = Some(test.p_value);
                row.significant = Some(test.p_value < threshold);
            }
        }
        rows.push(row);
    }
    rows.sort_by(|a, b| {
        a.error_rate
            .total_cmp(&b.error_rate)
            .then_with(|| rule_order(a.rule).cmp(&rule_order(b.rule)))
    });
    Ok(rows)
}

fn rule_order(rule: Option<u8>) -> i32 {
    rule.map_or(-1, i32::from)
}

const CSV_HEADER: &str = "arm,rule,accuracy,error_rate,improvement,improvement_pct,p_value,significant";

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.4}"))
}

fn fmt_p(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.6e}"))
}

/// Renders rows as CSV, preceded by a `# config_hash=` comment line so the
/// file is self-identifying. Rates are formatted with 4 decimals; p-values
/// in scientific notation. `parse_report_csv` inverts this rendering.
pub fn render_report_csv(rows: &[ReportRow], config_hash: &str) -> String {
    let mut out = format!("# config_hash={config_hash}\n{CSV_HEADER}\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{:.4},{:.4},{},{},{},{}\n",
            row.arm,
            row.rule.map_or_else(String::new, |r| r.to_string()),
            row.accuracy,
            row.error_rate,
            fmt_opt(row.improvement),
            fmt_opt(row.improvement_pct),
            fmt_p(row.p_value),
            row.significant.map_or_else(String::new, |s| s.to_string()),
        ));
    }
    out
}

fn parse_opt<T: std::str::FromStr>(field: &str, line: usize) -> Result<Option<T>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| Error::ReportParse {
            line,
            message: format!("unparseable field {field:?}"),
        })
}

fn parse_req<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    parse_opt(field, line)?.ok_or_else(|| Error::ReportParse {
        line,
        message: "missing required field".into(),
    })
}

/// Parses a report produced by `render_report_csv`. Comment lines (leading
/// `#`) are skipped. Round-trips: re-rendering the parsed rows with the
/// parsed hash reproduces the input byte for byte.
pub fn parse_report_csv(text: &str) -> Result<(Vec<ReportRow>, Option<String>)> {
    let mut hash = None;
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(comment) = raw.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(h) = comment.strip_prefix("config_hash=") {
                hash = Some(h.to_string());
            }
            continue;
        }
        if raw.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if raw != CSV_HEADER {
                return Err(Error::ReportParse {
                    line: line_no,
                    message: format!("expected header {CSV_HEADER:?}"),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::ReportParse {
                line: line_no,
                message: format!("expected 8 fields, found {}", fields.len()),
            });
        }
        rows.push(ReportRow {
            arm: fields[0].to_string(),
            rule: parse_opt(fields[1], line_no)?,
            accuracy: parse_req(fields[2], line_no)?,
            error_rate: parse_req(fields[3], line_no)?,
            improvement: parse_opt(fields[4], line_no)?,
            improvement_pct: parse_opt(fields[5], line_no)?,
            p_value: parse_opt(fields[6], line_no)?,
            significant: parse_opt(fields[7], line_no)?,
        });
    }
    if !saw_header {
        return Err(Error::ReportParse {
            line: 1,
            message: "no header line found".into(),
        });
    }
    Ok((rows, hash))
}

/// Renders plot-ready data: one `label<TAB>error_rate` line per rule arm,
/// sorted by error rate ascending, with the baseline error as a comment so
/// it can be drawn as a reference line.
pub fn render_plot_data(rows: &[ReportRow], config_hash: &str) -> String {
    let mut out = format!("# config_hash={config_hash}\n");
    if let Some(base) = rows.iter().find(|r| r.rule.is_none()) {
        out.push_str(&format!("# baseline_error_rate={:.4}\n", base.error_rate));
    }
    let mut arms: Vec<&ReportRow> = rows.iter().filter(|r| r.rule.is_some()).collect();
    arms.sort_by(|a, b| {
        a.error_rate
            .total_cmp(&b.error_rate)
            .then_with(|| rule_order(a.rule).cmp(&rule_order(b.rule)))
    });
    for row in arms {
        out.push_str(&format!("{}\t{:.4}\n", row.arm, row.error_rate));
    }
    out
}

/// Appends nothing; writes the full record set as JSON Lines.
pub fn write_records_jsonl(records: &[ResultRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).map_err(|e| Error::Serialize(e.to_string()))?;
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Reads a JSON Lines record file written by `write_records_jsonl`.
pub fn read_records_jsonl(path: impl AsRef<Path>) -> Result<Vec<ResultRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|_| Error::ReportParse {
            line: idx + 1,
            message: "unparseable record line".into(),
        })?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::EmptyReport);
    }
    Ok(records)
}
