//! Delimited-text loader for labeled time series.
//!
//! One sample per line: an integer class label followed by real values,
//! tab- or comma-separated. Series may have different lengths; `NaN`
//! tokens are treated as absent trailing values (the usual convention for
//! fixed-width exports of variable-length archives), so they are stripped
//! from the end and rejected anywhere else.

use std::path::Path;

use crate::datasets::{DatasetKind, LabeledDataset, SampleData};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Tab,
    Comma,
}

impl Delimiter {
    fn as_char(self) -> char {
        match self {
            Delimiter::Tab => '\t',
            Delimiter::Comma => ',',
        }
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::SeriesParse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Loads a series dataset. With `delimiter: None` the delimiter is detected
/// from the first data line (tab wins if present, else comma). The dataset
/// is named after the file stem. Line numbers in errors are 1-based.
pub fn load_series_dataset(
    path: impl AsRef<Path>,
    delimiter: Option<Delimiter>,
) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;

    let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    // Trailing blank lines are file-format noise; blank lines between
    // records are treated as corruption below.
    let last_data = match lines.iter().rposition(|l| !l.trim().is_empty()) {
        Some(i) => i,
        None => return Err(Error::EmptyDataset),
    };

    let delimiter = delimiter.unwrap_or(if lines[0].contains('\t') {
        Delimiter::Tab
    } else {
        Delimiter::Comma
    });

    let mut samples = Vec::with_capacity(last_data + 1);
    for (idx, line) in lines[..=last_data].iter().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            return Err(parse_error(path, line_no, "empty line inside data"));
        }
        let mut tokens = line.split(delimiter.as_char());

        let label_token = tokens.next().expect("split yields at least one token");
        let label_value: f64 = label_token
            .trim()
            .parse()
            .map_err(|_| parse_error(path, line_no, format!("invalid label {label_token:?}")))?;
        if label_value.fract() != 0.0 || label_value.abs() > i32::MAX as f64 {
            return Err(parse_error(
                path,
                line_no,
                format!("label {label_token:?} is not an integer class id"),
            ));
        }
        let label = label_value as i32;

        let mut values = Vec::new();
        for token in tokens {
            let t = token.trim();
            if t.eq_ignore_ascii_case("nan") {
                values.push(f64::NAN);
            } else {
                let v: f64 = t
                    .parse()
                    .map_err(|_| parse_error(path, line_no, format!("invalid value {token:?}")))?;
                values.push(v);
            }
        }
        while values.last().is_some_and(|v| v.is_nan()) {
            values.pop();
        }
        if let Some(pos) = values.iter().position(|v| v.is_nan()) {
            return Err(parse_error(
                path,
                line_no,
                format!("non-trailing NaN at value {}", pos + 1),
            ));
        }
        if values.is_empty() {
            return Err(parse_error(path, line_no, "no values after label"));
        }
        samples.push((SampleData::Series(values), label));
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string());
    Ok(LabeledDataset::new(name, DatasetKind::Series, samples))
}
