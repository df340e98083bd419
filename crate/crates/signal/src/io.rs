//! Loading and saving ECG records.
//!
//! Two on-disk layouts are supported, both paired with a JSON sidecar that
//! carries `{record_id, sampling_rate_hz}` (plus an optional
//! `amplitude_units` of `"mV"` or `"uV"`):
//!
//! - `csv`: a header row of the 12 canonical lead names followed by one row
//!   per sample.
//! - `wfdb-flat`: headerless whitespace-separated rows, 12 columns in
//!   canonical lead order.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::SignalError;
use crate::lead::{LeadName, CANONICAL_LEADS};
use crate::record::{EcgRecord, LeadSignal};

/// On-disk signal layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalFormat {
    Csv,
    WfdbFlat,
}

/// Sidecar metadata carried next to the sample file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordMetadata {
    pub record_id: String,
    pub sampling_rate_hz: f64,
    /// Units of the stored amplitudes; converted to millivolts on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude_units: Option<String>,
}

fn unit_scale(meta: &RecordMetadata) -> Result<f64, SignalError> {
    match meta.amplitude_units.as_deref() {
        None => Ok(1.0),
        Some(u) if u.eq_ignore_ascii_case("mv") => Ok(1.0),
        Some(u) if u.eq_ignore_ascii_case("uv") => Ok(1e-3),
        Some(other) => Err(SignalError::BadMetadata {
            field: "amplitude_units".into(),
            reason: format!("unsupported unit {other:?}, expected mV or uV"),
        }),
    }
}

/// Loads a 12-lead record from `path` with its JSON sidecar at `meta_path`.
///
/// Amplitudes are converted to millivolts per the sidecar units.
pub fn load_record(
    path: &Path,
    meta_path: &Path,
    format: SignalFormat,
) -> Result<EcgRecord, SignalError> {
    let meta: RecordMetadata =
        serde_json::from_str(&fs::read_to_string(meta_path)?).map_err(|e| {
            SignalError::BadMetadata {
                field: meta_path.display().to_string(),
                reason: e.to_string(),
            }
        })?;
    let scale = unit_scale(&meta)?;
    let columns = match format {
        SignalFormat::Csv => read_csv_columns(path)?,
        SignalFormat::WfdbFlat => read_flat_columns(path)?,
    };
    let mut leads = Vec::with_capacity(12);
    for lead in CANONICAL_LEADS {
        let samples = columns
            .get(&lead)
            .ok_or_else(|| SignalError::MissingLead {
                lead: lead.to_string(),
            })?
            .iter()
            .map(|v| v * scale)
            .collect();
        leads.push(LeadSignal::new(lead, samples)?);
    }
    EcgRecord::new(meta.record_id, leads, meta.sampling_rate_hz)
}

fn read_csv_columns(path: &Path) -> Result<BTreeMap<LeadName, Vec<f64>>, SignalError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let mut order = Vec::with_capacity(headers.len());
    for name in headers.iter() {
        order.push(name.parse::<LeadName>()?);
    }
    let mut columns: BTreeMap<LeadName, Vec<f64>> =
        order.iter().map(|&l| (l, Vec::new())).collect();
    if columns.len() != order.len() {
        return Err(SignalError::BadMetadata {
            field: "header".into(),
            reason: "duplicate lead column".into(),
        });
    }
    for (row_idx, row) in reader.records().enumerate() {
        let row = row?;
        if row.len() != order.len() {
            return Err(SignalError::BadMetadata {
                field: format!("row {row_idx}"),
                reason: format!("expected {} columns, got {}", order.len(), row.len()),
            });
        }
        for (lead, cell) in order.iter().zip(row.iter()) {
            let value: f64 = cell.parse().map_err(|_| SignalError::NonFiniteSample {
                lead: lead.to_string(),
                row: row_idx,
            })?;
            if !value.is_finite() {
                return Err(SignalError::NonFiniteSample {
                    lead: lead.to_string(),
                    row: row_idx,
                });
            }
            columns.get_mut(lead).unwrap().push(value);
        }
    }
    Ok(columns)
}

fn read_flat_columns(path: &Path) -> Result<BTreeMap<LeadName, Vec<f64>>, SignalError> {
    let text = fs::read_to_string(path)?;
    let mut columns: BTreeMap<LeadName, Vec<f64>> =
        CANONICAL_LEADS.iter().map(|&l| (l, Vec::new())).collect();
    for (row_idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != 12 {
            return Err(SignalError::BadMetadata {
                field: format!("row {row_idx}"),
                reason: format!("expected 12 columns, got {}", cells.len()),
            });
        }
        for (lead, cell) in CANONICAL_LEADS.iter().zip(cells) {
            let value: f64 = cell.parse().map_err(|_| SignalError::NonFiniteSample {
                lead: lead.to_string(),
                row: row_idx,
            })?;
            if !value.is_finite() {
                return Err(SignalError::NonFiniteSample {
                    lead: lead.to_string(),
                    row: row_idx,
                });
            }
            columns.get_mut(lead).unwrap().push(value);
        }
    }
    Ok(columns)
}

/// Writes a record as CSV plus its JSON sidecar.
///
/// Amplitudes are serialized with `{}` (shortest round-trip formatting), so a
/// write-then-read cycle reproduces the record bit-exactly.
pub fn save_record_csv(
    record: &EcgRecord,
    path: &Path,
    meta_path: &Path,
) -> Result<(), SignalError> {
    let mut out = String::new();
    let header: Vec<&str> = CANONICAL_LEADS.iter().map(|l| l.as_str()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..record.samples_per_lead() {
        let row: Vec<String> = record
            .leads
            .iter()
            .map(|l| format!("{}", l.samples[i]))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::File::create(path)?.write_all(out.as_bytes())?;
    let meta = RecordMetadata {
        record_id: record.record_id.clone(),
        sampling_rate_hz: record.sampling_rate_hz,
        amplitude_units: None,
    };
    fs::File::create(meta_path)?.write_all(serde_json::to_string_pretty(&meta)?.as_bytes())?;
    Ok(())
}
