//! Error types for ECG ingestion and feature extraction.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("missing lead {lead}")]
    MissingLead { lead: String },

    #[error("non-finite sample in lead {lead} at row {row}")]
    NonFiniteSample { lead: String, row: usize },

    #[error("bad metadata: {field}: {reason}")]
    BadMetadata { field: String, reason: String },

    #[error("unknown lead name {lead:?}")]
    UnknownLead { lead: String },

    #[error("signal too short: {seconds:.3} s, need at least {required:.1} s")]
    SignalTooShort { seconds: f64, required: f64 },

    #[error("unsupported sampling rate {fs} Hz, need at least 100 Hz")]
    UnsupportedSamplingRate { fs: f64 },

    #[error("no beats found (flat or pure-noise input)")]
    NoBeatsFound,

    #[error("non-positive interval: {name} = {value}")]
    NonPositiveInterval { name: String, value: f64 },

    #[error("lead {lead}: expected {expected} samples, found {found}")]
    SampleCountMismatch {
        lead: String,
        expected: usize,
        found: usize,
    },

    #[error("empty lead {lead}")]
    EmptyLead { lead: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
