//! Multi-lead ECG records in millivolts.

use serde::{Deserialize, Serialize};

use crate::error::SignalError;
use crate::lead::{LeadName, CANONICAL_LEADS};

/// One lead's sampled waveform, amplitudes in millivolts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadSignal {
    pub lead_name: LeadName,
    pub samples: Vec<f64>,
}

impl LeadSignal {
    /// Builds a lead signal, rejecting empty or non-finite input.
    pub fn new(lead_name: LeadName, samples: Vec<f64>) -> Result<Self, SignalError> {
        if samples.is_empty() {
            return Err(SignalError::EmptyLead {
                lead: lead_name.to_string(),
            });
        }
        if let Some(row) = samples.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFiniteSample {
                lead: lead_name.to_string(),
                row,
            });
        }
        Ok(LeadSignal { lead_name, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// A complete 12-lead recording with acquisition metadata.
///
/// Leads are stored in canonical order and all carry the same sample count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcgRecord {
    pub record_id: String,
    pub leads: Vec<LeadSignal>,
    pub sampling_rate_hz: f64,
    pub duration_s: f64,
}

impl EcgRecord {
    /// Assembles a record from per-lead signals (any order), enforcing the
    /// 12-lead/equal-length/positive-rate invariants.
    pub fn new(
        record_id: impl Into<String>,
        mut leads: Vec<LeadSignal>,
        sampling_rate_hz: f64,
    ) -> Result<Self, SignalError> {
        if !(sampling_rate_hz > 0.0) || !sampling_rate_hz.is_finite() {
            return Err(SignalError::BadMetadata {
                field: "sampling_rate_hz".into(),
                reason: format!("must be a positive finite number, got {sampling_rate_hz}"),
            });
        }
        for want in CANONICAL_LEADS {
            if !leads.iter().any(|l| l.lead_name == want) {
                return Err(SignalError::MissingLead {
                    lead: want.to_string(),
                });
            }
        }
        if leads.len() != 12 {
            return Err(SignalError::BadMetadata {
                field: "leads".into(),
                reason: format!("expected exactly 12 leads, got {}", leads.len()),
            });
        }
        leads.sort_by_key(|l| l.lead_name.canonical_index());
        let n = leads[0].len();
        for lead in &leads {
            if lead.len() != n {
                return Err(SignalError::SampleCountMismatch {
                    lead: lead.lead_name.to_string(),
                    expected: n,
                    found: lead.len(),
                });
            }
        }
        let duration_s = n as f64 / sampling_rate_hz;
        Ok(EcgRecord {
            record_id: record_id.into(),
            leads,
            sampling_rate_hz,
            duration_s,
        })
    }

    pub fn samples_per_lead(&self) -> usize {
        self.leads[0].len()
    }

    pub fn lead(&self, name: LeadName) -> &LeadSignal {
        &self.leads[name.canonical_index()]
    }
}
