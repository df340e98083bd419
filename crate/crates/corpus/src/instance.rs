//! Corpus entries: one protocol-guided instruction instance per record.

use serde::{Deserialize, Serialize};

use ecglab_protocol::ProtocolPrompt;

use crate::schema::{serialize_response, ParsedResponse};

/// Where an instance came from, enough to replay it with the mock provider.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of the guider template used.
    pub template_checksum: String,
    pub provider: String,
    /// RFC 3339 timestamp. Deterministic runs (mock provider) pin this to
    /// the epoch so replays are byte-identical.
    pub timestamp: String,
}

/// A validated prompt/response pair with its six-step reasoning trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstructionInstance {
    pub id: String,
    pub source_report: String,
    pub prompt: ProtocolPrompt,
    pub think_steps: [String; 6],
    pub summary: String,
    /// Joined with "; " these reproduce the canonical answer payload.
    pub answer_labels: Vec<String>,
    pub raw_response: String,
    pub provenance: Provenance,
}

impl InstructionInstance {
    pub fn from_parsed(
        id: impl Into<String>,
        source_report: impl Into<String>,
        prompt: ProtocolPrompt,
        parsed: &ParsedResponse,
        raw_response: impl Into<String>,
        provenance: Provenance,
    ) -> Self {
        InstructionInstance {
            id: id.into(),
            source_report: source_report.into(),
            prompt,
            think_steps: parsed.think_steps.clone(),
            summary: parsed.summary.clone(),
            answer_labels: parsed.answer_labels.clone(),
            raw_response: raw_response.into(),
            provenance,
        }
    }

    /// The canonical `<answer>` payload.
    pub fn answer_payload(&self) -> String {
        self.answer_labels.join("; ")
    }

    /// The canonical full response (think block, summary, answer).
    pub fn canonical_response(&self) -> String {
        serialize_response(&ParsedResponse {
            think_steps: self.think_steps.clone(),
            summary: self.summary.clone(),
            answer_payload: self.answer_payload(),
            answer_labels: self.answer_labels.clone(),
        })
    }
}
