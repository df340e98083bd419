//! Corpus pipeline errors.

use thiserror::Error;

use crate::schema::SchemaViolation;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("provider error: {0}")]
    Provider(#[from] ecglab_llm::ProviderError),

    #[error("prompt error: {0}")]
    Prompt(#[from] ecglab_protocol::ProtocolError),

    #[error("response failed schema validation: {violation}")]
    Schema {
        violation: SchemaViolation,
        /// The rejected response, retained for quarantine.
        raw_response: String,
    },

    #[error("malformed extraction: {reason}")]
    MalformedExtraction { reason: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
