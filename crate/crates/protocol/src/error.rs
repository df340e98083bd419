//! Protocol rule errors.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("non-positive rate: {value}")]
    NonPositiveRate { value: f64 },

    #[error("non-positive interval: {name} = {value}")]
    NonPositiveInterval { name: String, value: f64 },

    #[error("negative amplitude: {name} = {value}")]
    NegativeAmplitude { name: String, value: f64 },

    #[error("unknown lead name {lead:?}")]
    UnknownLead { lead: String },

    #[error("empty input: {name}")]
    EmptyInput { name: String },
}
