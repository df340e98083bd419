//! Provider error taxonomy.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("transport error: {0}")]
    Transport(String),

    #[error("http status {status}: {body}")]
    HttpStatus { status: u16, body: String },

    #[error("request timed out after {seconds} s")]
    Timeout { seconds: f64 },

    #[error("retries exhausted after {attempts} attempts: {last}")]
    ExhaustedRetries { attempts: u32, last: String },

    #[error("missing credential: environment variable {env} not set")]
    MissingCredential { env: String },

    #[error("malformed provider response: {0}")]
    MalformedResponse(String),

    #[error("bad provider config: {0}")]
    BadConfig(String),
}

impl ProviderError {
    /// Transient errors are worth retrying; config and credential errors
    /// are not.
    pub fn is_transient(&self) -> bool {
        match self {
            ProviderError::Transport(_) | ProviderError::Timeout { .. } => true,
            ProviderError::HttpStatus { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}
