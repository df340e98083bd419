//! Provider configuration.

use serde::{Deserialize, Serialize};

use crate::error::ProviderError;

fn default_temperature() -> f64 {
    1.0
}
fn default_max_tokens() -> u32 {
    4096
}
fn default_timeout_s() -> f64 {
    60.0
}
fn default_retries() -> u32 {
    3
}
fn default_backoff_ms() -> u64 {
    250
}
fn default_api_key_env() -> String {
    "ECGLAB_API_KEY".to_string()
}

/// Connection and sampling settings for an HTTP completion/embedding service.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub endpoint: String,
    pub model: String,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default = "default_timeout_s")]
    pub timeout_s: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default = "default_backoff_ms")]
    pub backoff_initial_ms: u64,
    /// Name of the environment variable holding the API key.
    #[serde(default = "default_api_key_env")]
    pub api_key_env: String,
}

impl ProviderConfig {
    pub fn validate(&self) -> Result<(), ProviderError> {
        if !(self.timeout_s > 0.0) {
            return Err(ProviderError::BadConfig(format!(
                "timeout_s must be positive, got {}",
                self.timeout_s
            )));
        }
        if self.endpoint.trim().is_empty() {
            return Err(ProviderError::BadConfig("endpoint is empty".into()));
        }
        Ok(())
    }
}

/// Retry policy shared by all providers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub backoff_initial_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: default_retries(),
            backoff_initial_ms: default_backoff_ms(),
        }
    }
}
