//! HTTP providers speaking the chat-completions JSON shape.
//!
//! Single-turn only: the prompt goes out as one user message, the first
//! choice's message content comes back verbatim. Credentials load from the
//! environment variable named in the config; requests retry per the
//! configured policy.

use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use crate::config::{ProviderConfig, RetryPolicy};
use crate::error::ProviderError;
use crate::retry::with_retry;
use crate::{CompletionProvider, EmbeddingProvider};

fn api_key(config: &ProviderConfig) -> Result<String, ProviderError> {
    std::env::var(&config.api_key_env).map_err(|_| ProviderError::MissingCredential {
        env: config.api_key_env.clone(),
    })
}

fn client(config: &ProviderConfig) -> Result<reqwest::blocking::Client, ProviderError> {
    reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs_f64(config.timeout_s))
        .build()
        .map_err(|e| ProviderError::Transport(e.to_string()))
}

fn post_json(
    config: &ProviderConfig,
    body: &serde_json::Value,
) -> Result<serde_json::Value, ProviderError> {
    let key = api_key(config)?;
    let response = client(config)?
        .post(&config.endpoint)
        .bearer_auth(key)
        .json(body)
        .send()
        .map_err(|e| {
            if e.is_timeout() {
                ProviderError::Timeout {
                    seconds: config.timeout_s,
                }
            } else {
                ProviderError::Transport(e.to_string())
            }
        })?;
    let status = response.status().as_u16();
    let text = response
        .text()
        .map_err(|e| ProviderError::Transport(e.to_string()))?;
    if !(200..300).contains(&status) {
        return Err(ProviderError::HttpStatus { status, body: text });
    }
    serde_json::from_str(&text).map_err(|e| ProviderError::MalformedResponse(e.to_string()))
}

/// Chat-completions client.
pub struct HttpCompletionProvider {
    pub config: ProviderConfig,
}

impl HttpCompletionProvider {
    pub fn new(config: ProviderConfig) -> Result<Self, ProviderError> {
        config.validate()?;
        Ok(HttpCompletionProvider { config })
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatMessage,
}

#[derive(Deserialize)]
struct ChatMessage {
    content: String,
}

impl CompletionProvider for HttpCompletionProvider {
    fn name(&self) -> &str {
        &self.config.model
    }

    fn complete(&self, prompt: &str) -> Result<String, ProviderError> {
        let policy = RetryPolicy {
            max_retries: self.config.max_retries,
            backoff_initial_ms: self.config.backoff_initial_ms,
        };
        let body = json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        });
        with_retry(&policy, || {
            let value = post_json(&self.config, &body)?;
            let parsed: ChatResponse = serde_json::from_value(value)
                .map_err(|e| ProviderError::MalformedResponse(e.to_string()))?;
            parsed
                .choices
                .into_iter()
                .next()
                .map(|c| c.message.content)
                .ok_or_else(|| ProviderError::MalformedResponse("no choices".into()))
        })
    }
}

/// Embeddings client.
pub struct HttpEmbeddingProvider {
    pub config: ProviderConfig,
    pub dimension: usize,
}

impl HttpEmbeddingProvider {
    pub fn new(config: ProviderConfig, dimension: usize) -> Result<Self, ProviderError> {
        config.validate()?;
        Ok(HttpEmbeddingProvider { config, dimension })
    }
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingRow>,
}

#[derive(Deserialize)]
struct EmbeddingRow {
    embedding: Vec<f64>,
}

impl EmbeddingProvider for HttpEmbeddingProvider {
    fn name(&self) -> &str {
        &self.config.model
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, ProviderError> {
        let policy = RetryPolicy {
            max_retries: self.config.max_retries,
            backoff_initial_ms: self.config.backoff_initial_ms,
        };
        let body = json!({ "model": self.config.model, "input": text });
        with_retry(&policy, || {
            let value = post_json(&self.config, &body)?;
            let parsed: EmbeddingResponse = serde_json::from_value(value)
                .map_err(|e| ProviderError::MalformedResponse(e.to_string()))?;
            parsed
                .data
                .into_iter()
                .next()
                .map(|r| r.embedding)
                .ok_or_else(|| ProviderError::MalformedResponse("no embedding rows".into()))
        })
    }
}
