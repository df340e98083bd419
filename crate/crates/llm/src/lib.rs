//! Pluggable completion and embedding providers.
//!
//! Completion and embedding services sit behind two small traits so the
//! pipeline never touches a network client directly. An HTTP implementation
//! speaks the common chat-completions JSON shape; a deterministic mock makes
//! every pipeline run replayable byte-for-byte offline. Retries with
//! exponential backoff wrap transient failures at this layer.

pub mod config;
pub mod error;
pub mod http;
pub mod mock;
pub mod retry;

pub use config::{ProviderConfig, RetryPolicy};
pub use error::ProviderError;
pub use http::{HttpCompletionProvider, HttpEmbeddingProvider};
pub use mock::{MockCompletionProvider, MockEmbeddingProvider};
pub use retry::with_retry;

/// Text-in / text-out completion service.
pub trait CompletionProvider: Send + Sync {
    fn name(&self) -> &str;
    fn complete(&self, prompt: &str) -> Result<String, ProviderError>;
}

/// Text-in / vector-out embedding service.
pub trait EmbeddingProvider: Send + Sync {
    fn name(&self) -> &str;
    fn dimension(&self) -> usize;
    fn embed(&self, text: &str) -> Result<Vec<f64>, ProviderError>;
}
