//! Exponential-backoff retry for transient provider failures.

use std::thread::sleep;
use std::time::Duration;

use crate::config::RetryPolicy;
use crate::error::ProviderError;

/// Runs `op` up to `1 + policy.max_retries` times, sleeping with exponential
/// backoff between transient failures. Non-transient errors return
/// immediately; exhausting the budget yields `ExhaustedRetries`.
pub fn with_retry<T>(
    policy: &RetryPolicy,
    mut op: impl FnMut() -> Result<T, ProviderError>,
) -> Result<T, ProviderError> {
    let attempts = policy.max_retries.saturating_add(1);
    let mut last: Option<ProviderError> = None;
    for attempt in 0..attempts {
        match op() {
            Ok(v) => return Ok(v),
            Err(e) if e.is_transient() => {
                log::warn!("provider attempt {} failed: {e}", attempt + 1);
                if attempt + 1 < attempts {
                    let backoff = policy.backoff_initial_ms.saturating_mul(1 << attempt.min(16));
                    sleep(Duration::from_millis(backoff));
                }
                last = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(ProviderError::ExhaustedRetries {
        attempts,
        last: last.map(|e| e.to_string()).unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast_policy() -> RetryPolicy {
        RetryPolicy {
            max_retries: 3,
            backoff_initial_ms: 0,
        }
    }

    #[test]
    fn succeeds_after_transient_failures() {
        let mut calls = 0;
        let result = with_retry(&fast_policy(), || {
            calls += 1;
            if calls <= 2 {
                Err(ProviderError::Transport("flaky".into()))
            } else {
                Ok(42)
            }
        });
        assert_eq!(result.unwrap(), 42);
        assert_eq!(calls, 3);
    }

    #[test]
    fn exhausts_retries() {
        let mut calls = 0;
        let result: Result<(), _> = with_retry(&fast_policy(), || {
            calls += 1;
            Err(ProviderError::Transport("down".into()))
        });
        assert!(matches!(
            result,
            Err(ProviderError::ExhaustedRetries { attempts: 4, .. })
        ));
        assert_eq!(calls, 4);
    }

    #[test]
    fn permanent_errors_do_not_retry() {
        let mut calls = 0;
        let result: Result<(), _> = with_retry(&fast_policy(), || {
            calls += 1;
            Err(ProviderError::HttpStatus {
                status: 401,
                body: "unauthorized".into(),
            })
        });
        assert!(matches!(result, Err(ProviderError::HttpStatus { .. })));
        assert_eq!(calls, 1);
    }
}
