use std::time::{Duration, Instant};

use thiserror::Error;

/// Cooperative deadline, polled by long-running searches at natural
/// boundaries (one bucket, one subset).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn after(budget: Duration) -> Self {
        Deadline(Some(Instant::now() + budget))
    }

    pub fn from_millis(ms: Option<u64>) -> Self {
        ms.map_or_else(Self::none, |ms| Self::after(Duration::from_millis(ms)))
    }

    #[inline]
    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }

    pub(crate) fn check(&self) -> Result<(), Timeout> {
        if self.expired() {
            Err(Timeout)
        } else {
            Ok(())
        }
    }
}

/// The deadline fired before the search finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("deadline exceeded")]
pub struct Timeout;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn none_never_expires() {
        assert!(!Deadline::none().expired());
        assert!(!Deadline::from_millis(None).expired());
    }

    #[test]
    fn past_deadline_is_expired() {
        let d = Deadline::after(Duration::ZERO);
        assert!(d.expired());
        assert_eq!(d.check(), Err(Timeout));
        assert!(!Deadline::after(Duration::from_secs(3600)).expired());
    }
}
