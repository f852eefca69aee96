//! Exponential backoff with jitter.

use std::time::Duration;

use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
    pub multiplier: f64,
    pub jitter_fraction: f64,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    /// Conventional bot settings: 5 attempts, 500 ms base, doubling,
    /// 20% jitter, capped at 30 s.
    fn default() -> RetryPolicy {
        RetryPolicy {
            max_attempts: 5,
            base_delay: Duration::from_millis(500),
            multiplier: 2.0,
            jitter_fraction: 0.2,
            max_delay: Duration::from_secs(30),
        }
    }
}

impl RetryPolicy {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_attempts == 0 {
            return Err("max_attempts must be positive".to_owned());
        }
        if self.multiplier < 1.0 {
            return Err("multiplier must be at least 1".to_owned());
        }
        if !(0.0..=1.0).contains(&self.jitter_fraction) {
            return Err("jitter_fraction must lie in [0, 1]".to_owned());
        }
        Ok(())
    }

    /// The delay before retrying after attempt n (1-based):
    /// min(max_delay, base · multiplier^(n-1)), then jittered by a
    /// uniform factor in [1 - jitter, 1 + jitter].
    pub fn delay_after(&self, attempt: u32, rng: &mut impl Rng) -> Duration {
        let exponent = attempt.saturating_sub(1) as i32;
        let raw = self.base_delay.as_secs_f64() * self.multiplier.powi(exponent);
        let capped = raw.min(self.max_delay.as_secs_f64());
        let factor = if self.jitter_fraction > 0.0 {
            1.0 + self.jitter_fraction * (rng.random::<f64>() * 2.0 - 1.0)
        } else {
            1.0
        };
        Duration::from_secs_f64((capped * factor).max(0.0))
    }
}
