//! Run-wide budgets.

use serde::{Deserialize, Serialize};

/// Environment variable overriding [`Limits::max_materialize`].
pub const MATERIALIZE_ENV: &str = "RECURSHIFT_MAX_MATERIALIZE";

pub const DEFAULT_MAX_MATERIALIZE: u64 = 1 << 28;
pub const DEFAULT_MAX_HORIZON_N: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest number of symbols any single call may materialize.
    pub max_materialize: u64,
    /// Largest omega index a horizon-growing search may reach.
    pub max_horizon_n: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_materialize: DEFAULT_MAX_MATERIALIZE,
            max_horizon_n: DEFAULT_MAX_HORIZON_N,
        }
    }
}

impl Limits {
    /// Defaults, with the materialization cap taken from the environment when set.
    ///
    /// Unparseable values are ignored.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(MATERIALIZE_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            limits.max_materialize = cap;
        }
        limits
    }

    pub fn with_max_materialize(mut self, cap: u64) -> Self {
        self.max_materialize = cap;
        self
    }

    pub(crate) fn check(&self, requested: u128) -> crate::Result<()> {
        if requested > self.max_materialize as u128 {
            Err(crate::Error::CapExceeded {
                requested,
                cap: self.max_materialize,
            })
        } else {
            Ok(())
        }
    }
}
