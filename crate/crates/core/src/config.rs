use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Hard limits on exhaustive work. Exceeding one is an error, never a
/// silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest dense tuple set, domain, or candidate count materialised.
    pub tuples: u64,
    /// Largest relation arity generated symbolically.
    pub max_arity: usize,
    /// Largest poset size accepted by the enumerators.
    pub max_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { tuples: 1 << 20, max_arity: 4, max_n: 5 }
    }
}

impl Budget {
    pub(crate) fn check_tuples(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.tuples as u128 {
            Err(Error::Budget { what, needed, limit: self.tuples as u128 })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_arity(&self, what: &'static str, m: usize) -> Result<()> {
        if m > self.max_arity {
            Err(Error::Budget { what, needed: m as u128, limit: self.max_arity as u128 })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_n(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.max_n {
            Err(Error::Budget { what, needed: n as u128, limit: self.max_n as u128 })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` without overflow, saturating at `u128::MAX`.
pub(crate) fn pow_sat(base: u128, exp: u128) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}
