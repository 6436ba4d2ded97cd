//! Process-wide resource caps.
//!
//! Every operation that materializes something whose size grows exponentially
//! in its parameters (prefixes of `t_m`, signature domains, factor lengths)
//! checks the current caps first and fails with [`Error::ResourceCap`].

use std::sync::RwLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Longest prefix of `t_m` (or image `sigma^k(w)`) that may be built.
    pub max_prefix_len: usize,
    /// Largest number of subwords a signature may track.
    pub max_signature_domain: usize,
    /// Longest factor length that may be enumerated.
    pub max_factor_len: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_prefix_len: 1 << 24,
            max_signature_domain: 1 << 16,
            max_factor_len: 4096,
        }
    }
}

static CURRENT: RwLock<Option<Limits>> = RwLock::new(None);

pub fn current() -> Limits {
    CURRENT
        .read()
        .map(|g| g.unwrap_or_default())
        .unwrap_or_default()
}

/// Replaces the process-wide caps.
pub fn set(limits: Limits) {
    if let Ok(mut g) = CURRENT.write() {
        *g = Some(limits);
    }
}

pub(crate) fn check(what: &'static str, requested: u128, limit: usize) -> Result<()> {
    if requested > limit as u128 {
        return Err(Error::ResourceCap {
            what,
            requested,
            limit: limit as u128,
        });
    }
    Ok(())
}

pub(crate) fn check_prefix(requested: u128) -> Result<()> {
    check("prefix length", requested, current().max_prefix_len)
}

pub(crate) fn check_factor_len(requested: usize) -> Result<()> {
    check("factor length", requested as u128, current().max_factor_len)
}

pub(crate) fn check_signature_domain(requested: u128) -> Result<()> {
    check("signature domain", requested, current().max_signature_domain)
}

/// `m^k` as u128, `None` on overflow.
pub(crate) fn pow(m: usize, k: u32) -> Option<u128> {
    (m as u128).checked_pow(k)
}
