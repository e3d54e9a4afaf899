//! Enumeration caps. `BAODE_MAX_UNIVERSE` bounds the number of Boolean
//! elements any exhaustive loop is allowed to walk.

use crate::error::{Error, Result};

pub const MAX_ATOMS: usize = 20;
pub const DEFAULT_MAX_UNIVERSE: u64 = 1 << 20;

pub fn max_universe() -> u64 {
    std::env::var("BAODE_MAX_UNIVERSE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_UNIVERSE)
}

pub fn check_budget(what: &'static str, needed: u64) -> Result<()> {
    let cap = max_universe();
    if needed > cap {
        return Err(Error::Budget { what, needed, cap });
    }
    Ok(())
}
