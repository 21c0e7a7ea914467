use std::sync::OnceLock;

/// Environment variable overriding the domain-size guard.
pub const SIZE_LIMIT_ENV: &str = "APPROXDEG_SIZE_LIMIT";

pub const DEFAULT_DOMAIN_LIMIT: u128 = 1_000_000;

/// Default cap on `basis functions x domain points` for a single LP.
pub const DEFAULT_LP_CELL_LIMIT: u128 = 400_000;

/// Maximum number of points any enumerated domain may have.
pub fn domain_limit() -> u128 {
    static LIMIT: OnceLock<u128> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var(SIZE_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_DOMAIN_LIMIT)
    })
}
