//! IO layer of the sequential Bell toolkit: JSON scenario and result
//! schemas, CSV emission, and the subcommand implementations behind the
//! `seqbell` binary.

pub mod commands;
pub mod formats;
pub mod output;

/// Environment variable consulted when `--threads` is not given.
pub const THREADS_ENV: &str = "SEQBELL_THREADS";

/// Resolves the worker count: explicit flag, then environment, then 1.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
        .max(1)
}
