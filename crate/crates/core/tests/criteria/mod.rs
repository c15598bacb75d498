//! Acceptance criteria checked against independent oracles.
//!
//! Every check returns `Err(reason)` instead of panicking so the CLI crate's
//! acceptance runner can print one verdict per criterion. The core crate
//! wraps each check in a plain `#[test]`.

#![allow(dead_code)]

pub mod config_wiring;
pub mod ensemble;
pub mod fixture;
pub mod formats;
pub mod fscore;
pub mod hac;
pub mod kmeans;
pub mod oracles;
pub mod running_example;
pub mod sweeps;
pub mod wmd;

use std::path::PathBuf;

pub type Check = Result<(), String>;

/// Fails the enclosing check with a formatted message.
#[macro_export]
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Converts a library error into a check failure.
pub fn lib<T>(r: tcsim_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Repository-level `fixtures/` directory; both crates live two levels down.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}
