//! Experiment runners on top of the score-prior library: each
//! subcommand turns a small key=value config into CSV (and optionally
//! SVG) artifacts, deterministically in the seed.

pub mod commands;
pub mod config;
pub mod svg;

pub use commands::{build_ctx, error_class, RunCtx};
pub use config::Config;
