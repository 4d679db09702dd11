//! Shared plumbing for the subcommands: resolved run context and the
//! error-to-exit-code mapping.

pub mod coverage;
pub mod mixture;
pub mod model_compare;
pub mod nested;
pub mod regression;
pub mod sample;
pub mod solve_prior;

use crate::config::Config;
use score_prior::{Error, Result};
use std::path::{Path, PathBuf};

/// Everything a command needs: its config (already stripped of the
/// common keys), the mandatory seed, and the output directory, created
/// on construction.
pub struct RunCtx {
    pub cfg: Config,
    pub seed: u64,
    pub out: PathBuf,
    pub reps: Option<usize>,
    pub desk_scale: bool,
}

/// Merge config file and command-line flags; flags win. A definite seed
/// is required so every artifact is attributable to one.
pub fn build_ctx(
    config_path: Option<&Path>,
    seed: Option<u64>,
    out: Option<&Path>,
    reps: Option<usize>,
    desk_scale: bool,
) -> Result<RunCtx> {
    let mut cfg = match config_path {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let seed = match seed.or(cfg.take_u64("seed")?) {
        Some(s) => s,
        None => {
            return Err(Error::InvalidConfig(
                "seed is required: pass --seed N or set seed = N in the config".into(),
            ))
        }
    };
    let out = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.take("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)
        .map_err(|e| Error::InvalidConfig(format!("cannot create {}: {e}", out.display())))?;
    let reps = reps.or(cfg.take_usize("reps")?);
    let desk_scale = desk_scale || cfg.take_bool("desk_scale")?.unwrap_or(false);
    Ok(RunCtx { cfg, seed, out, reps, desk_scale })
}

/// (class, exit code) for the one-line machine-readable error report:
/// bad inputs exit 2, file problems exit 3, numerical failures exit 1.
pub fn error_class(e: &Error) -> (&'static str, i32) {
    match e {
        Error::InvalidConfig(_)
        | Error::InvalidSpec(_)
        | Error::InvalidData(_)
        | Error::DimensionMismatch { .. } => ("config", 2),
        Error::Csv { .. } => ("io", 3),
        _ => ("compute", 1),
    }
}
