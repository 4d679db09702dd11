use clap::{Parser, Subcommand};
use score_prior_cli::commands::{self, build_ctx, error_class};
use std::path::PathBuf;
use std::process::ExitCode;

/// Objective-prior experiment runner: solved priors, posterior chains,
/// model comparisons, and frequentist studies, emitted as CSV/SVG.
#[derive(Parser)]
#[command(name = "score-prior", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat key=value config file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed (required here or in the config)
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Output directory (created if missing)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Replication count override
    #[arg(long, global = true, value_name = "N")]
    reps: Option<usize>,

    /// Use the small fast presets
    #[arg(long, global = true)]
    desk_scale: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a prior and write its u table and density
    SolvePrior,
    /// Posterior chain for a Poisson rate or a normal mean
    Sample,
    /// Gibbs sampler for the 3-component normal mixture benchmark
    Mixture,
    /// Poisson vs geometric Bayes-factor replication table
    ModelCompare,
    /// Nested binomial posterior-probability curves
    NestedBinomial,
    /// RMSE and interval coverage across replications
    CoverageStudy,
    /// Poisson regression chains and caterpillar intervals
    PoissonRegression,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match build_ctx(
        cli.config.as_deref(),
        cli.seed,
        cli.out.as_deref(),
        cli.reps,
        cli.desk_scale,
    ) {
        Ok(ctx) => ctx,
        Err(e) => return fail(&e),
    };
    let result = match cli.command {
        Command::SolvePrior => commands::solve_prior::run(ctx),
        Command::Sample => commands::sample::run(ctx),
        Command::Mixture => commands::mixture::run(ctx),
        Command::ModelCompare => commands::model_compare::run(ctx),
        Command::NestedBinomial => commands::nested::run(ctx),
        Command::CoverageStudy => commands::coverage::run(ctx),
        Command::PoissonRegression => commands::regression::run(ctx),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

/// One parseable line on stderr, then a class-specific exit code.
fn fail(e: &score_prior::Error) -> ExitCode {
    let (class, code) = error_class(e);
    let msg = e.to_string().replace('\n', " ");
    eprintln!("error: {class}: {msg}");
    ExitCode::from(code as u8)
}
