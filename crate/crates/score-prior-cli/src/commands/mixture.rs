//! Gibbs sampling for the three-component normal mixture benchmark:
//! all nine parameters (weights, means, variances) unknown.

use crate::commands::RunCtx;
use crate::svg::{line_plot, Series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use score_prior::mcmc::{chain_summary, run_mixture_gibbs, MixtureConfig};
use score_prior::models::simulate::simulate_mixture3;
use score_prior::models::{Dataset, MixtureParams};
use score_prior::numeric::seed_mix;
use score_prior::{io, Result};

/// The benchmark truth: three well-separated components.
pub fn benchmark_truth() -> MixtureParams {
    MixtureParams {
        weights: [0.25, 0.35, 0.40],
        means: [-3.5, 0.0, 2.5],
        vars: [0.5, 0.1, 1.2],
    }
}

pub fn run(mut ctx: RunCtx) -> Result<()> {
    let n = ctx.cfg.take_usize("n")?.unwrap_or(250);
    let iters = ctx.cfg.take_usize("iters")?.unwrap_or(10_000);
    let burn_in = ctx.cfg.take_usize("burn_in")?.unwrap_or(iters / 2);
    let svg = ctx.cfg.take_bool("svg")?.unwrap_or(false);
    ctx.cfg.finish()?;

    let truth = benchmark_truth();
    let mut rng = ChaCha8Rng::seed_from_u64(seed_mix(ctx.seed, &[0]));
    let data = simulate_mixture3(&truth, n, &mut rng)?;

    let data_path = ctx.out.join("data.csv");
    io::write_dataset(&data_path, &Dataset::from_values(data.clone()))?;

    let config = MixtureConfig::from_data(&data, iters, burn_in, seed_mix(ctx.seed, &[1]))?;
    let init = config.default_init();
    let chain = run_mixture_gibbs(&data, &config, &init)?;
    let summary = chain_summary(&chain)?;

    let chain_path = ctx.out.join("chain.csv");
    let summary_path = ctx.out.join("summary.csv");
    io::write_chain(&chain_path, &chain)?;
    io::write_summaries(&summary_path, &summary)?;

    println!(
        "mixture posterior means: weights ({:.4}, {:.4}, {:.4}) mu ({:.4}, {:.4}, {:.4}) var ({:.4}, {:.4}, {:.4})",
        summary[0].mean,
        summary[1].mean,
        summary[2].mean,
        summary[3].mean,
        summary[4].mean,
        summary[5].mean,
        summary[6].mean,
        summary[7].mean,
        summary[8].mean,
    );
    println!("wrote {}", data_path.display());
    println!("wrote {}", chain_path.display());
    println!("wrote {}", summary_path.display());

    if svg {
        let iters_axis: Vec<f64> = (0..chain.draws.len()).map(|i| i as f64).collect();
        for (name, coords, labels) in [
            ("weights", [0usize, 1, 2], ["w1", "w2", "w3"]),
            ("means", [3, 4, 5], ["mu1", "mu2", "mu3"]),
            ("variances", [6, 7, 8], ["v1", "v2", "v3"]),
        ] {
            let cols: Vec<Vec<f64>> = coords
                .iter()
                .map(|&c| chain.draws.iter().map(|row| row[c]).collect())
                .collect();
            let series: Vec<Series> = cols
                .iter()
                .zip(labels)
                .map(|(ys, label)| Series { label, xs: &iters_axis, ys })
                .collect();
            let path = ctx.out.join(format!("traces_{name}.svg"));
            line_plot(&path, &format!("mixture {name} traces"), &series)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
