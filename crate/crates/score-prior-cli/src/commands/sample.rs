//! Posterior sampling for the two single-parameter illustrations:
//! a Poisson rate and a normal mean with known variance.

use crate::commands::RunCtx;
use crate::svg::{line_plot, Series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use score_prior::mcmc::{chain_summary, run_chain, ProposalSpec};
use score_prior::models::ModelSpec;
use score_prior::numeric::{mean, seed_mix};
use score_prior::prior::{solve_half_line_anchor, PriorSpec};
use score_prior::{io, Error, Result};

pub fn run(mut ctx: RunCtx) -> Result<()> {
    let model = ctx.cfg.take("model").unwrap_or_else(|| "poisson".into());
    let n = ctx.cfg.take_usize("n")?.unwrap_or(100);
    let iters = ctx.cfg.take_usize("iters")?.unwrap_or(100_000);
    let burn_in = ctx.cfg.take_usize("burn_in")?.unwrap_or(iters / 2);
    let svg = ctx.cfg.take_bool("svg")?.unwrap_or(false);

    let mut rng = ChaCha8Rng::seed_from_u64(seed_mix(ctx.seed, &[0]));
    // Anchor the prior a little above the data so the posterior sits on
    // the flat part of the density, then initialize at the sample mean.
    let (spec_model, data, prior, init, proposal) = match model.as_str() {
        "poisson" => {
            let theta = ctx.cfg.take_f64("theta")?.unwrap_or(2.5);
            let sd = ctx.cfg.take_f64("proposal_sd")?.unwrap_or(0.15);
            let m = ModelSpec::Poisson;
            let data = m.simulate(&[theta], n, &mut rng)?;
            let xbar = mean(&data.y);
            (
                m,
                data,
                PriorSpec::half_line_at(xbar + 2.5)?,
                xbar.max(0.25),
                ProposalSpec::RandomWalkLogScale { sd },
            )
        }
        "normal" => {
            let mu = ctx.cfg.take_f64("mu")?.unwrap_or(5.0);
            let sigma = ctx.cfg.take_f64("sigma")?.unwrap_or(1.0);
            let sd = ctx.cfg.take_f64("proposal_sd")?.unwrap_or(0.25);
            let m = ModelSpec::NormalKnownVar { sigma };
            let data = m.simulate(&[mu], n, &mut rng)?;
            let xbar = mean(&data.y);
            (
                m,
                data,
                PriorSpec::real_line_symmetric(solve_half_line_anchor(), xbar + 0.25)?,
                xbar,
                ProposalSpec::RandomWalkGaussian { sd },
            )
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "model '{other}' not recognized; use poisson or normal"
            )))
        }
    };
    ctx.cfg.finish()?;

    let data_path = ctx.out.join("data.csv");
    io::write_dataset(&data_path, &data)?;

    let bound = spec_model.bind(&data)?;
    let chain = run_chain(
        &bound,
        &[prior],
        &[init],
        &[proposal],
        iters,
        burn_in,
        seed_mix(ctx.seed, &[1]),
    )?;
    let summary = chain_summary(&chain)?;

    let chain_path = ctx.out.join("chain.csv");
    let summary_path = ctx.out.join("summary.csv");
    io::write_chain(&chain_path, &chain)?;
    io::write_summaries(&summary_path, &summary)?;

    let s = &summary[0];
    println!(
        "{model} posterior: mean {:.6}, sd {:.6}, 95% interval [{:.6}, {:.6}], acceptance {:.3}",
        s.mean, s.sd, s.q025, s.q975, s.acceptance_rate
    );
    println!("wrote {}", data_path.display());
    println!("wrote {}", chain_path.display());
    println!("wrote {}", summary_path.display());

    if svg {
        let iters_axis: Vec<f64> = (0..chain.draws.len()).map(|i| i as f64).collect();
        let col: Vec<f64> = chain.draws.iter().map(|row| row[0]).collect();
        let svg_path = ctx.out.join("trace.svg");
        line_plot(
            &svg_path,
            &format!("{model} posterior trace"),
            &[Series { label: "", xs: &iters_axis, ys: &col }],
        )?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}
