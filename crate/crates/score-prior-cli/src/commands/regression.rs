//! Poisson regression: coefficient chains, caterpillar intervals, and
//! an optional side-by-side run under flat-by-variance normal priors.

use crate::commands::RunCtx;
use crate::svg::{caterpillar_plot, line_plot, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use score_prior::mcmc::{chain_summary, run_chain, Chain, CoordSummary, ProposalSpec};
use score_prior::models::{poisson_regression_mle, ModelSpec};
use score_prior::numeric::seed_mix;
use score_prior::prior::{solve_half_line_anchor, PriorSpec};
use score_prior::{io, Error, Result};
use std::io::Write as _;

const BASE_BETA: [f64; 5] = [-0.8, -0.5, 0.0, 0.5, 0.8];

/// The preset coefficient vector: the five benchmark values, padded
/// with zeros ("noise" coefficients) beyond k = 5.
pub fn preset_beta(k: usize) -> Vec<f64> {
    (0..k).map(|j| if j < 5 { BASE_BETA[j] } else { 0.0 }).collect()
}

/// Step sizes from the curvature at the MLE: sd_j = 2.4 / sqrt(F_jj)
/// with F_jj = sum_i exp(eta_i) x_ij^2. Diagonal only; plenty for a
/// random-walk proposal.
fn proposal_sds(x: &[Vec<f64>], eta: &[f64]) -> Vec<f64> {
    let k = x[0].len();
    (0..k)
        .map(|j| {
            let fisher_jj: f64 =
                x.iter().zip(eta).map(|(row, &e)| e.exp() * row[j] * row[j]).sum();
            (2.4 / fisher_jj.sqrt()).clamp(1e-3, 0.4)
        })
        .collect()
}

/// Coordinate Metropolis under independent N(0, var) priors, with the
/// linear predictor updated incrementally. The baseline the proposed
/// prior is compared against.
fn run_gaussian_chain(
    y: &[f64],
    x: &[Vec<f64>],
    var: f64,
    init: &[f64],
    sds: &[f64],
    iters: usize,
    burn_in: usize,
    seed: u64,
) -> Chain {
    let n = y.len();
    let k = init.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beta = init.to_vec();
    let mut eta: Vec<f64> = x.iter().map(|row| row.iter().zip(&beta).map(|(a, b)| a * b).sum()).collect();
    let loglik = |eta: &[f64]| -> f64 {
        let mut ll = 0.0;
        for i in 0..n {
            if eta[i] > 700.0 {
                return f64::NEG_INFINITY;
            }
            ll += y[i] * eta[i] - eta[i].exp();
        }
        ll
    };
    let mut cur_ll = loglik(&eta);
    let mut draws = Vec::with_capacity(iters);
    let mut accepted = vec![0usize; k];
    let mut scratch = vec![0.0; n];
    for _ in 0..iters {
        for j in 0..k {
            let z: f64 = rng.sample(rand_distr::StandardNormal);
            let cand = beta[j] + sds[j] * z;
            let delta = cand - beta[j];
            for i in 0..n {
                scratch[i] = eta[i] + delta * x[i][j];
            }
            let cand_ll = loglik(&scratch);
            let dlp = (beta[j] * beta[j] - cand * cand) / (2.0 * var);
            let accept = cand_ll - cur_ll + dlp;
            if accept >= 0.0 || rng.gen::<f64>().ln() < accept {
                beta[j] = cand;
                eta.copy_from_slice(&scratch);
                cur_ll = cand_ll;
                accepted[j] += 1;
            }
        }
        draws.push(beta.clone());
    }
    Chain { draws, accepted, burn_in, seed }
}

fn write_caterpillar(path: &std::path::Path, summary: &[CoordSummary]) -> Result<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    writeln!(f, "coord,mean,q2_5,q97_5").map_err(|e| Error::InvalidConfig(format!("write: {e}")))?;
    for s in summary {
        writeln!(f, "{},{:.16e},{:.16e},{:.16e}", s.coord, s.mean, s.q025, s.q975)
            .map_err(|e| Error::InvalidConfig(format!("write: {e}")))?;
    }
    Ok(())
}

pub fn run(mut ctx: RunCtx) -> Result<()> {
    let csv = ctx.cfg.take("csv");
    let iters = ctx.cfg.take_usize("iters")?.unwrap_or(50_000);
    let burn_in = ctx.cfg.take_usize("burn_in")?.unwrap_or(iters / 2);
    let chains = ctx.cfg.take_usize("chains")?.unwrap_or(1).max(1);
    let init_spread = ctx.cfg.take_f64("init_spread")?.unwrap_or(0.4);
    let compare_default = ctx.cfg.take_bool("compare_default")?.unwrap_or(false);
    let default_variance = ctx.cfg.take_f64("default_variance")?.unwrap_or(1e4);
    let svg = ctx.cfg.take_bool("svg")?.unwrap_or(false);

    // Either ingest a dataset or simulate the preset design.
    let (data, truth) = match csv {
        Some(path) => {
            let k_unused = ctx.cfg.take_usize("k")?;
            let n_unused = ctx.cfg.take_usize("n")?;
            let b_unused = ctx.cfg.take_f64_list("beta")?;
            let s_unused = ctx.cfg.take_f64("design_scale")?;
            if k_unused.is_some() || n_unused.is_some() || b_unused.is_some() || s_unused.is_some()
            {
                return Err(Error::InvalidConfig(
                    "csv mode takes the design from the file; drop k/n/beta/design_scale".into(),
                ));
            }
            let data = io::read_dataset(std::path::Path::new(&path))?;
            if data.x.is_none() {
                return Err(Error::InvalidData(format!(
                    "{path}: needs covariate columns x1..xk"
                )));
            }
            (data, None)
        }
        None => {
            let k = ctx.cfg.take_usize("k")?.unwrap_or(5);
            let n = ctx.cfg.take_usize("n")?.unwrap_or(400);
            let beta = match ctx.cfg.take_f64_list("beta")? {
                Some(b) => {
                    if b.len() != k {
                        return Err(Error::InvalidConfig(format!(
                            "beta has {} entries but k = {k}",
                            b.len()
                        )));
                    }
                    b
                }
                None => preset_beta(k),
            };
            let design_scale = ctx.cfg.take_f64("design_scale")?.unwrap_or(1.0);
            let model = ModelSpec::PoissonRegression { k, design_scale };
            let mut rng = ChaCha8Rng::seed_from_u64(seed_mix(ctx.seed, &[0]));
            let data = model.simulate(&beta, n, &mut rng)?;
            (data, Some(beta))
        }
    };
    ctx.cfg.finish()?;

    let x = data.x.clone().expect("covariates checked above");
    let y = data.y.clone();
    let k = x[0].len();
    let model = ModelSpec::poisson_regression(k);

    if truth.is_some() {
        let data_path = ctx.out.join("data.csv");
        io::write_dataset(&data_path, &data)?;
        println!("wrote {}", data_path.display());
    }

    let mle = poisson_regression_mle(&y, &x)?;
    let eta_hat: Vec<f64> =
        x.iter().map(|row| row.iter().zip(&mle).map(|(a, b)| a * b).sum()).collect();
    let sds = proposal_sds(&x, &eta_hat);
    let u0 = solve_half_line_anchor();
    let priors: Vec<PriorSpec> = mle
        .iter()
        .map(|&m| PriorSpec::real_line_symmetric(u0, m))
        .collect::<Result<_>>()?;
    let proposals: Vec<ProposalSpec> =
        sds.iter().map(|&sd| ProposalSpec::RandomWalkGaussian { sd }).collect();

    let bound = model.bind(&data)?;
    let mut chain_files = Vec::new();
    let mut first_chain: Option<Chain> = None;
    for c in 0..chains {
        let init: Vec<f64> = if chains == 1 {
            mle.clone()
        } else {
            // Distinct random starts around the MLE, one stream per chain.
            let mut r = ChaCha8Rng::seed_from_u64(seed_mix(ctx.seed, &[2, c as u64]));
            mle.iter().map(|&m| m + r.gen_range(-init_spread..init_spread)).collect()
        };
        let chain = run_chain(
            &bound,
            &priors,
            &init,
            &proposals,
            iters,
            burn_in,
            seed_mix(ctx.seed, &[3, c as u64]),
        )?;
        let path = if chains == 1 {
            ctx.out.join("chain.csv")
        } else {
            ctx.out.join(format!("chain_{}.csv", c + 1))
        };
        io::write_chain(&path, &chain)?;
        println!("wrote {}", path.display());
        chain_files.push(path);
        if first_chain.is_none() {
            first_chain = Some(chain);
        }
    }
    let chain = first_chain.expect("at least one chain");
    let summary = chain_summary(&chain)?;

    let summary_path = ctx.out.join("summary.csv");
    io::write_summaries(&summary_path, &summary)?;
    println!("wrote {}", summary_path.display());

    let cat_path = ctx.out.join("caterpillar.csv");
    write_caterpillar(&cat_path, &summary)?;
    println!("wrote {}", cat_path.display());

    if let Some(beta) = &truth {
        let truth_path = ctx.out.join("truth.csv");
        let mut f = std::fs::File::create(&truth_path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", truth_path.display())))?;
        writeln!(f, "coord,beta_true").map_err(|e| Error::InvalidConfig(format!("write: {e}")))?;
        for (j, b) in beta.iter().enumerate() {
            writeln!(f, "{j},{b:.16e}").map_err(|e| Error::InvalidConfig(format!("write: {e}")))?;
        }
        println!("wrote {}", truth_path.display());
        let contained = summary
            .iter()
            .zip(beta)
            .filter(|(s, &b)| s.q025 <= b && b <= s.q975)
            .count();
        println!("intervals containing the true coefficient: {contained}/{k}");
    }

    if compare_default {
        let gchain =
            run_gaussian_chain(&y, &x, default_variance, &mle, &sds, iters, burn_in, seed_mix(ctx.seed, &[4]));
        let gsummary = chain_summary(&gchain)?;
        let cmp_path = ctx.out.join("comparison.csv");
        let mut f = std::fs::File::create(&cmp_path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", cmp_path.display())))?;
        writeln!(
            f,
            "coord,mean_proposed,sd_proposed,q2_5_proposed,q97_5_proposed,\
             mean_default,sd_default,q2_5_default,q97_5_default"
        )
        .map_err(|e| Error::InvalidConfig(format!("write: {e}")))?;
        for (s, g) in summary.iter().zip(&gsummary) {
            writeln!(
                f,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.coord, s.mean, s.sd, s.q025, s.q975, g.mean, g.sd, g.q025, g.q975
            )
            .map_err(|e| Error::InvalidConfig(format!("write: {e}")))?;
        }
        println!("wrote {}", cmp_path.display());
    }

    if svg {
        let rows: Vec<(String, f64, f64, f64)> = summary
            .iter()
            .map(|s| (format!("b{}", s.coord), s.q025, s.mean, s.q975))
            .collect();
        let cat_svg = ctx.out.join("caterpillar.svg");
        caterpillar_plot(&cat_svg, "95% credible intervals", &rows, truth.as_deref())?;
        println!("wrote {}", cat_svg.display());

        if chains > 1 {
            // Overlaid early traces, one panel per coefficient.
            let show = iters.min(10_000);
            let iters_axis: Vec<f64> = (0..show).map(|i| i as f64).collect();
            let all_draws: Vec<Vec<Vec<f64>>> = chain_files
                .iter()
                .map(|p| io::read_chain_draws(p))
                .collect::<Result<_>>()?;
            for j in 0..k {
                let cols: Vec<Vec<f64>> = all_draws
                    .iter()
                    .map(|draws| draws.iter().take(show).map(|row| row[j]).collect())
                    .collect();
                let labels: Vec<String> =
                    (0..cols.len()).map(|c| format!("chain {}", c + 1)).collect();
                let series: Vec<Series> = cols
                    .iter()
                    .zip(&labels)
                    .map(|(ys, label)| Series { label, xs: &iters_axis, ys })
                    .collect();
                let path = ctx.out.join(format!("traces_coord_{j}.svg"));
                line_plot(&path, &format!("coefficient {j} traces"), &series)?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}
