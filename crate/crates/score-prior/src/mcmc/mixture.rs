//! Gibbs sampling for the three-component normal mixture.
//!
//! Nine parameters in chain order (w1,w2,w3, mu1..mu3, v1..v3). The
//! weights live on the simplex: w1 and w2 get Metropolis updates, w3
//! is always 1 - w1 - w2, and the prior contributes a factor for all
//! three, so a move in w1 also pays (or earns) the change in the w3
//! factor. Proposals leaving the simplex are rejected outright.

use crate::error::{Error, Result};
use crate::mcmc::{Chain, ProposalSpec};
use crate::models::likelihoods::{loglik_mixture3, MixtureParams};
use crate::numeric::quantile;
use crate::prior::{log_prior_ratio, u_at, PriorSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Priors and proposals for the three blocks, plus run length.
#[derive(Debug, Clone)]
pub struct MixtureConfig {
    pub weight_prior: PriorSpec,
    pub mean_priors: [PriorSpec; 3],
    pub var_priors: [PriorSpec; 3],
    pub weight_proposal: ProposalSpec,
    pub mean_proposal: ProposalSpec,
    pub var_proposal: ProposalSpec,
    pub iters: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl MixtureConfig {
    /// Data-driven defaults: mean priors anchored at the 1/6, 1/2,
    /// 5/6 sample quantiles, variance priors anchored at the overall
    /// sample variance (their flat stretch then covers every
    /// component scale below it), weights centered on 1/2.
    pub fn from_data(data: &[f64], iters: usize, burn_in: usize, seed: u64) -> Result<Self> {
        if data.len() < 2 {
            return Err(Error::InvalidData("mixture fitting needs at least 2 points".into()));
        }
        let anchors = [
            quantile(data, 1.0 / 6.0),
            quantile(data, 0.5),
            quantile(data, 5.0 / 6.0),
        ];
        let s2 = crate::numeric::sample_sd(data).powi(2);
        let u0 = crate::prior::solve_half_line_anchor();
        Ok(MixtureConfig {
            weight_prior: PriorSpec::unit_interval(0.5, 1.14)?,
            mean_priors: [
                PriorSpec::real_line_symmetric(u0, anchors[0])?,
                PriorSpec::real_line_symmetric(u0, anchors[1])?,
                PriorSpec::real_line_symmetric(u0, anchors[2])?,
            ],
            var_priors: [
                PriorSpec::half_line_at(s2)?,
                PriorSpec::half_line_at(s2)?,
                PriorSpec::half_line_at(s2)?,
            ],
            weight_proposal: ProposalSpec::RandomWalkGaussian { sd: 0.06 },
            mean_proposal: ProposalSpec::RandomWalkGaussian { sd: 0.15 },
            var_proposal: ProposalSpec::RandomWalkLogScale { sd: 0.35 },
            iters,
            burn_in,
            seed,
        })
    }

    /// Equal weights, means at the prior anchors, variances at half
    /// the overall variance anchor.
    pub fn default_init(&self) -> [f64; 9] {
        let mut init = [0.0; 9];
        init[..3].copy_from_slice(&[1.0 / 3.0, 1.0 / 3.0, 1.0 - 2.0 / 3.0]);
        for j in 0..3 {
            init[3 + j] = self.mean_priors[j].anchor;
            init[6 + j] = 0.5 * self.var_priors[j].anchor;
        }
        init
    }
}

fn accept<R: Rng + ?Sized>(delta: f64, rng: &mut R) -> bool {
    !delta.is_nan() && rng.gen::<f64>().ln() < delta
}

pub fn run_mixture_gibbs(data: &[f64], config: &MixtureConfig, init: &[f64]) -> Result<Chain> {
    if data.is_empty() {
        return Err(Error::InvalidData("mixture fitting needs data".into()));
    }
    if init.len() != 9 {
        return Err(Error::DimensionMismatch { expected: 9, got: init.len() });
    }
    config.weight_proposal.validate()?;
    config.mean_proposal.validate()?;
    config.var_proposal.validate()?;
    if config.iters <= config.burn_in {
        return Err(Error::InvalidConfig(format!(
            "need iterations ({}) > burn-in ({})",
            config.iters, config.burn_in
        )));
    }

    let weights = &init[..3];
    let wsum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| !(w > 0.0 && w < 1.0)) || (wsum - 1.0).abs() > 1e-9 {
        return Err(Error::SimplexViolation(weights.to_vec()));
    }

    let prior_of = |coord: usize| -> &PriorSpec {
        match coord {
            0..=2 => &config.weight_prior,
            3..=5 => &config.mean_priors[coord - 3],
            _ => &config.var_priors[coord - 6],
        }
    };

    let mut state: Vec<f64> = init.to_vec();
    let mut u_vals = [0.0_f64; 9];
    for coord in 0..9 {
        let u = u_at(prior_of(coord), state[coord])
            .map_err(|_| Error::InitOutOfDomain { coord, value: state[coord] })?;
        if !u.is_finite() {
            return Err(Error::InitOutOfDomain { coord, value: state[coord] });
        }
        u_vals[coord] = u;
    }

    let loglik = |s: &[f64]| {
        let p = MixtureParams::from_flat(s).expect("state is 9 long");
        loglik_mixture3(&p, data)
    };
    let mut cur_ll = loglik(&state);
    if !cur_ll.is_finite() {
        return Err(Error::InitOutOfDomain { coord: 0, value: state[0] });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut accepted = vec![0usize; 9];
    let mut draws = Vec::with_capacity(config.iters);
    let mut cand = state.clone();

    for _ in 0..config.iters {
        // Weight pair: w3 absorbs each move, and its prior factor
        // rides along in the acceptance ratio.
        for j in 0..2 {
            let z: f64 = StandardNormal.sample(&mut rng);
            let sd = match config.weight_proposal {
                ProposalSpec::RandomWalkGaussian { sd } => sd,
                ProposalSpec::RandomWalkLogScale { sd } => sd,
            };
            let wj = state[j] + sd * z;
            let w3 = 1.0 - wj - state[1 - j];
            if !(wj > 0.0 && wj < 1.0 && w3 > 0.0 && w3 < 1.0) {
                continue;
            }
            let Ok((lp_j, u_j)) = log_prior_ratio(&config.weight_prior, state[j], wj, u_vals[j])
            else {
                continue;
            };
            let Ok((lp_3, u_3)) = log_prior_ratio(&config.weight_prior, state[2], w3, u_vals[2])
            else {
                continue;
            };
            cand.copy_from_slice(&state);
            cand[j] = wj;
            cand[2] = w3;
            let cand_ll = loglik(&cand);
            if accept(cand_ll - cur_ll + lp_j + lp_3, &mut rng) {
                state[j] = wj;
                state[2] = w3;
                u_vals[j] = u_j;
                u_vals[2] = u_3;
                cur_ll = cand_ll;
                accepted[j] += 1;
                accepted[2] += 1;
            }
        }

        // Means, then variances, one site at a time.
        for coord in 3..9 {
            let proposal = if coord < 6 {
                &config.mean_proposal
            } else {
                &config.var_proposal
            };
            let (next, log_q_ratio) = proposal.propose(state[coord], &mut rng);
            let Ok((lp, u_next)) = log_prior_ratio(prior_of(coord), state[coord], next, u_vals[coord])
            else {
                continue;
            };
            cand.copy_from_slice(&state);
            cand[coord] = next;
            let cand_ll = loglik(&cand);
            if accept(cand_ll - cur_ll + lp + log_q_ratio, &mut rng) {
                state[coord] = next;
                u_vals[coord] = u_next;
                cur_ll = cand_ll;
                accepted[coord] += 1;
            }
        }

        draws.push(state.clone());
    }

    Ok(Chain {
        draws,
        accepted,
        burn_in: config.burn_in,
        seed: config.seed,
    })
}
