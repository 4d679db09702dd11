//! Random-walk Metropolis under table-free priors.
//!
//! The sampler never touches a solved density table: every acceptance
//! ratio integrates the log-prior increment between the current point
//! and the proposal with the same Taylor stepping the solver uses.
//! Each coordinate carries its current u value, so one step costs one
//! short march regardless of how far the chain has wandered from the
//! prior's anchor.

pub mod mixture;

pub use mixture::{run_mixture_gibbs, MixtureConfig};

use crate::error::{Error, Result};
use crate::models::BoundModel;
use crate::numeric::{mean, quantile, sample_sd};
use crate::prior::{log_prior_ratio, u_at, PriorSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Per-coordinate random-walk proposal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProposalSpec {
    /// theta' = theta + sd * z.
    RandomWalkGaussian { sd: f64 },
    /// theta' = theta * exp(sd * z); asymmetric, for positive scales.
    RandomWalkLogScale { sd: f64 },
}

impl ProposalSpec {
    pub fn validate(&self) -> Result<()> {
        let sd = match self {
            ProposalSpec::RandomWalkGaussian { sd } => *sd,
            ProposalSpec::RandomWalkLogScale { sd } => *sd,
        };
        if sd > 0.0 && sd.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "proposal sd must be positive, got {sd}"
            )))
        }
    }

    /// Draw a proposal and the log ratio q(theta|theta')/q(theta'|theta).
    fn propose<R: Rng + ?Sized>(&self, theta: f64, rng: &mut R) -> (f64, f64) {
        let z: f64 = StandardNormal.sample(rng);
        match self {
            ProposalSpec::RandomWalkGaussian { sd } => (theta + sd * z, 0.0),
            ProposalSpec::RandomWalkLogScale { sd } => {
                let next = theta * (sd * z).exp();
                (next, next.ln() - theta.ln())
            }
        }
    }
}

/// One Metropolis update of a single coordinate.
///
/// `state` is the current value and its cached u; the return carries
/// the (possibly unchanged) pair plus whether the proposal was taken.
/// Proposals that leave the prior's domain, or that the increment
/// integration refuses for any reason, are rejected in place.
pub fn mh_step<L, R>(
    state: (f64, f64),
    loglik: L,
    prior: &PriorSpec,
    proposal: &ProposalSpec,
    rng: &mut R,
) -> (f64, f64, bool)
where
    L: Fn(f64) -> f64,
    R: Rng + ?Sized,
{
    let (theta, u_val) = state;
    let (cand, log_q_ratio) = proposal.propose(theta, rng);
    let (log_prior, u_cand) = match log_prior_ratio(prior, theta, cand, u_val) {
        Ok(pair) => pair,
        Err(_) => return (theta, u_val, false),
    };
    let delta = loglik(cand) - loglik(theta) + log_prior + log_q_ratio;
    if delta.is_nan() {
        return (theta, u_val, false);
    }
    if rng.gen::<f64>().ln() < delta {
        (cand, u_cand, true)
    } else {
        (theta, u_val, false)
    }
}

/// A finished run: every iteration's state (burn-in included), plus
/// per-coordinate acceptance counts.
#[derive(Debug, Clone)]
pub struct Chain {
    pub draws: Vec<Vec<f64>>,
    pub accepted: Vec<usize>,
    pub burn_in: usize,
    pub seed: u64,
}

impl Chain {
    pub fn iterations(&self) -> usize {
        self.draws.len()
    }

    pub fn dimension(&self) -> usize {
        self.draws.first().map_or(0, Vec::len)
    }

    /// Draws after burn-in, the ones summaries are computed from.
    pub fn retained(&self) -> &[Vec<f64>] {
        &self.draws[self.burn_in.min(self.draws.len())..]
    }

    pub fn column(&self, coord: usize) -> Vec<f64> {
        self.retained().iter().map(|row| row[coord]).collect()
    }

    pub fn acceptance_rate(&self, coord: usize) -> f64 {
        self.accepted[coord] as f64 / self.iterations() as f64
    }
}

/// Metropolis-within-Gibbs over all coordinates of a bound model.
///
/// Coordinate i gets its own prior and proposal; one iteration sweeps
/// the coordinates in order, updating each by `mh_step` with the rest
/// held fixed. Runs are deterministic functions of the seed.
pub fn run_chain(
    model: &BoundModel,
    priors: &[PriorSpec],
    init: &[f64],
    proposals: &[ProposalSpec],
    iters: usize,
    burn_in: usize,
    seed: u64,
) -> Result<Chain> {
    let dim = model.spec().dimension();
    if priors.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: priors.len() });
    }
    if init.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: init.len() });
    }
    if proposals.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: proposals.len() });
    }
    for p in proposals {
        p.validate()?;
    }
    if iters <= burn_in {
        return Err(Error::InvalidConfig(format!(
            "need iterations ({iters}) > burn-in ({burn_in})"
        )));
    }

    let mut u_vals = Vec::with_capacity(dim);
    for (coord, (&value, prior)) in init.iter().zip(priors).enumerate() {
        let u = u_at(prior, value).map_err(|_| Error::InitOutOfDomain { coord, value })?;
        if !u.is_finite() {
            return Err(Error::InitOutOfDomain { coord, value });
        }
        u_vals.push(u);
    }
    if !model.loglik(init).is_finite() {
        return Err(Error::InitOutOfDomain { coord: 0, value: init[0] });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = init.to_vec();
    let mut accepted = vec![0usize; dim];
    let mut draws = Vec::with_capacity(iters);

    let mut scratch = state.clone();
    for _ in 0..iters {
        for i in 0..dim {
            scratch.copy_from_slice(&state);
            let loglik = |t: f64| {
                let mut params = scratch.clone();
                params[i] = t;
                model.loglik(&params)
            };
            let (t, u, ok) = mh_step((state[i], u_vals[i]), loglik, &priors[i], &proposals[i], &mut rng);
            state[i] = t;
            u_vals[i] = u;
            accepted[i] += ok as usize;
        }
        draws.push(state.clone());
    }

    Ok(Chain { draws, accepted, burn_in, seed })
}

/// Per-coordinate posterior summary over the retained draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordSummary {
    pub coord: usize,
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub q975: f64,
    pub acceptance_rate: f64,
}

pub fn chain_summary(chain: &Chain) -> Result<Vec<CoordSummary>> {
    if chain.retained().is_empty() || chain.dimension() == 0 {
        return Err(Error::EmptyChain);
    }
    Ok((0..chain.dimension())
        .map(|coord| {
            let col = chain.column(coord);
            CoordSummary {
                coord,
                mean: mean(&col),
                sd: sample_sd(&col),
                q025: quantile(&col, 0.025),
                q975: quantile(&col, 0.975),
                acceptance_rate: chain.acceptance_rate(coord),
            }
        })
        .collect())
}
