//! Sampling models: likelihoods, simulators, and the conjugate
//! reference posteriors.
//!
//! `ModelSpec` names a model and its parameter dimension; binding it
//! to a dataset precomputes the sufficient statistics so repeated
//! likelihood evaluations (quadrature grids, samplers) cost O(1) in
//! the data where the family allows it.

pub mod jeffreys;
pub mod likelihoods;
pub mod regression;
pub mod simulate;

pub use jeffreys::{JeffreysNormalMean, JeffreysPoisson};
pub use likelihoods::{
    loglik_binomial, loglik_geometric, loglik_mixture3, loglik_normal_known_var, loglik_poisson,
    loglik_poisson_regression, MixtureParams,
};
pub use regression::poisson_regression_mle;

use crate::error::{Error, Result};
use rand::Rng;
use statrs::function::gamma::ln_gamma;

/// Observations plus optional covariate rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub y: Vec<f64>,
    pub x: Option<Vec<Vec<f64>>>,
}

impl Dataset {
    pub fn from_values(y: Vec<f64>) -> Self {
        Dataset { y, x: None }
    }

    pub fn with_covariates(y: Vec<f64>, x: Vec<Vec<f64>>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: y.len(),
                got: x.len(),
            });
        }
        let k = x.first().map_or(0, Vec::len);
        if k == 0 || x.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidData(
                "covariate rows must share a positive length".into(),
            ));
        }
        Ok(Dataset { y, x: Some(x) })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    fn require_counts(&self) -> Result<()> {
        if self.y.iter().any(|&v| v < 0.0 || v.fract() != 0.0 || !v.is_finite()) {
            return Err(Error::InvalidData(
                "this model needs nonnegative integer observations".into(),
            ));
        }
        Ok(())
    }
}

/// The sampling families used across the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Poisson,
    NormalKnownVar { sigma: f64 },
    Mixture3,
    Geometric,
    Binomial { trials: u64 },
    PoissonRegression { k: usize, design_scale: f64 },
}

impl ModelSpec {
    pub fn poisson_regression(k: usize) -> Self {
        ModelSpec::PoissonRegression { k, design_scale: 1.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Poisson => "poisson",
            ModelSpec::NormalKnownVar { .. } => "normal_known_var",
            ModelSpec::Mixture3 => "mixture3",
            ModelSpec::Geometric => "geometric",
            ModelSpec::Binomial { .. } => "binomial",
            ModelSpec::PoissonRegression { .. } => "poisson_regression",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ModelSpec::Mixture3 => 9,
            ModelSpec::PoissonRegression { k, .. } => *k,
            _ => 1,
        }
    }

    /// Log-likelihood of `params` given `data`; -inf outside the
    /// parameter support. Structural problems (wrong dimension,
    /// missing covariates, non-count data) are errors instead.
    pub fn loglik(&self, params: &[f64], data: &Dataset) -> Result<f64> {
        if params.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: params.len(),
            });
        }
        Ok(match self {
            ModelSpec::Poisson => {
                data.require_counts()?;
                loglik_poisson(params[0], &data.y)
            }
            ModelSpec::NormalKnownVar { sigma } => {
                loglik_normal_known_var(params[0], &data.y, *sigma)
            }
            ModelSpec::Mixture3 => {
                let p = MixtureParams::from_flat(params).expect("dimension checked");
                loglik_mixture3(&p, &data.y)
            }
            ModelSpec::Geometric => {
                data.require_counts()?;
                loglik_geometric(params[0], &data.y)
            }
            ModelSpec::Binomial { trials } => {
                data.require_counts()?;
                if data.y.iter().any(|&v| v > *trials as f64) {
                    return Err(Error::InvalidData(format!(
                        "observation exceeds trial count {trials}"
                    )));
                }
                data.y
                    .iter()
                    .map(|&v| loglik_binomial(params[0], v as u64, *trials))
                    .sum()
            }
            ModelSpec::PoissonRegression { k, .. } => {
                data.require_counts()?;
                let x = data
                    .x
                    .as_ref()
                    .ok_or_else(|| Error::InvalidData("regression needs covariates".into()))?;
                if x.first().map_or(0, Vec::len) != *k {
                    return Err(Error::DimensionMismatch {
                        expected: *k,
                        got: x.first().map_or(0, Vec::len),
                    });
                }
                loglik_poisson_regression(params, &data.y, x)
            }
        })
    }

    pub fn simulate<R: Rng + ?Sized>(
        &self,
        params: &[f64],
        n: usize,
        rng: &mut R,
    ) -> Result<Dataset> {
        if params.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: params.len(),
            });
        }
        match self {
            ModelSpec::Poisson => {
                simulate::simulate_poisson(params[0], n, rng).map(Dataset::from_values)
            }
            ModelSpec::NormalKnownVar { sigma } => {
                simulate::simulate_normal(params[0], *sigma, n, rng).map(Dataset::from_values)
            }
            ModelSpec::Mixture3 => {
                let p = MixtureParams::from_flat(params).expect("dimension checked");
                simulate::simulate_mixture3(&p, n, rng).map(Dataset::from_values)
            }
            ModelSpec::Geometric => {
                simulate::simulate_geometric(params[0], n, rng).map(Dataset::from_values)
            }
            ModelSpec::Binomial { trials } => {
                simulate::simulate_binomial(params[0], *trials, n, rng).map(Dataset::from_values)
            }
            ModelSpec::PoissonRegression { design_scale, .. } => {
                let (y, x) =
                    simulate::simulate_poisson_regression(params, *design_scale, n, rng)?;
                Dataset::with_covariates(y, x)
            }
        }
    }

    /// Bind to a dataset, validating it once and caching sufficient
    /// statistics for the families that have them.
    pub fn bind(&self, data: &Dataset) -> Result<BoundModel> {
        let stats = match self {
            ModelSpec::Poisson => {
                data.require_counts()?;
                let (sum, lfact) = data
                    .y
                    .iter()
                    .fold((0.0, 0.0), |(s, l), &x| (s + x, l + ln_gamma(x + 1.0)));
                Stats::Poisson { n: data.len() as f64, sum, lfact }
            }
            ModelSpec::Geometric => {
                data.require_counts()?;
                Stats::Geometric { n: data.len() as f64, sum: data.y.iter().sum() }
            }
            ModelSpec::NormalKnownVar { .. } => {
                let sum: f64 = data.y.iter().sum();
                let sumsq: f64 = data.y.iter().map(|v| v * v).sum();
                Stats::Normal { n: data.len() as f64, sum, sumsq }
            }
            ModelSpec::Binomial { trials } => {
                data.require_counts()?;
                if data.y.iter().any(|&v| v > *trials as f64) {
                    return Err(Error::InvalidData(format!(
                        "observation exceeds trial count {trials}"
                    )));
                }
                let t = *trials as f64;
                let (sum, lchoose) = data.y.iter().fold((0.0, 0.0), |(s, l), &y| {
                    (
                        s + y,
                        l + ln_gamma(t + 1.0) - ln_gamma(y + 1.0) - ln_gamma(t - y + 1.0),
                    )
                });
                Stats::Binomial { n: data.len() as f64, trials: t, sum, lchoose }
            }
            ModelSpec::Mixture3 | ModelSpec::PoissonRegression { .. } => {
                // Validate eagerly so later evaluations cannot fail.
                self.loglik(&vec![0.5; self.dimension()], data).map(|_| ())
                    .or_else(|e| match e {
                        Error::DimensionMismatch { .. } | Error::InvalidData(_) => Err(e),
                        _ => Ok(()),
                    })?;
                Stats::None
            }
        };
        Ok(BoundModel { spec: *self, data: data.clone(), stats })
    }
}

#[derive(Debug, Clone)]
enum Stats {
    Poisson { n: f64, sum: f64, lfact: f64 },
    Geometric { n: f64, sum: f64 },
    Normal { n: f64, sum: f64, sumsq: f64 },
    Binomial { n: f64, trials: f64, sum: f64, lchoose: f64 },
    None,
}

/// A model attached to one dataset, with validation done up front.
#[derive(Debug, Clone)]
pub struct BoundModel {
    spec: ModelSpec,
    data: Dataset,
    stats: Stats,
}

impl BoundModel {
    pub fn spec(&self) -> ModelSpec {
        self.spec
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    /// Same value as `ModelSpec::loglik`, computed from the cached
    /// statistics where possible. Dimension errors cannot occur for
    /// one-dimensional families; the multivariate ones recheck.
    pub fn loglik(&self, params: &[f64]) -> f64 {
        const LN_2PI: f64 = 1.8378770664093453;
        match (&self.stats, &self.spec) {
            (Stats::Poisson { n, sum, lfact }, _) => {
                let t = params[0];
                if !(t >= 0.0) || !t.is_finite() {
                    return f64::NEG_INFINITY;
                }
                if t == 0.0 {
                    return if *sum == 0.0 { 0.0 } else { f64::NEG_INFINITY };
                }
                sum * t.ln() - n * t - lfact
            }
            (Stats::Geometric { n, sum }, _) => {
                let p = params[0];
                if !(p > 0.0 && p <= 1.0) {
                    return f64::NEG_INFINITY;
                }
                if p == 1.0 {
                    return if *sum == 0.0 { 0.0 } else { f64::NEG_INFINITY };
                }
                n * p.ln() + sum * (1.0 - p).ln()
            }
            (Stats::Normal { n, sum, sumsq }, ModelSpec::NormalKnownVar { sigma }) => {
                let m = params[0];
                if !m.is_finite() {
                    return f64::NEG_INFINITY;
                }
                let ss = sumsq - 2.0 * m * sum + n * m * m;
                -0.5 * n * (LN_2PI + 2.0 * sigma.ln()) - ss / (2.0 * sigma * sigma)
            }
            (Stats::Binomial { n, trials, sum, lchoose }, _) => {
                let t = params[0];
                if !(0.0..=1.0).contains(&t) {
                    return f64::NEG_INFINITY;
                }
                if t == 0.0 {
                    return if *sum == 0.0 { 0.0 } else { f64::NEG_INFINITY };
                }
                if t == 1.0 {
                    return if *sum == n * trials { 0.0 } else { f64::NEG_INFINITY };
                }
                lchoose + sum * t.ln() + (n * trials - sum) * (1.0 - t).ln()
            }
            _ => self
                .spec
                .loglik(params, &self.data)
                .expect("validated at bind"),
        }
    }
}
