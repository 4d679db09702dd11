//! Conjugate reference posteriors used as comparison baselines.
//!
//! Both are exact: Gamma for the Poisson rate under the sqrt-Fisher
//! prior, Normal for a normal mean under the flat prior. No sampling
//! is needed for their summaries, but draws are available for
//! pipelines that want them.

use crate::error::{Error, Result};
use crate::numeric::mean;
use rand::Rng;
use rand_distr::Distribution;
use statrs::distribution::{ContinuousCDF, Gamma};

const Z_975: f64 = 1.959963984540054;

/// Posterior Gamma(sum + 1/2, n) for iid Poisson counts.
#[derive(Debug, Clone, Copy)]
pub struct JeffreysPoisson {
    pub shape: f64,
    pub rate: f64,
}

impl JeffreysPoisson {
    pub fn fit(data: &[f64]) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidData("need at least one count".into()));
        }
        if data.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidData("counts must be nonnegative".into()));
        }
        let sum: f64 = data.iter().sum();
        Ok(JeffreysPoisson {
            shape: sum + 0.5,
            rate: data.len() as f64,
        })
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    /// Equal-tailed 95% interval from the exact quantile function.
    pub fn interval95(&self) -> (f64, f64) {
        let g = Gamma::new(self.shape, self.rate).expect("valid by construction");
        (g.inverse_cdf(0.025), g.inverse_cdf(0.975))
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        let g = rand_distr::Gamma::new(self.shape, 1.0 / self.rate).expect("valid by construction");
        (0..n).map(|_| g.sample(rng)).collect()
    }
}

/// Posterior N(sample mean, sigma^2/n) for a normal mean with known sd.
#[derive(Debug, Clone, Copy)]
pub struct JeffreysNormalMean {
    pub center: f64,
    pub sd: f64,
}

impl JeffreysNormalMean {
    pub fn fit(data: &[f64], sigma: f64) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidData("need at least one observation".into()));
        }
        if !(sigma > 0.0) {
            return Err(Error::InvalidData(format!(
                "known sd must be positive, got {sigma}"
            )));
        }
        Ok(JeffreysNormalMean {
            center: mean(data),
            sd: sigma / (data.len() as f64).sqrt(),
        })
    }

    pub fn mean(&self) -> f64 {
        self.center
    }

    pub fn interval95(&self) -> (f64, f64) {
        (self.center - Z_975 * self.sd, self.center + Z_975 * self.sd)
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        let g = rand_distr::Normal::new(self.center, self.sd).expect("valid by construction");
        (0..n).map(|_| g.sample(rng)).collect()
    }
}
