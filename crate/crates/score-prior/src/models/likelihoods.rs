//! Log-likelihoods for the sampling models.
//!
//! All of them return -inf for parameter values outside the model's
//! support instead of an error: the one caller that produces such
//! values is the sampler, and log zero mass is exactly what it needs to
//! reject the move. Factorials go through log-gamma, so counts never
//! overflow.

use crate::numeric::logsumexp;
use statrs::function::gamma::ln_gamma;

const LN_2PI: f64 = 1.8378770664093453;

/// Poisson counts: sum of x log θ - θ - log x!. At θ = 0 the limit is
/// kept: unit mass on all-zero data, none otherwise.
pub fn loglik_poisson(theta: f64, data: &[f64]) -> f64 {
    if !(theta >= 0.0) || !theta.is_finite() {
        return f64::NEG_INFINITY;
    }
    let n = data.len() as f64;
    let (sum, lfact) = data
        .iter()
        .fold((0.0, 0.0), |(s, l), &x| (s + x, l + ln_gamma(x + 1.0)));
    if theta == 0.0 {
        return if sum == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    sum * theta.ln() - n * theta - lfact
}

/// Normal with known variance.
pub fn loglik_normal_known_var(mu: f64, data: &[f64], sigma: f64) -> f64 {
    if !(sigma > 0.0) || !mu.is_finite() {
        return f64::NEG_INFINITY;
    }
    let n = data.len() as f64;
    let ss: f64 = data.iter().map(|&x| (x - mu) * (x - mu)).sum();
    -0.5 * n * (LN_2PI + 2.0 * sigma.ln()) - ss / (2.0 * sigma * sigma)
}

/// Parameter block of the three-component normal mixture, in the flat
/// chain order (weights, means, variances).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureParams {
    pub weights: [f64; 3],
    pub means: [f64; 3],
    pub vars: [f64; 3],
}

impl MixtureParams {
    pub fn from_flat(v: &[f64]) -> Option<Self> {
        (v.len() == 9).then(|| MixtureParams {
            weights: [v[0], v[1], v[2]],
            means: [v[3], v[4], v[5]],
            vars: [v[6], v[7], v[8]],
        })
    }

    pub fn to_flat(self) -> [f64; 9] {
        let mut out = [0.0; 9];
        out[..3].copy_from_slice(&self.weights);
        out[3..6].copy_from_slice(&self.means);
        out[6..].copy_from_slice(&self.vars);
        out
    }

    /// Weights strictly inside (0,1) and summing to one, variances
    /// positive.
    pub fn valid(&self) -> bool {
        let sum: f64 = self.weights.iter().sum();
        self.weights.iter().all(|&w| w > 0.0 && w < 1.0)
            && (sum - 1.0).abs() <= 1e-9
            && self.vars.iter().all(|&v| v > 0.0)
    }
}

/// Three-component normal mixture, log-sum-exp over components per
/// observation.
pub fn loglik_mixture3(params: &MixtureParams, data: &[f64]) -> f64 {
    if !params.valid() {
        return f64::NEG_INFINITY;
    }
    let mut total = 0.0;
    let mut comp = [0.0_f64; 3];
    for &x in data {
        for i in 0..3 {
            let d = x - params.means[i];
            comp[i] = params.weights[i].ln()
                - 0.5 * (LN_2PI + params.vars[i].ln())
                - 0.5 * d * d / params.vars[i];
        }
        total += logsumexp(&comp);
    }
    total
}

/// Geometric counts starting at zero: n log φ + (Σx) log(1-φ). The
/// φ = 1 limit keeps unit mass on all-zero data.
pub fn loglik_geometric(phi: f64, data: &[f64]) -> f64 {
    if !(phi > 0.0 && phi <= 1.0) {
        return f64::NEG_INFINITY;
    }
    let n = data.len() as f64;
    let sum: f64 = data.iter().sum();
    if phi == 1.0 {
        return if sum == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    n * phi.ln() + sum * (1.0 - phi).ln()
}

/// One binomial observation of y successes in n trials. The endpoint
/// limits survive: theta = 0 carries mass only for y = 0, theta = 1
/// only for y = n.
pub fn loglik_binomial(theta: f64, y: u64, n: u64) -> f64 {
    if y > n || !(0.0..=1.0).contains(&theta) {
        return f64::NEG_INFINITY;
    }
    if theta == 0.0 {
        return if y == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if theta == 1.0 {
        return if y == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let (yf, nf) = (y as f64, n as f64);
    ln_gamma(nf + 1.0) - ln_gamma(yf + 1.0) - ln_gamma(nf - yf + 1.0)
        + yf * theta.ln()
        + (nf - yf) * (1.0 - theta).ln()
}

/// Poisson regression with log link: rate_i = exp(x_i · beta).
/// Rows of x must match beta's length; the caller checks that at bind.
pub fn loglik_poisson_regression(beta: &[f64], y: &[f64], x: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for (yi, xi) in y.iter().zip(x) {
        let eta: f64 = xi.iter().zip(beta).map(|(a, b)| a * b).sum();
        total += yi * eta - eta.exp() - ln_gamma(yi + 1.0);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn poisson_matches_arithmetic() {
        assert!((loglik_poisson(1.0, &[0.0]) - -1.0).abs() < 1e-14);
        assert!((loglik_poisson(2.5, &[2.0, 3.0]) - -2.903452990417225).abs() < 1e-13);
        assert_eq!(loglik_poisson(0.0, &[1.0]), f64::NEG_INFINITY);
        assert_eq!(loglik_poisson(0.0, &[0.0, 0.0]), 0.0);
        assert_eq!(loglik_poisson(-2.0, &[1.0]), f64::NEG_INFINITY);
    }

    #[test]
    fn poisson_mle_is_sample_mean() {
        let data = [1.0, 3.0, 2.0, 4.0, 2.5];
        let mean = 2.5;
        let at_mean = loglik_poisson(mean, &data);
        for t in [2.3, 2.4, 2.6, 2.7] {
            assert!(loglik_poisson(t, &data) < at_mean);
        }
    }

    #[test]
    fn normal_matches_arithmetic() {
        assert!((loglik_normal_known_var(0.0, &[0.0], 1.0) - -0.9189385332046727).abs() < 1e-14);
        assert!((loglik_normal_known_var(5.0, &[4.0, 6.0], 1.0) - -2.8378770664093453).abs() < 1e-14);
        assert_eq!(loglik_normal_known_var(0.0, &[0.0], -1.0), f64::NEG_INFINITY);
    }

    #[test]
    fn mixture_matches_arithmetic_and_degenerates() {
        let p = MixtureParams {
            weights: [0.25, 0.35, 0.40],
            means: [-3.5, 0.0, 2.5],
            vars: [0.5, 0.1, 1.2],
        };
        assert!((loglik_mixture3(&p, &[0.0]) - -0.7933575536357865).abs() < 1e-13);

        // Near-degenerate weights reduce to the dominant component.
        let single = MixtureParams {
            weights: [1.0 - 2e-13, 1e-13, 1e-13],
            means: [1.0, 50.0, -50.0],
            vars: [2.0, 1.0, 1.0],
        };
        let x = [0.3, 1.7, 0.9];
        let direct = loglik_normal_known_var(1.0, &x, 2.0_f64.sqrt());
        assert!((loglik_mixture3(&single, &x) - direct).abs() < 1e-9);
    }

    #[test]
    fn mixture_is_label_permutation_invariant() {
        let p = MixtureParams {
            weights: [0.25, 0.35, 0.40],
            means: [-3.5, 0.0, 2.5],
            vars: [0.5, 0.1, 1.2],
        };
        let perm = MixtureParams {
            weights: [0.40, 0.25, 0.35],
            means: [2.5, -3.5, 0.0],
            vars: [1.2, 0.5, 0.1],
        };
        let x = [-3.0, -0.2, 0.1, 2.8, 4.0];
        assert!((loglik_mixture3(&p, &x) - loglik_mixture3(&perm, &x)).abs() < 1e-12);
    }

    #[test]
    fn mixture_rejects_off_simplex() {
        let mut p = MixtureParams {
            weights: [0.5, 0.4, 0.2],
            means: [0.0; 3],
            vars: [1.0; 3],
        };
        assert_eq!(loglik_mixture3(&p, &[0.0]), f64::NEG_INFINITY);
        p.weights = [0.5, 0.3, 0.2];
        p.vars[1] = -1.0;
        assert_eq!(loglik_mixture3(&p, &[0.0]), f64::NEG_INFINITY);
    }

    #[test]
    fn geometric_matches_arithmetic() {
        assert!((loglik_geometric(0.5, &[0.0]) - 0.5_f64.ln()).abs() < 1e-14);
        assert!((loglik_geometric(0.2, &[3.0, 1.0]) - -4.11145003012504).abs() < 1e-13);
        assert_eq!(loglik_geometric(1.0, &[0.0]), 0.0);
        assert_eq!(loglik_geometric(1.0, &[1.0]), f64::NEG_INFINITY);
        assert_eq!(loglik_geometric(0.0, &[0.0]), f64::NEG_INFINITY);
        // MLE n/(n + sum): for [3,1] that is 2/6.
        let data = [3.0, 1.0];
        let at = loglik_geometric(1.0 / 3.0, &data);
        for p in [0.30, 0.36] {
            assert!(loglik_geometric(p, &data) < at);
        }
    }

    #[test]
    fn binomial_matches_arithmetic_and_symmetry() {
        assert!((loglik_binomial(0.25, 0, 1) - -0.2876820724517809).abs() < 1e-14);
        assert!((loglik_binomial(0.25, 3, 12) - -1.3543941890733384).abs() < 1e-13);
        assert_eq!(loglik_binomial(0.5, 13, 12), f64::NEG_INFINITY);
        assert_eq!(loglik_binomial(0.0, 0, 12), 0.0);
        assert_eq!(loglik_binomial(1.0, 12, 12), 0.0);
        assert_eq!(loglik_binomial(0.0, 1, 12), f64::NEG_INFINITY);
        assert_eq!(loglik_binomial(1.0, 11, 12), f64::NEG_INFINITY);
        let a = loglik_binomial(0.3, 4, 12);
        let b = loglik_binomial(0.7, 8, 12);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn regression_matches_arithmetic() {
        assert!(
            (loglik_poisson_regression(&[0.0], &[0.0], &[vec![1.0]]) - -1.0).abs() < 1e-14
        );
        assert!(
            (loglik_poisson_regression(&[1.0], &[2.0], &[vec![2.0]]) - -4.082203279490596).abs()
                < 1e-13
        );
    }

    #[test]
    fn likelihoods_match_naive_pointwise_oracles() {
        // Direct density evaluation, no log-gamma and no log-sum-exp:
        // an independent arithmetic path for moderate counts.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let theta: f64 = rng.gen_range(0.2..6.0);
            let data: Vec<f64> = (0..8).map(|_| rng.gen_range(0..12) as f64).collect();
            let naive: f64 = data
                .iter()
                .map(|&x| {
                    let fact: f64 = (1..=x as u64).map(|k| k as f64).product();
                    (theta.powf(x) * (-theta).exp() / fact).ln()
                })
                .sum();
            assert!((loglik_poisson(theta, &data) - naive).abs() < 1e-10);

            let phi: f64 = rng.gen_range(0.05..0.95);
            let naive: f64 = data
                .iter()
                .map(|&x| (phi * (1.0 - phi).powf(x)).ln())
                .sum();
            assert!((loglik_geometric(phi, &data) - naive).abs() < 1e-10);

            let mu: f64 = rng.gen_range(-3.0..3.0);
            let sigma: f64 = rng.gen_range(0.5..2.0);
            let reals: Vec<f64> = (0..8).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let naive: f64 = reals
                .iter()
                .map(|&x| {
                    ((-0.5 * (x - mu) * (x - mu) / (sigma * sigma)).exp()
                        / ((2.0 * std::f64::consts::PI).sqrt() * sigma))
                        .ln()
                })
                .sum();
            assert!((loglik_normal_known_var(mu, &reals, sigma) - naive).abs() < 1e-10);
        }
    }
}
