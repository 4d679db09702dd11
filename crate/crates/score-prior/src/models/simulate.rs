//! Seeded data simulators, one per sampling model.
//!
//! Everything draws from a caller-supplied generator so replications
//! and parallel cells stay reproducible.

use crate::error::{Error, Result};
use crate::models::likelihoods::MixtureParams;
use rand::Rng;
use rand_distr::{Binomial, Distribution, Normal, Poisson, StandardNormal};

pub fn simulate_poisson<R: Rng + ?Sized>(theta: f64, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if theta < 0.0 || !theta.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "poisson rate must be finite and nonnegative, got {theta}"
        )));
    }
    if theta == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let dist = Poisson::new(theta)
        .map_err(|e| Error::InvalidConfig(format!("poisson rate {theta}: {e}")))?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}

pub fn simulate_normal<R: Rng + ?Sized>(
    mu: f64,
    sigma: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "normal sd must be positive, got {sigma}"
        )));
    }
    let dist = Normal::new(mu, sigma)
        .map_err(|e| Error::InvalidConfig(format!("normal({mu},{sigma}): {e}")))?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}

/// Mixture draws together with per-component tallies.
pub fn simulate_mixture3_labeled<R: Rng + ?Sized>(
    params: &MixtureParams,
    n: usize,
    rng: &mut R,
) -> Result<(Vec<f64>, [usize; 3])> {
    if !params.valid() {
        return Err(Error::SimplexViolation(params.weights.to_vec()));
    }
    let sds = params.vars.map(f64::sqrt);
    let mut out = Vec::with_capacity(n);
    let mut counts = [0usize; 3];
    for _ in 0..n {
        let u: f64 = rng.gen();
        let k = if u < params.weights[0] {
            0
        } else if u < params.weights[0] + params.weights[1] {
            1
        } else {
            2
        };
        counts[k] += 1;
        let z: f64 = StandardNormal.sample(rng);
        out.push(params.means[k] + sds[k] * z);
    }
    Ok((out, counts))
}

pub fn simulate_mixture3<R: Rng + ?Sized>(
    params: &MixtureParams,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    simulate_mixture3_labeled(params, n, rng).map(|(v, _)| v)
}

/// Geometric (support 0,1,2,...) by inversion of the survival
/// function, so one uniform per draw.
pub fn simulate_geometric<R: Rng + ?Sized>(phi: f64, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "geometric success probability must lie in (0,1), got {phi}"
        )));
    }
    let log_q = (1.0 - phi).ln();
    Ok((0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            ((1.0 - u).ln() / log_q).floor()
        })
        .collect())
}

pub fn simulate_binomial<R: Rng + ?Sized>(
    theta: f64,
    trials: u64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidConfig(format!(
            "binomial probability must lie in [0,1], got {theta}"
        )));
    }
    let dist = Binomial::new(trials, theta)
        .map_err(|e| Error::InvalidConfig(format!("binomial({trials},{theta}): {e}")))?;
    Ok((0..n).map(|_| dist.sample(rng) as f64).collect())
}

/// Covariate rows for the Poisson regression: each coordinate j drawn
/// N(beta_j, scale), independently across coordinates and rows. The
/// default scale is 1.
pub fn simulate_regression_design<R: Rng + ?Sized>(
    beta: &[f64],
    scale: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    if !(scale > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "design variance must be positive, got {scale}"
        )));
    }
    let sd = scale.sqrt();
    Ok((0..n)
        .map(|_| {
            beta.iter()
                .map(|&b| {
                    let z: f64 = StandardNormal.sample(rng);
                    b + sd * z
                })
                .collect()
        })
        .collect())
}

/// Full regression draw: design rows, then y_i ~ Poisson(exp(x_i · beta)).
pub fn simulate_poisson_regression<R: Rng + ?Sized>(
    beta: &[f64],
    design_scale: f64,
    n: usize,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let x = simulate_regression_design(beta, design_scale, n, rng)?;
    let mut y = Vec::with_capacity(n);
    for row in &x {
        let eta: f64 = row.iter().zip(beta).map(|(a, b)| a * b).sum();
        let rate = eta.exp();
        if !rate.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "regression rate overflowed at linear predictor {eta}"
            )));
        }
        y.extend(simulate_poisson(rate, 1, rng)?);
    }
    Ok((y, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::mean;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_rate_gives_all_zeros() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws = simulate_poisson(0.0, 50, &mut rng).unwrap();
        assert!(draws.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn poisson_mean_is_measure_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let theta = 3.7;
        let n = 1_000_000;
        let draws = simulate_poisson(theta, n, &mut rng).unwrap();
        let band = 3.0 * (theta / n as f64).sqrt();
        assert!((mean(&draws) - theta).abs() < band);
        assert!(draws.iter().all(|&x| x >= 0.0 && x.fract() == 0.0));
    }

    #[test]
    fn geometric_mean_is_measure_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let phi = 0.3_f64;
        let n = 1_000_000;
        let draws = simulate_geometric(phi, n, &mut rng).unwrap();
        let m = (1.0 - phi) / phi;
        let sd = (1.0 - phi).sqrt() / phi;
        assert!((mean(&draws) - m).abs() < 3.0 * sd / (n as f64).sqrt());
        assert!(draws.iter().all(|&x| x >= 0.0 && x.fract() == 0.0));
    }

    #[test]
    fn mixture_proportions_match_weights() {
        let params = MixtureParams {
            weights: [0.25, 0.35, 0.40],
            means: [-3.5, 0.0, 2.5],
            vars: [0.5, 0.1, 1.2],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let n = 100_000;
        let (_, counts) = simulate_mixture3_labeled(&params, n, &mut rng).unwrap();
        for (c, w) in counts.iter().zip(params.weights) {
            assert!((*c as f64 / n as f64 - w).abs() < 0.01);
        }
    }

    #[test]
    fn binomial_draws_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let draws = simulate_binomial(0.25, 12, 10_000, &mut rng).unwrap();
        assert!(draws.iter().all(|&x| (0.0..=12.0).contains(&x)));
        assert!((mean(&draws) - 3.0).abs() < 0.06);
    }

    #[test]
    fn regression_draw_is_seed_reproducible() {
        let beta = [-0.8, -0.5, 0.0, 0.5, 0.8];
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        let (ya, xa) = simulate_poisson_regression(&beta, 1.0, 40, &mut a).unwrap();
        let (yb, xb) = simulate_poisson_regression(&beta, 1.0, 40, &mut b).unwrap();
        assert_eq!(ya, yb);
        assert_eq!(xa, xb);
        assert_eq!(xa.len(), 40);
        assert!(xa.iter().all(|r| r.len() == 5));
    }

    #[test]
    fn design_coordinates_center_on_beta() {
        let beta = [-0.8, 0.8];
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x = simulate_regression_design(&beta, 1.0, 200_000, &mut rng).unwrap();
        for j in 0..2 {
            let col: Vec<f64> = x.iter().map(|r| r[j]).collect();
            assert!((mean(&col) - beta[j]).abs() < 0.01);
        }
    }

    #[test]
    fn invalid_params_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(simulate_poisson(-1.0, 3, &mut rng).is_err());
        assert!(simulate_normal(0.0, 0.0, 3, &mut rng).is_err());
        assert!(simulate_geometric(1.0, 3, &mut rng).is_err());
        assert!(simulate_binomial(1.5, 5, 3, &mut rng).is_err());
        assert!(simulate_regression_design(&[0.0], -1.0, 3, &mut rng).is_err());
    }
}
