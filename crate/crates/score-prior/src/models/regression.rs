//! Poisson-regression maximum likelihood via iteratively reweighted
//! least squares. Dimensions stay small (k <= 20), so the normal
//! equations are solved with a dense Cholesky factorization.

use crate::error::{Error, Result};
use crate::models::likelihoods::loglik_poisson_regression;

/// Solve A b = rhs for symmetric positive definite A (lower triangle
/// is enough). A is consumed as scratch.
fn cholesky_solve(a: &mut [Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let k = rhs.len();
    for j in 0..k {
        let mut d = a[j][j];
        for l in 0..j {
            d -= a[j][l] * a[j][l];
        }
        if !(d > 0.0) {
            return Err(Error::InvalidData(
                "normal equations are not positive definite; design may be rank-deficient".into(),
            ));
        }
        a[j][j] = d.sqrt();
        for i in (j + 1)..k {
            let mut s = a[i][j];
            for l in 0..j {
                s -= a[i][l] * a[j][l];
            }
            a[i][j] = s / a[j][j];
        }
    }
    // Forward then back substitution.
    let mut y = rhs.to_vec();
    for i in 0..k {
        for l in 0..i {
            y[i] -= a[i][l] * y[l];
        }
        y[i] /= a[i][i];
    }
    for i in (0..k).rev() {
        for l in (i + 1)..k {
            y[i] -= a[l][i] * y[l];
        }
        y[i] /= a[i][i];
    }
    Ok(y)
}

/// MLE of beta for y_i ~ Poisson(exp(x_i . beta)).
///
/// Newton steps with step-halving when a step would lower the
/// likelihood; converges quadratically near the optimum.
pub fn poisson_regression_mle(y: &[f64], x: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = y.len();
    if n == 0 || x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n.max(1),
            got: x.len(),
        });
    }
    let k = x[0].len();
    if k == 0 || x.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidData("covariate rows must share a positive length".into()));
    }

    let mut beta = vec![0.0; k];
    let mut ll = loglik_poisson_regression(&beta, y, x);
    for _ in 0..200 {
        // Score and Fisher information at the current beta.
        let mut grad = vec![0.0; k];
        let mut info = vec![vec![0.0; k]; k];
        for (yi, xi) in y.iter().zip(x) {
            let eta: f64 = xi.iter().zip(&beta).map(|(a, b)| a * b).sum();
            if eta > 700.0 {
                return Err(Error::InvalidData(
                    "linear predictor overflowed during fitting".into(),
                ));
            }
            let w = eta.exp();
            let r = yi - w;
            for j in 0..k {
                grad[j] += r * xi[j];
                for l in 0..=j {
                    info[j][l] += w * xi[j] * xi[l];
                }
            }
        }
        let step = cholesky_solve(&mut info, &grad)?;

        let mut scale = 1.0;
        let mut next = beta.clone();
        let mut next_ll;
        loop {
            for j in 0..k {
                next[j] = beta[j] + scale * step[j];
            }
            next_ll = loglik_poisson_regression(&next, y, x);
            if next_ll.is_finite() && next_ll >= ll - 1e-12 {
                break;
            }
            scale *= 0.5;
            if scale < 1e-12 {
                return Err(Error::InvalidData("fitting failed to make progress".into()));
            }
        }

        let moved = step.iter().map(|s| (scale * s).abs()).fold(0.0, f64::max);
        beta = next;
        ll = next_ll;
        if moved < 1e-10 {
            return Ok(beta);
        }
    }
    Err(Error::InvalidData("fitting did not converge in 200 iterations".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::simulate::simulate_poisson_regression;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn intercept_only_mle_is_log_mean() {
        // Single constant covariate: beta solves exp(beta) = mean(y).
        let y = [2.0, 4.0, 3.0, 1.0, 5.0];
        let x: Vec<Vec<f64>> = y.iter().map(|_| vec![1.0]).collect();
        let beta = poisson_regression_mle(&y, &x).unwrap();
        assert!((beta[0] - 3.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn gradient_vanishes_at_mle() {
        let truth = [-0.8, -0.5, 0.0, 0.5, 0.8];
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let (y, x) = simulate_poisson_regression(&truth, 1.0, 400, &mut rng).unwrap();
        let beta = poisson_regression_mle(&y, &x).unwrap();

        let h = 1e-6;
        for j in 0..truth.len() {
            let mut up = beta.clone();
            let mut dn = beta.clone();
            up[j] += h;
            dn[j] -= h;
            let g = (loglik_poisson_regression(&up, &y, &x)
                - loglik_poisson_regression(&dn, &y, &x))
                / (2.0 * h);
            assert!(g.abs() < 1e-3, "coordinate {j} gradient {g}");
        }
        // And the fit should sit near the generating coefficients.
        for j in 0..truth.len() {
            assert!((beta[j] - truth[j]).abs() < 0.2, "coordinate {j}: {}", beta[j]);
        }
    }

    #[test]
    fn mle_beats_truth_on_likelihood() {
        let truth = [0.3, -0.4];
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let (y, x) = simulate_poisson_regression(&truth, 1.0, 200, &mut rng).unwrap();
        let beta = poisson_regression_mle(&y, &x).unwrap();
        assert!(
            loglik_poisson_regression(&beta, &y, &x)
                >= loglik_poisson_regression(&truth, &y, &x)
        );
    }

    #[test]
    fn rank_deficient_design_errors() {
        let y = [1.0, 2.0, 3.0];
        let x = vec![vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]];
        assert!(poisson_regression_mle(&y, &x).is_err());
    }

    #[test]
    fn shape_mismatches_error() {
        assert!(poisson_regression_mle(&[1.0], &[]).is_err());
        assert!(poisson_regression_mle(&[], &[]).is_err());
        let ragged = vec![vec![1.0], vec![1.0, 2.0]];
        assert!(poisson_regression_mle(&[1.0, 2.0], &ragged).is_err());
    }
}
