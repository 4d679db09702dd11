//! Local scoring rules, information functionals, and the numerical
//! checks that a solved prior actually satisfies its defining identity.

use crate::error::{Error, Result};
use crate::numeric::trapezoid;
use crate::prior::{DensityTable, UTable};

/// The two local scores at one parameter value, log score and Hyvarinen
/// score, with their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreBreakdown {
    pub theta: f64,
    pub log_score: f64,
    pub hyvarinen_score: f64,
    pub total: f64,
}

/// Entropy and Fisher information of a density, and the combined
/// functional I_E + I_F / 2 the priors minimize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoReport {
    pub entropy_info: f64,
    pub fisher_info: f64,
    pub combined: f64,
}

/// Largest u value at which a 5-point stencil of spacing `h` still says
/// something about the equation: the stencil's own truncation error
/// grows like h^4 e^{3u} (constant calibrated on solved tables), and
/// beyond this level it tops the 1e-4 residual scale the checks work to.
pub fn fd_window(h: f64) -> f64 {
    (-4.0 * h.ln() - 14.5) / 3.0
}

/// 5-point central first and second derivatives at index i.
fn stencil(v: &[f64], i: usize, h: f64) -> (f64, f64) {
    let d1 = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    let d2 = (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2])
        / (12.0 * h * h);
    (d1, d2)
}

fn scores_from_logp(logp: &[f64], grid: &[f64], i: usize, h: f64) -> ScoreBreakdown {
    let (l1, l2) = stencil(logp, i, h);
    let log_score = -logp[i];
    let hyvarinen_score = l2 + 0.5 * l1 * l1;
    ScoreBreakdown {
        theta: grid[i],
        log_score,
        hyvarinen_score,
        total: log_score + hyvarinen_score,
    }
}

/// Both scores of a normalized density at theta, derivatives taken by
/// finite differences on log p. Needs two grid neighbors on each side.
pub fn score_at(density: &DensityTable, theta: f64) -> Result<ScoreBreakdown> {
    let i = density
        .nearest_index(theta)
        .ok_or(Error::NearBoundary { theta })?;
    if i < 2 || i + 2 >= density.p.len() {
        return Err(Error::NearBoundary { theta });
    }
    let logp: Vec<f64> = density.p[i - 2..=i + 2].iter().map(|&p| p.ln()).collect();
    Ok(scores_from_logp(
        &logp,
        &density.grid[i - 2..=i + 2],
        2,
        density.step,
    ))
}

/// Same scores on the unnormalized solution, log p = -(u + 1). On the
/// solution manifold the total is exactly 1; this is the form in which
/// the constant is pinned, before normalization shifts it.
pub fn score_at_unnormalized(table: &UTable, theta: f64) -> Result<ScoreBreakdown> {
    let i = table
        .nearest_index(theta)
        .ok_or(Error::NearBoundary { theta })?;
    if i < 2 || i + 2 >= table.u.len() {
        return Err(Error::NearBoundary { theta });
    }
    let logp: Vec<f64> = table.u[i - 2..=i + 2].iter().map(|&u| -(u + 1.0)).collect();
    Ok(scores_from_logp(
        &logp,
        &table.grid[i - 2..=i + 2],
        2,
        table.step,
    ))
}

/// Scores at every interior grid point with a full stencil.
pub fn score_profile(density: &DensityTable) -> Vec<ScoreBreakdown> {
    let n = density.p.len();
    if n < 5 {
        return Vec::new();
    }
    let logp: Vec<f64> = density.p.iter().map(|&p| p.ln()).collect();
    (2..n - 2)
        .map(|i| scores_from_logp(&logp, &density.grid, i, density.step))
        .collect()
}

/// Indices a residual sweep may use: full stencil inside the grid,
/// inside the stencil-validity window, and, when the derivative jumps
/// at the anchor, not straddling it (a two-sided stencil across a kink
/// estimates nothing).
fn residual_indices(table: &UTable) -> impl Iterator<Item = usize> + '_ {
    let n = table.u.len();
    let cap = fd_window(table.step);
    let kink = table.spec.kinked().then_some(table.anchor_index);
    (2..n.saturating_sub(2)).filter(move |&i| {
        if let Some(a) = kink {
            if i.abs_diff(a) <= 2 {
                return false;
            }
        }
        table.u[i - 2..=i + 2].iter().all(|&v| v <= cap)
    })
}

/// Maximum over the table of |p''/p - (p'/p)^2/2 - 1 - log p| with
/// p = e^{-(u+1)}, the defining identity of the construction. The
/// derivative estimates come from the table itself by finite
/// differences; with the analytic branch values instead, the expression
/// cancels for any u at all and would certify nothing.
pub fn score_identity_residual(table: &UTable) -> f64 {
    let h = table.step;
    residual_indices(table)
        .map(|i| {
            let (u1, u2) = stencil(&table.u, i, h);
            (0.5 * u1 * u1 - u2 + table.u[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// Maximum mismatch between (p'/p)^2 and its first-integral form,
/// i.e. between the finite-difference (u')^2 and c e^u - 2(1+u).
pub fn euler_lagrange_crosscheck(table: &UTable, c: f64) -> f64 {
    let h = table.step;
    residual_indices(table)
        .map(|i| {
            let (u1, _) = stencil(&table.u, i, h);
            let r = c * table.u[i].exp() - 2.0 * (1.0 + table.u[i]);
            (u1 * u1 - r).abs()
        })
        .fold(0.0, f64::max)
}

/// Entropy information ∫ p log p and Fisher information ∫ (p')^2 / p by
/// trapezoid quadrature; grid cells where p has underflowed contribute
/// nothing to either.
pub fn info_functionals(density: &DensityTable) -> InfoReport {
    let n = density.p.len();
    let h = density.step;
    let plogp: Vec<f64> = density
        .p
        .iter()
        .map(|&p| if p < 1e-300 { 0.0 } else { p * p.ln() })
        .collect();
    let entropy_info = trapezoid(&plogp, h);
    let mut fisher = vec![0.0; n];
    for i in 2..n.saturating_sub(2) {
        if density.p[i] < 1e-300 {
            continue;
        }
        let (p1, _) = stencil(&density.p, i, h);
        fisher[i] = p1 * p1 / density.p[i];
    }
    let fisher_info = trapezoid(&fisher, h);
    InfoReport {
        entropy_info,
        fisher_info,
        combined: entropy_info + 0.5 * fisher_info,
    }
}

/// Eigenvalues of the Lagrangian's Hessian at a point with density p
/// and slope p1: (1/p)[(2 + k^2)/2 ± √((2 + k^2)^2/4 - 1)], k = p1/p.
/// Both are strictly positive for every p > 0, which is what makes the
/// variational problem a minimum.
pub fn convexity_eigenvalues(p: f64, p1: f64) -> (f64, f64) {
    let k = p1 / p;
    let a = 0.5 * (2.0 + k * k);
    let d = (a * a - 1.0).sqrt();
    // (a - d)(a + d) = 1, so the small eigenvalue is computed as a
    // reciprocal instead of a difference that cancels for large k.
    ((a + d) / p, 1.0 / (p * (a + d)))
}
