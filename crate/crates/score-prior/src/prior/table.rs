//! Solved grid tables and their normalized densities.

use super::ode::step_u;
use super::{DomainKind, PriorSpec, U_CAP};
use crate::error::{Error, Result};
use crate::numeric::{log_trapezoid_exp, trapezoid};

/// Grid points whose computed position falls within this distance of a
/// finite boundary are snapped onto it, so aligned grids include the
/// endpoint instead of stopping one float of dust short.
const SNAP: f64 = 1e-9;

/// Tabulated solution u(θ) on a uniform grid.
///
/// The grid only holds points where u stayed at or below `u_cap`; the
/// prior is zero beyond the last stored point. `normalizer_log` is the
/// log of the trapezoid integral of e^{-u} over the stored grid, kept
/// here so normalization is a lookup.
#[derive(Debug, Clone)]
pub struct UTable {
    pub spec: PriorSpec,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub step: f64,
    pub u_cap: f64,
    pub anchor_index: usize,
    pub normalizer_log: f64,
}

/// Normalized density on the same grid as the table it came from.
#[derive(Debug, Clone)]
pub struct DensityTable {
    pub grid: Vec<f64>,
    pub p: Vec<f64>,
    pub log_z: f64,
    pub step: f64,
}

/// March one side of the anchor: up to `n` whole steps of `h` in grid
/// direction `dir`, stopping at domain edges (with the snap rule) or
/// when u blows past the cap. Returns (theta, u) pairs nearest-first.
fn march_side(spec: &PriorSpec, dir: f64, h: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    // Branch sign is constant strictly on one side; probe half a step out.
    let branch = spec.branch_sign(spec.anchor + dir * 0.5 * h);
    let combined = branch * dir;
    let lo = spec.domain.lower();
    let hi = spec.domain.upper();
    let mut out = Vec::new();
    let mut u = spec.u_anchor;
    for k in 1..=n {
        u = step_u(u, spec.c, combined, h)?;
        if !u.is_finite() {
            break;
        }
        let mut theta = spec.anchor + dir * k as f64 * h;
        let mut last = false;
        if lo.is_finite() && theta - lo < SNAP {
            if lo - theta > SNAP {
                break;
            }
            theta = lo;
            last = true;
        }
        if hi.is_finite() && hi - theta < SNAP {
            if theta - hi > SNAP {
                break;
            }
            theta = hi;
            last = true;
        }
        out.push((theta, u));
        if last {
            break;
        }
    }
    Ok(out)
}

/// Solve the equation outward from the anchor on a uniform grid with
/// `n_points` steps of size half_width / n_points per side. Half-line
/// specs march left down the decaying branch until they reach zero (for
/// the canonical anchor-at-zero spec that side is empty); the real-line
/// domains are solved on the right and mirrored, which makes the stored
/// symmetry exact rather than approximate.
pub fn solve_u(spec: &PriorSpec, half_width: f64, n_points: usize) -> Result<UTable> {
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "half_width must be positive and finite, got {half_width}"
        )));
    }
    if n_points < 2 {
        return Err(Error::InvalidSpec(format!(
            "need at least 2 grid points per side, got {n_points}"
        )));
    }
    let h = half_width / n_points as f64;

    let right = march_side(spec, 1.0, h, n_points)?;
    let left: Vec<(f64, f64)> = match spec.domain {
        DomainKind::PositiveHalfLine | DomainKind::UnitInterval { .. } => {
            march_side(spec, -1.0, h, n_points)?
        }
        // Mirror of the right side; u(anchor - d) = u(anchor + d).
        DomainKind::RealLineSymmetric | DomainKind::RealLineSmooth => right
            .iter()
            .enumerate()
            .map(|(i, &(_, u))| (spec.anchor - (i + 1) as f64 * h, u))
            .collect(),
    };

    let mut grid = Vec::with_capacity(left.len() + 1 + right.len());
    let mut u = Vec::with_capacity(grid.capacity());
    for &(t, v) in left.iter().rev() {
        grid.push(t);
        u.push(v);
    }
    let anchor_index = grid.len();
    grid.push(spec.anchor);
    u.push(spec.u_anchor);
    for &(t, v) in &right {
        grid.push(t);
        u.push(v);
    }

    let neg_u: Vec<f64> = u.iter().map(|&v| -v).collect();
    let normalizer_log = log_trapezoid_exp(&neg_u, h);

    Ok(UTable {
        spec: *spec,
        grid,
        u,
        step: h,
        u_cap: U_CAP,
        anchor_index,
        normalizer_log,
    })
}

/// Turn a solved table into the normalized density p = e^{-u - logZ}.
pub fn normalize(table: &UTable) -> Result<DensityTable> {
    if !table.normalizer_log.is_finite() {
        return Err(Error::DegenerateMass);
    }
    let p = table
        .u
        .iter()
        .map(|&v| (-v - table.normalizer_log).exp())
        .collect();
    Ok(DensityTable {
        grid: table.grid.clone(),
        p,
        log_z: table.normalizer_log,
        step: table.step,
    })
}

/// Verify the exponential tail bound p(θ) ≤ p(0) e^{-eps_lower·θ} at
/// every stored grid point, with θ measured from the first point. The
/// caller supplies eps_lower; on the canonical half line u(0) itself is
/// a valid choice because e^u - 1 - u ≥ u(0)²/2 along the branch.
pub fn tail_bound_check(table: &UTable, p0: f64, eps_lower: f64) -> bool {
    let ln_p0 = p0.ln();
    let t0 = table.grid[0];
    table
        .grid
        .iter()
        .zip(&table.u)
        .all(|(&t, &u)| -u <= ln_p0 - eps_lower * (t - t0) + 1e-9)
}

impl UTable {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Index of the grid point nearest theta, if theta lies within half
    /// a step of the grid.
    pub fn nearest_index(&self, theta: f64) -> Option<usize> {
        if self.grid.is_empty() {
            return None;
        }
        let k = ((theta - self.grid[0]) / self.step).round();
        if k < 0.0 || k >= self.grid.len() as f64 {
            return None;
        }
        let i = k as usize;
        ((self.grid[i] - theta).abs() <= 0.5 * self.step).then_some(i)
    }
}

impl DensityTable {
    /// Uniform density on (0, 1): n+1 equally spaced points, p = 1.
    pub fn uniform_unit(n: usize) -> Self {
        assert!(n >= 2);
        let h = 1.0 / n as f64;
        DensityTable {
            grid: (0..=n).map(|k| k as f64 * h).collect(),
            p: vec![1.0; n + 1],
            log_z: 0.0,
            step: h,
        }
    }

    /// Trapezoid mean of the density.
    pub fn mean(&self) -> f64 {
        let tp: Vec<f64> = self.grid.iter().zip(&self.p).map(|(&t, &p)| t * p).collect();
        trapezoid(&tp, self.step)
    }

    /// Index of the grid point nearest theta, if theta lies within half
    /// a step of the grid.
    pub fn nearest_index(&self, theta: f64) -> Option<usize> {
        if self.grid.is_empty() {
            return None;
        }
        let first = self.grid[0];
        let k = ((theta - first) / self.step).round();
        if k < 0.0 || k >= self.grid.len() as f64 {
            return None;
        }
        let i = k as usize;
        ((self.grid[i] - theta).abs() <= 0.5 * self.step).then_some(i)
    }
}
