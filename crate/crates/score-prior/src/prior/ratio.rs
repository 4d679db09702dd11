//! Pointwise prior ratios by marching the equation between two
//! parameter values, the path a sampler takes instead of a table.

use super::ode::advance_u;
use super::{DomainKind, PriorSpec};
use crate::error::{Error, Result};

/// March u from (theta_a, u_a) to theta_b along the solution. Paths
/// that straddle the anchor of a kinked or mirrored domain are split
/// there, because the branch sign flips at the anchor. Saturation to
/// +inf passes through and means the target carries no prior mass.
fn march_between(spec: &PriorSpec, theta_a: f64, theta_b: f64, u_a: f64) -> Result<f64> {
    if theta_b == theta_a {
        return Ok(u_a);
    }
    let dir = if theta_b > theta_a { 1.0 } else { -1.0 };
    let da = theta_a - spec.anchor;
    let db = theta_b - spec.anchor;
    let straddles = (da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0);
    if matches!(spec.domain, DomainKind::PositiveHalfLine) || !straddles {
        // One branch sign covers the whole path; probe at the midpoint
        // so an endpoint sitting exactly on the anchor is harmless.
        let s = spec.branch_sign(0.5 * (theta_a + theta_b));
        return advance_u(u_a, spec.c, s * dir, (theta_b - theta_a).abs());
    }
    let s1 = spec.branch_sign(theta_a);
    let u_mid = advance_u(u_a, spec.c, s1 * -da.signum(), da.abs())?;
    let s2 = spec.branch_sign(theta_b);
    advance_u(u_mid, spec.c, s2 * db.signum(), db.abs())
}

/// Log of p(theta_to)/p(theta_from) given the cached u at theta_from,
/// together with u at theta_to for the caller's cache. A saturated
/// target yields -inf (zero mass), an out-of-domain target an error.
pub fn log_prior_ratio(
    spec: &PriorSpec,
    theta_from: f64,
    theta_to: f64,
    u_from: f64,
) -> Result<(f64, f64)> {
    if !spec.contains(theta_from) {
        return Err(Error::DomainExit { theta: theta_from });
    }
    if !spec.contains(theta_to) {
        return Err(Error::DomainExit { theta: theta_to });
    }
    if theta_to == theta_from {
        return Ok((0.0, u_from));
    }
    let u_to = march_between(spec, theta_from, theta_to, u_from)?;
    Ok((-(u_to - u_from), u_to))
}

/// u at a single point, marched out from the anchor.
pub fn u_at(spec: &PriorSpec, theta: f64) -> Result<f64> {
    if theta != spec.anchor && !spec.contains(theta) {
        return Err(Error::DomainExit { theta });
    }
    march_between(spec, spec.anchor, theta, spec.u_anchor)
}

/// Independent product of one-dimensional priors; the joint log ratio
/// is the coordinate-wise sum.
#[derive(Debug, Clone)]
pub struct ProductPrior {
    specs: Vec<PriorSpec>,
}

pub fn product_prior(specs: Vec<PriorSpec>) -> Result<ProductPrior> {
    if specs.is_empty() {
        return Err(Error::InvalidSpec(
            "product prior needs at least one coordinate".into(),
        ));
    }
    Ok(ProductPrior { specs })
}

impl ProductPrior {
    pub fn dim(&self) -> usize {
        self.specs.len()
    }

    pub fn spec(&self, j: usize) -> &PriorSpec {
        &self.specs[j]
    }

    pub fn contains(&self, coords: &[f64]) -> bool {
        coords.len() == self.specs.len()
            && coords
                .iter()
                .zip(&self.specs)
                .all(|(&t, s)| s.contains(t))
    }

    /// Joint log ratio between two coordinate vectors, with per-coordinate
    /// cached u values in and out.
    pub fn log_ratio(
        &self,
        from: &[f64],
        to: &[f64],
        u_from: &[f64],
    ) -> Result<(f64, Vec<f64>)> {
        for len in [from.len(), to.len(), u_from.len()] {
            if len != self.specs.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.specs.len(),
                    got: len,
                });
            }
        }
        let mut total = 0.0;
        let mut u_to = Vec::with_capacity(self.specs.len());
        for j in 0..self.specs.len() {
            let (r, u) = log_prior_ratio(&self.specs[j], from[j], to[j], u_from[j])?;
            total += r;
            u_to.push(u);
        }
        Ok((total, u_to))
    }
}
