//! Construction of proper objective priors as solutions of the
//! log-density equation u'' - (u')^2 / 2 = u, marched from a domain
//! anchor by a third-order Taylor scheme.
//!
//! Writing p = exp(-(u + 1)) turns the combined local score of the
//! density into the constant one wherever u solves the equation, which
//! is what makes these priors "objective": the score does not depend on
//! the parameter value. First integration gives
//!
//!   (u')^2 = c e^u - 2 (1 + u)
//!
//! and every supported domain is one choice of the constant c plus an
//! anchor condition.

mod ode;
mod ratio;
mod table;

pub use ode::{advance_u, solve_half_line_anchor, step_u, u_derivatives};
pub use ratio::{log_prior_ratio, product_prior, u_at, ProductPrior};
pub use table::{normalize, solve_u, tail_bound_check, DensityTable, UTable};

use crate::error::{Error, Result};

/// Log-density values at or above this are treated as numerically
/// infinite: exp(700) is within a factor of ten of f64::MAX.
pub const U_CAP: f64 = 700.0;

/// Largest Taylor sub-step the marcher will take.
pub const MAX_STEP: f64 = 1e-3;

/// Radicand values in [-TOL_RADICAND, 0] are clamped to zero; anything
/// lower is an error.
pub const TOL_RADICAND: f64 = 1e-12;

/// Open-domain guard: points within this distance of a boundary count
/// as outside.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// Default grid resolution for solved tables, per side of the anchor.
pub const DEFAULT_POINTS_PER_SIDE: usize = 1000;

/// Rounded half-line anchor value quoted in earlier write-ups of this
/// construction. The bisection root is 1.2564..., not 1.31; keep the
/// rounded figure available so results can be compared against sources
/// that used it.
pub const HALF_LINE_U0_QUOTED: f64 = 1.31;

/// Parameter domain the prior lives on. The variants differ in the
/// integration constant they admit and in whether the density has a
/// kink (a jump in u') at the anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    /// Theta in (0, 1) with the density peaked at `center`.
    UnitInterval { center: f64 },
    /// Theta in (0, inf), decreasing from the left edge.
    PositiveHalfLine,
    /// Theta in (-inf, inf), symmetric about the anchor with a kink there.
    RealLineSymmetric,
    /// Theta in (-inf, inf), symmetric about the anchor and smooth there;
    /// forces c = 2 (1 + u0) e^{-u0}.
    RealLineSmooth,
}

impl DomainKind {
    pub fn lower(&self) -> f64 {
        match self {
            DomainKind::UnitInterval { .. } => 0.0,
            DomainKind::PositiveHalfLine => 0.0,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn upper(&self) -> f64 {
        match self {
            DomainKind::UnitInterval { .. } => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// Strict interior test, with a small guard band at finite edges.
    pub fn contains(&self, theta: f64) -> bool {
        if !theta.is_finite() {
            return false;
        }
        let lo = self.lower();
        let hi = self.upper();
        (!lo.is_finite() || theta > lo + BOUNDARY_GUARD)
            && (!hi.is_finite() || theta < hi - BOUNDARY_GUARD)
    }

    /// Whether u' jumps sign at the anchor.
    pub fn kinked(&self) -> bool {
        matches!(
            self,
            DomainKind::UnitInterval { .. } | DomainKind::RealLineSymmetric
        )
    }
}

/// Full description of one prior: domain, integration constant, and the
/// anchor point with its u value. `solve_u` turns a spec into a grid
/// table; `log_prior_ratio` walks the same equation between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSpec {
    pub domain: DomainKind,
    pub c: f64,
    pub u_anchor: f64,
    pub anchor: f64,
}

impl PriorSpec {
    pub fn new(domain: DomainKind, c: f64, u_anchor: f64, anchor: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidSpec(format!("c must be positive, got {c}")));
        }
        if !u_anchor.is_finite() || u_anchor >= U_CAP {
            return Err(Error::InvalidSpec(format!(
                "u_anchor must be finite and below {U_CAP}, got {u_anchor}"
            )));
        }
        if !anchor.is_finite() {
            return Err(Error::InvalidSpec("anchor must be finite".into()));
        }
        match domain {
            DomainKind::UnitInterval { center } => {
                if !(center > 0.0 && center < 1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "unit interval center must lie in (0, 1), got {center}"
                    )));
                }
                if anchor != center {
                    return Err(Error::InvalidSpec(
                        "unit interval anchor must equal the center".into(),
                    ));
                }
            }
            DomainKind::PositiveHalfLine => {
                if anchor < 0.0 {
                    return Err(Error::InvalidSpec(format!(
                        "half-line anchor must be nonnegative, got {anchor}"
                    )));
                }
                // Below c = 2 the radicand goes negative somewhere on the
                // nondecreasing branch, so u' stops existing.
                if c < 2.0 {
                    return Err(Error::InvalidSpec(format!(
                        "half-line priors need c >= 2, got {c}"
                    )));
                }
            }
            DomainKind::RealLineSymmetric => {}
            DomainKind::RealLineSmooth => {
                let r = c * u_anchor.exp() - 2.0 * (1.0 + u_anchor);
                if r.abs() > 1e-9 {
                    return Err(Error::InvalidSpec(format!(
                        "smooth real-line spec needs c e^u0 = 2 (1 + u0); residual {r:e}"
                    )));
                }
            }
        }
        let spec = PriorSpec {
            domain,
            c,
            u_anchor,
            anchor,
        };
        let r = spec.radicand(u_anchor);
        if r < -TOL_RADICAND {
            return Err(Error::RadicandNegative {
                u: u_anchor,
                radicand: r,
            });
        }
        Ok(spec)
    }

    /// Prior on (0, 1) peaked at `center` with boundary steepness set by
    /// the anchor value `w` (larger w pushes more mass toward the center).
    pub fn unit_interval(center: f64, w: f64) -> Result<Self> {
        Self::new(DomainKind::UnitInterval { center }, 2.0, w, center)
    }

    /// Canonical half-line prior: c = 2, anchored at the origin with the
    /// largest u0 for which the left branch condition holds.
    pub fn half_line() -> Self {
        let u0 = solve_half_line_anchor();
        Self::new(DomainKind::PositiveHalfLine, 2.0, u0, 0.0)
            .expect("canonical half-line spec is valid")
    }

    /// Half-line prior re-anchored at an interior point. The canonical
    /// solution keeps its support width, so the density runs out roughly
    /// 0.92 units to the right of the anchor; placing the anchor near the
    /// data puts the mass where it is needed.
    pub fn half_line_at(anchor: f64) -> Result<Self> {
        Self::new(
            DomainKind::PositiveHalfLine,
            2.0,
            solve_half_line_anchor(),
            anchor,
        )
    }

    /// Half-line prior with an explicit anchor value, e.g. the rounded
    /// figure [`HALF_LINE_U0_QUOTED`].
    pub fn half_line_with(u_anchor: f64, anchor: f64) -> Result<Self> {
        Self::new(DomainKind::PositiveHalfLine, 2.0, u_anchor, anchor)
    }

    /// Symmetric real-line prior with a kink at `anchor`.
    pub fn real_line_symmetric(u_anchor: f64, anchor: f64) -> Result<Self> {
        Self::new(DomainKind::RealLineSymmetric, 2.0, u_anchor, anchor)
    }

    /// Smooth symmetric real-line prior; c is forced by u_anchor.
    pub fn real_line_smooth(u_anchor: f64, anchor: f64) -> Result<Self> {
        let c = 2.0 * (1.0 + u_anchor) * (-u_anchor).exp();
        Self::new(DomainKind::RealLineSmooth, c, u_anchor, anchor)
    }

    /// c e^u - 2 (1 + u), the square of u' on the solution.
    pub fn radicand(&self, u: f64) -> f64 {
        self.c * u.exp() - 2.0 * (1.0 + u)
    }

    /// Sign of u' strictly on one side of the anchor: -1 left / +1 right
    /// for the kinked and smooth domains, +1 everywhere on the half line.
    /// Exactly at the anchor the convention is 0.
    pub fn branch_sign(&self, theta: f64) -> f64 {
        match self.domain {
            DomainKind::PositiveHalfLine => 1.0,
            _ => {
                if theta > self.anchor {
                    1.0
                } else if theta < self.anchor {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.domain.contains(theta)
    }

    pub fn kinked(&self) -> bool {
        self.domain.kinked()
    }
}
