//! Third-order Taylor marching of u along its defining equation.
//!
//! On the solution manifold u' = ±√(c e^u − 2(1+u)), and differentiating
//! once more gives u'' = ½ c e^u − 1 and u''' = ½ c e^u u'. A single
//! Taylor step therefore only needs (u, c); the branch sign multiplies
//! the odd-order terms.

use super::{MAX_STEP, TOL_RADICAND, U_CAP};
use crate::error::{Error, Result};

/// Derivative magnitudes (|u'|, u'', |u'''|) at state (u, c).
///
/// The radicand c e^u − 2(1+u) must be nonnegative; values in
/// [-TOL_RADICAND, 0] are treated as exact zeros (the smooth anchor
/// sits there), anything lower means the state is off the manifold.
pub fn u_derivatives(u: f64, c: f64) -> Result<(f64, f64, f64)> {
    let ceu = c * u.exp();
    let r = ceu - 2.0 * (1.0 + u);
    if r < -TOL_RADICAND {
        return Err(Error::RadicandNegative { u, radicand: r });
    }
    let u1 = r.max(0.0).sqrt();
    let u2 = 0.5 * ceu - 1.0;
    Ok((u1, u2, 0.5 * ceu * u1))
}

/// One Taylor step of length `eps` in direction `sign` (+1 or -1).
///
/// States at or beyond U_CAP are saturated to +inf and stay there, so a
/// marcher can keep stepping past the blow-up point without producing
/// NaN. The flat solution u = 0, c = 2 is an exact fixed point: all
/// three derivatives vanish and the step returns 0 unchanged.
pub fn step_u(u: f64, c: f64, sign: f64, eps: f64) -> Result<f64> {
    if u.is_nan() || u >= U_CAP {
        return Ok(f64::INFINITY);
    }
    let (u1, u2, u3) = u_derivatives(u, c)?;
    if !u2.is_finite() {
        // c e^u overflowed; the state is far past any usable density.
        return Ok(f64::INFINITY);
    }
    let next = u + sign * eps * u1 + 0.5 * eps * eps * u2 + sign * eps * eps * eps / 6.0 * u3;
    if next.is_nan() || next >= U_CAP {
        Ok(f64::INFINITY)
    } else if c == 2.0 && next < 0.0 {
        // For c = 2 the flat orbit u = 0 separates the phase line, and
        // a decaying branch only lands below it through roundoff in the
        // radicand. Snap onto the fixed point instead of running away.
        Ok(0.0)
    } else {
        Ok(next)
    }
}

/// March a distance `delta` >= 0 in direction `sign`, splitting into
/// sub-steps no longer than MAX_STEP. Saturation to +inf is sticky.
pub fn advance_u(u: f64, c: f64, sign: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Ok(u);
    }
    let n = (delta / MAX_STEP).ceil() as usize;
    let sub = delta / n as f64;
    let mut cur = u;
    for _ in 0..n {
        cur = step_u(cur, c, sign, sub)?;
        if cur == f64::INFINITY {
            return Ok(cur);
        }
    }
    Ok(cur)
}

/// Anchor value u0 for the canonical half-line prior: the root of
/// (1 + 2u) e^{-u} = 1 above the maximum of the left side (which sits
/// at u = 1/2), found by bisection on [0.5, 10] to width 1e-12.
pub fn solve_half_line_anchor() -> f64 {
    let f = |u: f64| (1.0 + 2.0 * u) * (-u).exp() - 1.0;
    let (mut lo, mut hi) = (0.5_f64, 10.0_f64);
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
