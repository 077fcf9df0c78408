//! The connection coefficient `φ(z)` of whole-line problems.
//!
//! The solution normalized as `e^{zx}` at `-∞` is carried in the scaled
//! variables `f̃ = f e^{-zx}` and `p = f̃' + 2z f̃`, which obey
//! `p' = V f̃`, `f̃' = p - 2z f̃`. Then `φ(z) = p(+∞) = 2z + ∫ V f̃`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::locator::{winding_number, Rect, WindingOptions};
use crate::ode::{integrate_with_guard, OdeOptions};
use crate::potential::Domain;
use crate::problem::{require_right_half_plane, Problem};
use crate::quadrature::integrate_complex;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiEvaluation {
    pub z: Complex64,
    /// Limit of `C₁(x)` as `x → +∞`.
    pub c1_inf: Complex64,
    /// Limit of `C₂(x)` as `x → +∞`.
    pub c2_inf: Complex64,
    pub phi: Complex64,
    pub f_tilde_sup: f64,
    /// Integration interval `[-left, right]`.
    pub left: f64,
    pub right: f64,
}

const OVERFLOW: f64 = 1e150;

/// `|z| / (|z| - ‖V‖₁)` when `|z| > ‖V‖₁`.
pub fn f_tilde_bound(z: Complex64, l1: f64) -> Option<f64> {
    let r = z.norm();
    (r > l1).then(|| r / (r - l1))
}

fn cutoff(prob: &Problem, sign: f64) -> Result<f64> {
    let tol = prob.tol.decay;
    let ok = |t: f64| prob.potential.eval_shifted_real(sign * t).norm() <= tol;
    let step = 0.25;
    let mut t: f64 = 0.0;
    while t <= prob.tol.x_cap {
        if ok(t) && [1.25 * t + 1.0, 1.5 * t + 2.0, 2.0 * t + 4.0].iter().all(|&u| ok(u)) {
            let (mut lo, mut hi) = ((t - step).max(0.0), t);
            if t > 0.0 && !ok(lo) {
                for _ in 0..30 {
                    let mid = 0.5 * (lo + hi);
                    if ok(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
            }
            return Ok(hi);
        }
        t += step;
    }
    Err(Error::DecayViolation {
        cutoff: prob.tol.x_cap,
        residual: prob.potential.eval_shifted_real(sign * prob.tol.x_cap).norm(),
    })
}

fn tail(prob: &Problem, from: f64, sign: f64) -> Result<Complex64> {
    let v = |t: f64| prob.potential.eval_shifted_real(sign * t);
    Ok(integrate_complex(v, from, 2.0 * from + 10.0, 1e-17, 400)?.0)
}

/// Evaluates `φ(z)` for a whole-line problem.
pub fn phi(prob: &Problem, z: Complex64) -> Result<PhiEvaluation> {
    if prob.domain != Domain::WholeLine {
        return Err(Error::Unsupported("phi is defined for whole-line problems".into()));
    }
    require_right_half_plane(z)?;
    let pot = &prob.potential;
    if pot.v_infinity() != Complex64::new(0.0, 0.0) {
        return Err(Error::Unsupported("phi requires V to vanish at infinity".into()));
    }
    let left = cutoff(prob, -1.0)?;
    let right = cutoff(prob, 1.0)?;
    let two_z = 2.0 * z;
    let mut f_t = Complex64::new(1.0, 0.0);
    let mut p = two_z + tail(prob, left, -1.0)?;
    let mut sup = f_t.norm();

    let mut knots = vec![-left];
    let mut bps: Vec<f64> = pot.breakpoints().iter().flat_map(|&b| [-b, b]).filter(|b| b.abs() < left.max(right)).collect();
    bps.sort_by(f64::total_cmp);
    knots.extend(bps.into_iter().filter(|&b| b > -left && b < right));
    knots.push(right);

    let opts = OdeOptions::new(prob.tol.ode).with_h_max(0.5);
    for w in knots.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let mid = 0.5 * (w[0] + w[1]);
        let rhs = |x: f64, y: &[Complex64; 2]| {
            // one-sided values at the knots
            let xe = x + (mid - x) * 1e-13;
            [pot.eval_real(xe) * y[1], y[0] - two_z * y[1]]
        };
        let traj = integrate_with_guard(rhs, (w[0], w[1]), [p, f_t], &opts, |_, y| {
            let m = y[1].norm();
            sup = sup.max(m);
            (m > OVERFLOW || !m.is_finite()).then(|| Error::NonFinite(format!("f̃ overflow at z = {z}")))
        })?;
        let end = traj.end().expect("non-empty span");
        p = end[0];
        f_t = end[1];
    }
    let phi = p + f_t * tail(prob, right, 1.0)?;
    // beyond the cutoff f = A e^{zx} + B e^{-zx} with A = φ/2z; B is only
    // resolved to the integration error times e^{2zx}
    let grow = phi / two_z;
    let decay_amp = (f_t - grow) * (two_z * right).exp();
    let c1 = z * (grow - decay_amp);
    let c2 = grow + decay_amp;
    Ok(PhiEvaluation {
        z,
        c1_inf: c1,
        c2_inf: c2,
        phi,
        f_tilde_sup: sup,
        left,
        right,
    })
}

/// Number of zeros of `φ` inside `rect`, which must lie in `Re z > 0`.
pub fn count_zeros(prob: &Problem, rect: &Rect) -> Result<i64> {
    if rect.re_min <= 0.0 {
        return Err(Error::InvalidParameter("rectangle must lie in Re z > 0".into()));
    }
    winding_number(|z| phi(prob, z).map(|e| e.phi), rect, &WindingOptions::default())
}
