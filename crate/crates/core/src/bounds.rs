//! Enclosures for eigenvalues and resonances derived from suprema of the
//! potential along rotated rays, plus thresholds and norm bounds.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Domain, Potential};

/// Which construction produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Intersection of neighbourhoods `e^{-iθ}ℝ⁺ + B(0, c(θ))`.
    RayBall,
    /// Half-planes `x sin θ + y cos θ ≤ a(θ)`.
    HalfPlane,
    /// Sectors around `e^{-iθ}ℝ⁺` widened by balls.
    SectorBall,
    /// `|λ| ≤ ‖V‖₁² / 4`.
    NormQuarter,
    /// `|λ| ≤ (9/4) ‖V‖₁²`.
    NormNineQuarters,
    Envelope,
    Threshold,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::RayBall => "ray-ball",
            Provenance::HalfPlane => "half-plane",
            Provenance::SectorBall => "sector-ball",
            Provenance::NormQuarter => "norm-quarter",
            Provenance::NormNineQuarters => "norm-nine-quarters",
            Provenance::Envelope => "envelope",
            Provenance::Threshold => "threshold",
        })
    }
}

/// Sector half-width `γ` and ball radius `β` attached to one rotation angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorParams {
    pub theta: f64,
    pub gamma: f64,
    pub beta: f64,
}

/// A convex enclosure sampled on a grid of rotation angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBound {
    pub provenance: Provenance,
    pub theta_grid: Vec<f64>,
    /// `c(θ)` or `a(θ)` per grid angle; `+∞` where the supremum is unbounded.
    pub values: Vec<f64>,
    pub sectors: Vec<SectorParams>,
}

/// Grid `θ_k = k α / n`, `k = 0..=n`.
pub fn theta_grid(alpha: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|k| alpha * k as f64 / n as f64).collect()
}

fn sup_or_infinite(r: Result<f64>) -> Result<f64> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::Unbounded { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Distance from `w` to the ray `t u`, `t ≥ 0`, for a unit `u`.
fn ray_distance(w: Complex64, u: Complex64) -> f64 {
    let proj = w * u.conj();
    if proj.re <= 0.0 {
        w.norm()
    } else {
        proj.im.abs()
    }
}

impl RegionBound {
    /// Samples `c(θ) = sup |V(e^{iθ/2} v)|` on `n + 1` angles in `[0, α]`.
    pub fn ray_ball(p: &Potential, n: usize, tol: f64) -> Result<Self> {
        let grid = theta_grid(p.analytic_sector_alpha(), n);
        let values = grid
            .iter()
            .map(|&t| sup_or_infinite(p.sup_norm_rotated(t, tol)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RegionBound {
            provenance: Provenance::RayBall,
            theta_grid: grid,
            values,
            sectors: Vec::new(),
        })
    }

    /// Samples `a(θ)` on `n + 1` angles in `[0, α]`.
    pub fn half_planes(p: &Potential, n: usize, tol: f64) -> Result<Self> {
        let grid = theta_grid(p.analytic_sector_alpha(), n);
        let values = grid
            .iter()
            .map(|&t| sup_or_infinite(p.ray_sup_a(t, tol)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RegionBound {
            provenance: Provenance::HalfPlane,
            theta_grid: grid,
            values,
            sectors: Vec::new(),
        })
    }

    /// Sector-plus-ball sets from caller-supplied constants.
    pub fn sector_balls(params: Vec<SectorParams>) -> Result<Self> {
        for s in &params {
            if !(0.0..1.0).contains(&s.gamma) || !(s.beta >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "need 0 <= gamma < 1 and beta >= 0, got gamma = {}, beta = {}",
                    s.gamma, s.beta
                )));
            }
        }
        Ok(RegionBound {
            provenance: Provenance::SectorBall,
            theta_grid: params.iter().map(|s| s.theta).collect(),
            values: params.iter().map(|s| s.beta).collect(),
            sectors: params,
        })
    }

    /// Whether `λ` satisfies every sampled constraint within `tol`.
    pub fn contains(&self, lambda: Complex64, tol: f64) -> bool {
        match self.provenance {
            Provenance::RayBall => self.theta_grid.iter().zip(&self.values).all(|(&t, &c)| {
                ray_distance(lambda, Complex64::from_polar(1.0, -t)) <= c + tol
            }),
            Provenance::HalfPlane => self
                .theta_grid
                .iter()
                .zip(&self.values)
                .all(|(&t, &a)| lambda.re * t.sin() + lambda.im * t.cos() <= a + tol),
            Provenance::SectorBall => self.sectors.iter().all(|s| sector_distance(lambda, s) <= s.beta + tol),
            _ => true,
        }
    }
}

/// Distance from `w` to the closed sector `|arg w + θ| ≤ arcsin γ`.
fn sector_distance(w: Complex64, s: &SectorParams) -> f64 {
    if w.norm() == 0.0 {
        return 0.0;
    }
    let half = s.gamma.asin();
    let rel = (w * Complex64::from_polar(1.0, s.theta)).arg();
    if rel.abs() <= half {
        return 0.0;
    }
    let lo = Complex64::from_polar(1.0, -s.theta - half);
    let hi = Complex64::from_polar(1.0, -s.theta + half);
    ray_distance(w, lo).min(ray_distance(w, hi))
}

/// Membership in `∩_θ {e^{-iθ}ℝ⁺ + B(0, c(θ))}` on a 64-interval grid.
pub fn region_ray_ball(p: &Potential, lambda: Complex64, tol: f64) -> Result<bool> {
    Ok(RegionBound::ray_ball(p, 64, tol)?.contains(lambda, tol))
}

/// Membership in `∩_θ {x sin θ + y cos θ ≤ a(θ)}` on a 64-interval grid.
pub fn region_half_planes(p: &Potential, lambda: Complex64, tol: f64) -> Result<bool> {
    Ok(RegionBound::half_planes(p, 64, tol)?.contains(lambda, tol))
}

pub fn region_sector_balls(params: &[SectorParams], lambda: Complex64, tol: f64) -> Result<bool> {
    Ok(RegionBound::sector_balls(params.to_vec())?.contains(lambda, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub theta: f64,
    pub a_theta: f64,
    pub a_prime: f64,
    pub x: f64,
    pub y: f64,
}

/// Boundary of the resonance region together with its tip coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePolyline {
    pub points: Vec<EnvelopePoint>,
    /// `max (V(x) + x V'(x)/2)`.
    pub a1: f64,
    /// Least-squares quadratic coefficient of `a(θ) - a₁θ` on `(0, 0.1]`.
    pub a2: f64,
    /// `max V(x)`.
    pub m: f64,
}

impl EnvelopePolyline {
    /// `min_θ (a(θ) - x sin θ - y cos θ)`; non-negative inside the region.
    pub fn margin(&self, lambda: Complex64) -> f64 {
        self.points
            .iter()
            .map(|p| p.a_theta - lambda.re * p.theta.sin() - lambda.im * p.theta.cos())
            .fold(f64::INFINITY, f64::min)
    }

    /// Cross products of successive boundary edges.
    pub fn turns(&self) -> Vec<f64> {
        self.points
            .windows(3)
            .map(|w| {
                let (ax, ay) = (w[1].x - w[0].x, w[1].y - w[0].y);
                let (bx, by) = (w[2].x - w[1].x, w[2].y - w[1].y);
                ax * by - ay * bx
            })
            .collect()
    }

    /// Whether every turn has the same orientation up to `tol`.
    pub fn is_convex(&self, tol: f64) -> bool {
        let t = self.turns();
        t.iter().all(|&c| c <= tol) || t.iter().all(|&c| c >= -tol)
    }

    /// Tip parabola `y = -(x - a₁)² / (4 a₂)`, when `a₂ > 0`.
    pub fn tip(&self, x: f64) -> Option<f64> {
        (self.a2 > 1e-8).then(|| -(x - self.a1).powi(2) / (4.0 * self.a2))
    }
}

/// Largest violation of midpoint convexity in a sampled `a(θ)` table.
pub fn convexity_defect(values: &[f64]) -> f64 {
    values
        .windows(3)
        .map(|w| 0.5 * (w[0] + w[2]) - w[1])
        .fold(0.0_f64, |acc, d| acc.max(-d))
}

/// Boundary of `∩_θ {x sin θ + y cos θ ≤ a(θ)}` traced with
/// `x = a sin θ + a' cos θ`, `y = a cos θ - a' sin θ` on `n` angles in
/// `[0, α)`.
pub fn envelope(p: &Potential, n: usize, tol: f64) -> Result<EnvelopePolyline> {
    let alpha = p.analytic_sector_alpha();
    let h = tol.cbrt().clamp(1e-5, 1e-2);
    let a = |t: f64| p.ray_sup_a(t, tol);
    let n = n.max(2);
    let mut thetas: Vec<f64> = (0..n).map(|k| alpha * k as f64 / n as f64).collect();
    thetas.retain(|&t| t < alpha);
    let mut points = Vec::with_capacity(thetas.len());
    let mut values = Vec::with_capacity(thetas.len());
    for &t in &thetas {
        let at = match a(t) {
            Ok(v) => v,
            Err(Error::Unbounded { .. }) => break,
            Err(e) => return Err(e),
        };
        let d = if t - h < 0.0 {
            (-3.0 * at + 4.0 * a(t + h)? - a(t + 2.0 * h)?) / (2.0 * h)
        } else if t + h >= alpha {
            (3.0 * at - 4.0 * a(t - h)? + a(t - 2.0 * h)?) / (2.0 * h)
        } else {
            (a(t + h)? - a(t - h)?) / (2.0 * h)
        };
        values.push(at);
        points.push(EnvelopePoint {
            theta: t,
            a_theta: at,
            a_prime: d,
            x: at * t.sin() + d * t.cos(),
            y: at * t.cos() - d * t.sin(),
        });
    }
    let defect = convexity_defect(&values);
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if defect > 1e3 * tol * scale {
        return Err(Error::NonConvergence { tol: defect, budget: values.len() });
    }
    let a1 = p.virial_max(tol)?;
    let m = p.real_max(tol)?;
    let a2 = fit_quadratic(a, a1, alpha)?;
    Ok(EnvelopePolyline { points, a1, a2, m })
}

fn fit_quadratic<F: Fn(f64) -> Result<f64>>(a: F, a1: f64, alpha: f64) -> Result<f64> {
    let top = 0.1_f64.min(0.5 * alpha);
    let (mut num, mut den) = (0.0, 0.0);
    for k in 1..=20 {
        let t = top * k as f64 / 20.0;
        let t2 = t * t;
        num += (a(t)? - a1 * t) * t2;
        den += t2 * t2;
    }
    Ok(num / den)
}

/// A real `γ` with `Re λ ≤ γ` for every resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// Sum of absolute mixture weights, when `V` is a finite mixture.
    pub mixture: Option<f64>,
    /// `a(π/2)`, when the sector allows it and the supremum is finite.
    pub quarter_turn: Option<f64>,
}

impl Threshold {
    pub fn value(&self) -> Option<f64> {
        match (self.mixture, self.quarter_turn) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

pub fn threshold(p: &Potential, tol: f64) -> Result<Threshold> {
    let mixture = p.mixture().map(|m| m.weights.iter().map(|w| w.abs()).sum());
    let quarter_turn = if p.analytic_sector_alpha() >= FRAC_PI_2 - 1e-12 && p.is_analytic() {
        match p.ray_sup_a(FRAC_PI_2.min(p.analytic_sector_alpha()), tol) {
            Ok(v) => Some(v),
            Err(Error::Unbounded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(Threshold { mixture, quarter_turn })
}

/// Verdicts of the two norm bounds for a whole-line eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBoundCheck {
    pub l1: f64,
    pub quarter_bound: f64,
    pub nine_quarters_bound: f64,
    /// `None` for `λ` on the positive real axis, where the bound makes no claim.
    pub quarter: Option<bool>,
    pub nine_quarters: bool,
}

pub fn check_norm_bounds(p: &Potential, lambda: Complex64, tol: f64) -> Result<NormBoundCheck> {
    let l1 = p.l1_norm(Domain::WholeLine, tol)?;
    Ok(norm_bounds_from_l1(l1, lambda, tol))
}

/// As [`check_norm_bounds`] with `‖V‖₁` already known.
pub fn norm_bounds_from_l1(l1: f64, lambda: Complex64, tol: f64) -> NormBoundCheck {
    let quarter_bound = 0.25 * l1 * l1;
    let nine_quarters_bound = 2.25 * l1 * l1;
    let on_positive_axis = lambda.im == 0.0 && lambda.re > 0.0;
    NormBoundCheck {
        l1,
        quarter_bound,
        nine_quarters_bound,
        quarter: (!on_positive_axis).then(|| lambda.norm() <= quarter_bound + tol),
        nine_quarters: lambda.norm() <= nine_quarters_bound + tol,
    }
}
