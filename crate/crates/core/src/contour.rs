//! Integration paths from the origin to (truncated) infinity.
//!
//! Solutions are analytic in `x`, so the half-line integrals may be taken
//! along any path inside the analyticity sector that ends on a horizontal
//! ray. Passing near the saddle of `e^{2zx} V(x)`, or along the ray on which
//! `e^{2zx}` has unit modulus, keeps the integrands of moderate size.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Problem;

/// How the integration path is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ContourPolicy {
    /// The best conditioned of the saddle, ray and real-axis paths.
    Auto,
    /// The positive real axis.
    RealAxis,
    /// Straight leg from 0 towards `scale * z`, then a horizontal ray.
    /// `scale = None` uses the inverse Gaussian decay rate.
    Saddle { scale: Option<f64> },
    /// Ray `arg x = angle` until the potential has decayed, then a
    /// horizontal ray. `angle = None` picks the direction on which
    /// `|e^{zx}| = 1`, clamped to the analyticity sector.
    Ray { angle: Option<f64> },
}

/// Straight segment `start + dir * t`, `0 ≤ t ≤ len`, with `|dir| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg {
    pub start: Complex64,
    pub dir: Complex64,
    pub len: f64,
}

impl Leg {
    pub fn end(&self) -> Complex64 {
        self.start + self.dir * self.len
    }
}

/// Piecewise straight path parametrized by arc length `s ∈ [0, total]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    legs: Vec<Leg>,
}

impl Path {
    pub fn real_axis(cutoff: f64) -> Self {
        Path {
            legs: vec![Leg {
                start: Complex64::new(0.0, 0.0),
                dir: Complex64::new(1.0, 0.0),
                len: cutoff,
            }],
        }
    }

    pub fn from_legs(legs: Vec<Leg>) -> Self {
        Path { legs }
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn total_len(&self) -> f64 {
        self.legs.iter().map(|l| l.len).sum()
    }

    pub fn end(&self) -> Complex64 {
        self.legs.last().map_or(Complex64::new(0.0, 0.0), Leg::end)
    }

    pub fn is_real(&self) -> bool {
        self.legs.iter().all(|l| l.start.im == 0.0 && l.dir.im == 0.0)
    }

    /// `(s0, s1, leg)` for every leg with positive length.
    pub fn spans(&self) -> Vec<(f64, f64, Leg)> {
        let mut s = 0.0;
        let mut out = Vec::with_capacity(self.legs.len());
        for leg in &self.legs {
            if leg.len > 0.0 {
                out.push((s, s + leg.len, *leg));
            }
            s += leg.len;
        }
        out
    }

    /// The leg containing `s`, its starting arc length, and the point.
    pub fn locate(&self, s: f64) -> (Leg, f64, Complex64) {
        let mut s0 = 0.0;
        for (i, leg) in self.legs.iter().enumerate() {
            if s <= s0 + leg.len || i + 1 == self.legs.len() {
                return (*leg, s0, leg.start + leg.dir * (s - s0));
            }
            s0 += leg.len;
        }
        let origin = Complex64::new(0.0, 0.0);
        (
            Leg {
                start: origin,
                dir: Complex64::new(1.0, 0.0),
                len: 0.0,
            },
            0.0,
            origin + s,
        )
    }

    pub fn point(&self, s: f64) -> Complex64 {
        self.locate(s).2
    }

    /// The same path with every real leg before the final ray replaced by a
    /// tent whose apex sits `height` leg lengths off the axis. `None` when no
    /// leg qualifies.
    pub fn detoured(&self, height: f64) -> Option<Path> {
        let n = self.legs.len();
        let mut legs = Vec::with_capacity(2 * n);
        let mut changed = false;
        for (i, leg) in self.legs.iter().enumerate() {
            let real = leg.start.im == 0.0 && leg.dir == Complex64::new(1.0, 0.0);
            if i + 1 == n || !real || leg.len <= 0.0 {
                legs.push(*leg);
                continue;
            }
            let apex = leg.start + Complex64::new(0.5 * leg.len, height * leg.len);
            for (a, b) in [(leg.start, apex), (apex, leg.end())] {
                let d = b - a;
                legs.push(Leg {
                    start: a,
                    dir: d / d.norm(),
                    len: d.norm(),
                });
            }
            changed = true;
        }
        changed.then_some(Path { legs })
    }

    /// [`Path::for_problem`] followed by detours above and below the axis,
    /// for callers that retry when a Riccati variable meets a pole.
    pub fn candidates(prob: &Problem, z: Complex64) -> Result<Vec<Path>> {
        let base = Path::for_problem(prob, z)?;
        let mut out = vec![base.clone()];
        if prob.potential.is_piecewise_analytic() {
            let limit = 0.5 * prob.potential.analytic_sector_alpha();
            for h in [DETOUR_HEIGHT, -DETOUR_HEIGHT] {
                if let Some(p) = base.detoured(h) {
                    let inside = p.legs.iter().all(|l| l.end().im.abs() <= l.end().re * limit.tan() + 1e-12);
                    if !prob.potential.is_analytic() || inside {
                        out.push(p);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Builds the path for `prob` at spectral parameter `z`: the chosen
    /// corner and real breakpoints, then a horizontal ray truncated where
    /// `|V - V∞| max(1, |e^{2zx}|)` stays below the decay tolerance.
    pub fn for_problem(prob: &Problem, z: Complex64) -> Result<Path> {
        let pot = &prob.potential;
        match prob.contour {
            ContourPolicy::RealAxis => real_path(prob, z),
            ContourPolicy::Saddle { scale } => {
                if !pot.is_analytic() {
                    return Err(Error::NonAnalytic { what: pot.name(), w: z });
                }
                match scale.or_else(|| pot.gaussian_rate().map(|r| 1.0 / r)) {
                    Some(s) if s > 0.0 => saddle_path(prob, z, s),
                    _ => Err(Error::InvalidParameter("saddle path needs a positive scale".into())),
                }
            }
            ContourPolicy::Ray { angle } => {
                if !pot.is_analytic() {
                    return Err(Error::NonAnalytic { what: pot.name(), w: z });
                }
                ray_path(prob, z, angle.unwrap_or_else(|| neutral_angle(prob, z)))
            }
            ContourPolicy::Auto => {
                let mut candidates = vec![real_path(prob, z)];
                if pot.is_analytic() {
                    if let Some(rate) = pot.gaussian_rate() {
                        candidates.push(saddle_path(prob, z, 1.0 / rate));
                    }
                    candidates.push(ray_path(prob, z, neutral_angle(prob, z)));
                }
                let mut best: Option<(f64, Path)> = None;
                let mut first_err = None;
                for c in candidates {
                    match c {
                        Ok(path) => {
                            let cost = path_cost(prob, z, &path);
                            // ties keep the earlier candidate
                            if best.as_ref().map_or(true, |(b, _)| cost < b - 1e-9) {
                                best = Some((cost, path));
                            }
                        }
                        Err(e) => {
                            first_err.get_or_insert(e);
                        }
                    }
                }
                match (best, first_err) {
                    (Some((_, path)), _) => Ok(path),
                    (None, Some(e)) => Err(e),
                    (None, None) => unreachable!("the real axis is always a candidate"),
                }
            }
        }
    }
}

const DETOUR_HEIGHT: f64 = 0.25;

fn sector_limit(prob: &Problem) -> f64 {
    FRAC_PI_4.min(0.5 * prob.potential.analytic_sector_alpha())
}

/// Direction on which `Re(z x) = 0`, clamped to the sector.
fn neutral_angle(prob: &Problem, z: Complex64) -> f64 {
    let limit = sector_limit(prob);
    let phi = FRAC_PI_2 - z.arg().abs();
    z.im.signum() * phi.clamp(0.0, limit)
}

fn real_path(prob: &Problem, z: Complex64) -> Result<Path> {
    let mut legs = Vec::new();
    let mut corner = Complex64::new(0.0, 0.0);
    for bp in prob.potential.breakpoints() {
        if bp > corner.re {
            legs.push(Leg {
                start: corner,
                dir: Complex64::new(1.0, 0.0),
                len: bp - corner.re,
            });
            corner = Complex64::new(bp, 0.0);
        }
    }
    finish(prob, z, legs, corner)
}

fn saddle_path(prob: &Problem, z: Complex64, scale: f64) -> Result<Path> {
    let limit = sector_limit(prob);
    let phase = z.arg();
    let w = if phase.abs() <= limit {
        z * scale
    } else {
        Complex64::new(1.0, phase.signum() * limit.tan()) * (scale * z.re)
    };
    let mut legs = Vec::new();
    if w.norm() > 0.0 {
        legs.push(Leg {
            start: Complex64::new(0.0, 0.0),
            dir: w / w.norm(),
            len: w.norm(),
        });
    }
    finish(prob, z, legs, w)
}

fn ray_path(prob: &Problem, z: Complex64, angle: f64) -> Result<Path> {
    if angle.abs() > sector_limit(prob) + 1e-12 {
        return Err(Error::InvalidParameter(format!("ray angle {angle} leaves the analyticity sector")));
    }
    if angle == 0.0 {
        return real_path(prob, z);
    }
    let dir = Complex64::from_polar(1.0, angle);
    let tol = prob.tol.decay;
    let len = first_settled(prob.tol.x_cap, |t| prob.shifted(dir * t).norm() <= tol).ok_or_else(|| Error::DecayViolation {
        cutoff: prob.tol.x_cap,
        residual: prob.shifted(dir * prob.tol.x_cap).norm(),
    })?;
    let corner = dir * len;
    let legs = if len > 0.0 {
        vec![Leg {
            start: Complex64::new(0.0, 0.0),
            dir,
            len,
        }]
    } else {
        Vec::new()
    };
    finish(prob, z, legs, corner)
}

fn finish(prob: &Problem, z: Complex64, mut legs: Vec<Leg>, corner: Complex64) -> Result<Path> {
    let tail = decay_length(prob, z, corner)?;
    legs.push(Leg {
        start: corner,
        dir: Complex64::new(1.0, 0.0),
        len: tail,
    });
    Ok(Path { legs })
}

/// Log of the largest `|V - V∞| max(1, |e^{2zx}|)` along the path plus the
/// WKB growth `∫ |V - V∞|^{1/2} |dx|`.
fn path_cost(prob: &Problem, z: Complex64, path: &Path) -> f64 {
    let n = 256;
    let total = path.total_len();
    let h = total / n as f64;
    let mut peak = f64::NEG_INFINITY;
    let mut growth = 0.0;
    for k in 0..=n {
        let w = path.point(h * k as f64);
        let v = prob.shifted(w).norm();
        if v > 0.0 {
            peak = peak.max(v.ln() + (2.0 * z * w).re.max(0.0));
        }
        growth += v.sqrt() * h;
    }
    peak.max(0.0) + growth
}

/// Smallest `t` in `[0, cap]` (to a bisection tolerance) from which `ok`
/// holds at `t` and at a few farther probes.
fn first_settled(cap: f64, ok: impl Fn(f64) -> bool) -> Option<f64> {
    let step = 0.25;
    let mut t: f64 = 0.0;
    while t <= cap {
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
            return Some(hi);
        }
        t += step;
    }
    None
}

fn decay_measure(prob: &Problem, z: Complex64, w: Complex64) -> f64 {
    let v = prob.shifted(w).norm();
    if v == 0.0 {
        return 0.0;
    }
    (v.ln() + (2.0 * z * w).re.max(0.0)).exp()
}

/// Smallest horizontal length after `corner` beyond which the decay
/// measure stays under tolerance.
fn decay_length(prob: &Problem, z: Complex64, corner: Complex64) -> Result<f64> {
    let tol = prob.tol.decay;
    let cap = prob.tol.x_cap;
    first_settled(cap, |t| decay_measure(prob, z, corner + t) <= tol).ok_or_else(|| Error::DecayViolation {
        cutoff: cap,
        residual: decay_measure(prob, z, corner + cap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;
    use crate::problem::BoundaryCondition;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_axis_cutoff_for_gaussian() {
        let p = Problem::half_line(Potential::gaussian(), BoundaryCondition::dirichlet()).with_contour(ContourPolicy::RealAxis);
        let path = Path::for_problem(&p, c(0.7, 0.0)).unwrap();
        assert!(path.is_real());
        let x = path.total_len();
        // e^{-x²+1.4x} = 1e-12 near x = 6.04
        assert!((x - 6.04).abs() < 0.05, "{x}");
        assert!((-x * x + 1.4 * x).exp() <= 1.0001e-12);
    }

    #[test]
    fn square_well_ends_at_its_edge() {
        let p = Problem::half_line(Potential::square_well(4.0, 1.0), BoundaryCondition::dirichlet());
        let path = Path::for_problem(&p, c(1.0, 0.5)).unwrap();
        assert!(path.is_real());
        assert!((path.total_len() - 1.0).abs() < 1e-12);
        assert_eq!(path.spans().len(), 1);
    }

    #[test]
    fn saddle_path_stays_in_sector() {
        let p = Problem::half_line(Potential::gaussian(), BoundaryCondition::dirichlet());
        for z in [c(2.0, 1.6), c(1.0, 3.0), c(3.0, -2.0), c(0.5, 0.0)] {
            let path = Path::for_problem(&p, z).unwrap();
            for k in 0..=200 {
                let w = path.point(path.total_len() * k as f64 / 200.0);
                assert!(p.potential.eval(w).is_ok(), "{w}");
            }
        }
        let path = Path::for_problem(&p, c(2.0, 1.6)).unwrap();
        assert!((path.legs()[0].end() - c(2.0, 1.6)).norm() < 1e-14);
    }

    #[test]
    fn zero_potential_needs_no_tail() {
        let p = Problem::half_line(Potential::zero(), BoundaryCondition::dirichlet());
        assert_eq!(Path::for_problem(&p, c(1.0, 1.0)).unwrap().total_len(), 0.0);
    }

    #[test]
    fn slow_decay_is_reported() {
        let pot = Potential::parse_expression("exp(-0.5*x)").unwrap();
        let p = Problem::half_line(pot, BoundaryCondition::dirichlet());
        assert!(matches!(Path::for_problem(&p, c(1.0, 0.0)), Err(Error::DecayViolation { .. })));
    }

    #[test]
    fn locate_points_along_legs() {
        let path = Path::from_legs(vec![
            Leg {
                start: c(0.0, 0.0),
                dir: c(0.6, 0.8),
                len: 5.0,
            },
            Leg {
                start: c(3.0, 4.0),
                dir: c(1.0, 0.0),
                len: 2.0,
            },
        ]);
        assert!((path.point(2.5) - c(1.5, 2.0)).norm() < 1e-15);
        assert!((path.point(6.0) - c(4.0, 4.0)).norm() < 1e-15);
        assert_eq!(path.total_len(), 7.0);
    }
}
