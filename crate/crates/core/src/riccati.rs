//! Riccati variables `α₋ = u₋'/u₋ + z` and `α₊ = u₊'/u₊ - z` along a path.
//!
//! Positions are arc lengths `s` along the [`Path`]; on the real axis they
//! coincide with `x`.

use num_complex::Complex64;

use crate::contour::{Leg, Path};
use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions, State, Trajectory};
use crate::problem::{require_right_half_plane, Problem};
use crate::quadrature::{self, LOBATTO_NODES, LOBATTO_WEIGHTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// Sampled Riccati variable with its running path integral.
///
/// The trajectory state is `[α, acc]` where `acc(s) = ∫ₛ^∞ α₋` on the minus
/// side (tail included) and `acc(s) = ∫₀ˢ α₊` on the plus side.
#[derive(Debug, Clone)]
pub struct RiccatiSolution {
    pub side: Side,
    pub z: Complex64,
    pub path: Path,
    pub trajectory: Trajectory<2>,
    /// Tail `∫ α₋` beyond the cutoff (zero on the plus side).
    pub tail: Complex64,
    /// `∫ (V - V∞)` beyond the cutoff.
    pub potential_tail: Complex64,
    seed: State<2>,
}

impl RiccatiSolution {
    fn state(&self, s: f64) -> State<2> {
        self.trajectory.at(s.clamp(0.0, self.path.total_len())).unwrap_or(self.seed)
    }

    /// Initial state `[α, acc]` where the integration started.
    pub fn seed(&self) -> State<2> {
        self.seed
    }

    pub fn alpha_at(&self, s: f64) -> Complex64 {
        self.state(s)[0]
    }

    pub fn alpha_at_origin(&self) -> Complex64 {
        self.alpha_at(0.0)
    }

    /// `∫₀ˢ α`.
    pub fn int_alpha_0_to(&self, s: f64) -> Complex64 {
        match self.side {
            Side::Plus => self.state(s)[1],
            Side::Minus => self.state(0.0)[1] - self.state(s)[1],
        }
    }

    /// `∫ₛ^∞ α₋` including the tail estimate (minus side only).
    pub fn int_alpha_to_inf(&self, s: f64) -> Complex64 {
        self.state(s)[1]
    }
}

fn options(prob: &Problem) -> OdeOptions<2> {
    // Relative control throughout: α₋ decays like V and its tail matters
    // once multiplied by e^{2zx}.
    OdeOptions::new(prob.tol.ode).with_atol([1e-300, 1e-300]).with_h_max(1.0)
}

fn pole_guard(limit: f64) -> impl FnMut(f64, &State<2>) -> Option<Error> {
    move |s, y| {
        let m = y[0].norm();
        (m > limit || !m.is_finite()).then_some(Error::RiccatiPole { at: s, magnitude: m })
    }
}

/// `∫₀^∞ (V - V∞)(end + t) dt` along the horizontal continuation.
pub(crate) fn potential_tail(prob: &Problem, end: Complex64) -> Complex64 {
    let width = 10.0;
    quadrature::integrate_complex(|t| prob.shifted(end + t), 0.0, width, 1e-20, 40)
        .map(|r| r.0)
        .unwrap_or_else(|_| prob.shifted(end) * 0.5)
}

fn leg_rhs<'a>(
    prob: &'a Problem,
    z: Complex64,
    s0: f64,
    leg: Leg,
    side: Side,
) -> impl FnMut(f64, &State<2>) -> State<2> + 'a {
    move |s, y| {
        let v = prob.shifted(interior_point(&leg, s0, s));
        let a = y[0];
        match side {
            Side::Minus => [leg.dir * (-a * a + 2.0 * z * a + v), -leg.dir * a],
            Side::Plus => [leg.dir * (-a * a - 2.0 * z * a + v), leg.dir * a],
        }
    }
}

/// Integrates `α' = -α² + 2zα + V` from the cutoff down to the origin,
/// seeded with `α₋ = -V/(2z)` at the cutoff.
pub fn solve_alpha_minus(prob: &Problem, z: Complex64, path: &Path) -> Result<RiccatiSolution> {
    require_right_half_plane(z)?;
    let end = path.end();
    let v_tail = potential_tail(prob, end);
    let tail = -v_tail / (2.0 * z);
    let seed = [-prob.shifted(end) / (2.0 * z), tail];
    let opts = options(prob);
    let mut traj: Option<Trajectory<2>> = None;
    let mut y = seed;
    for (s0, s1, leg) in path.spans().into_iter().rev() {
        let piece = ode::integrate_with_guard(
            leg_rhs(prob, z, s0, leg, Side::Minus),
            (s1, s0),
            y,
            &opts,
            pole_guard(prob.tol.pole_guard),
        )?;
        if let Some(e) = piece.end() {
            y = e;
        }
        match traj.as_mut() {
            Some(t) => t.extend(piece),
            None => traj = Some(piece),
        }
    }
    let traj = traj.unwrap_or_default();
    Ok(RiccatiSolution {
        side: Side::Minus,
        z,
        path: path.clone(),
        trajectory: traj,
        tail,
        potential_tail: v_tail,
        seed,
    })
}

/// [`solve_alpha_minus`] on the first of [`Path::candidates`] free of poles.
pub fn solve_alpha_minus_detouring(prob: &Problem, z: Complex64) -> Result<RiccatiSolution> {
    let mut last = None;
    for path in Path::candidates(prob, z)? {
        match solve_alpha_minus(prob, z, &path) {
            Err(e @ Error::RiccatiPole { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or(Error::NonFinite("no integration path".into())))
}

/// Integrates `α' = -α² - 2zα + V` from the origin (`α₊(0) = alpha0`) out
/// to the cutoff.
pub fn solve_alpha_plus(prob: &Problem, z: Complex64, alpha0: Complex64, path: &Path) -> Result<RiccatiSolution> {
    require_right_half_plane(z)?;
    let seed = [alpha0, Complex64::new(0.0, 0.0)];
    let opts = options(prob);
    let mut traj: Option<Trajectory<2>> = None;
    let mut y = seed;
    for (s0, s1, leg) in path.spans() {
        let piece = ode::integrate_with_guard(
            leg_rhs(prob, z, s0, leg, Side::Plus),
            (s0, s1),
            y,
            &opts,
            pole_guard(prob.tol.pole_guard),
        )?;
        if let Some(e) = piece.end() {
            y = e;
        }
        match traj.as_mut() {
            Some(t) => t.extend(piece),
            None => traj = Some(piece),
        }
    }
    let traj = traj.unwrap_or_default();
    Ok(RiccatiSolution {
        side: Side::Plus,
        z,
        path: path.clone(),
        trajectory: traj,
        tail: Complex64::new(0.0, 0.0),
        potential_tail: Complex64::new(0.0, 0.0),
        seed,
    })
}

/// Point at arc length `s` on `leg` (starting at `s0`), pulled a hair inside
/// the leg so that one-sided values are used at discontinuities.
pub(crate) fn interior_point(leg: &Leg, s0: f64, s: f64) -> Complex64 {
    let eps = 1e-13 * (1.0 + leg.len);
    let t = (s - s0).clamp(eps.min(0.5 * leg.len), (leg.len - eps).max(0.5 * leg.len));
    leg.start + leg.dir * t
}

/// `∫ e^{rate·x} g(x, [α, acc]) dx` from the origin to the cutoff along the
/// path, accumulated step by step: seven-point Lobatto sampling of the
/// dense output, with the exponential integrated exactly on each step.
pub(crate) fn path_integral<G>(sol: &RiccatiSolution, rate: Complex64, g: G) -> Complex64
where
    G: Fn(Complex64, &State<2>) -> Complex64,
{
    let mut total = Complex64::new(0.0, 0.0);
    let plain = rate == Complex64::new(0.0, 0.0);
    for step in sol.trajectory.steps() {
        let (leg, leg_s0, _) = sol.path.locate(step.s0 + 0.5 * step.h);
        let w0 = leg.start + leg.dir * (step.s0 - leg_s0);
        let dx = leg.dir * step.h;
        let weights: [Complex64; 7] = if plain {
            LOBATTO_WEIGHTS.map(|w| Complex64::new(w, 0.0))
        } else {
            quadrature::exp_product_weights(rate * dx)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &tau) in LOBATTO_NODES.iter().enumerate() {
            let w = interior_point(&leg, leg_s0, step.s0 + tau * step.h);
            acc += weights[j] * g(w, &step.at_fraction(tau));
        }
        let scale = if plain { Complex64::new(1.0, 0.0) } else { (rate * w0).exp() };
        total += scale * acc * dx;
    }
    match sol.side {
        Side::Plus => total,
        Side::Minus => -total,
    }
}
