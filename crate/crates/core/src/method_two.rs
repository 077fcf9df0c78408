//! Resonance residual from the decaying solution alone.
//!
//! With `u₋ = e^{-zx} γ(x)`, `γ = exp(-∫ₓ^∞ α₋)`, the resonance solution is
//! `f = u₋ (c₁ + 2z ∫₀ˣ u₋⁻²)` and `c₁` is an absolutely convergent integral.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::problem::{require_right_half_plane, Problem};
use crate::riccati::{path_integral, solve_alpha_minus_detouring, RiccatiSolution};

#[derive(Debug, Clone)]
pub struct Method2State {
    pub z: Complex64,
    pub u_minus_0: Complex64,
    pub alpha_minus_0: Complex64,
    pub c1: Complex64,
    pub f0: Complex64,
    pub f0_prime: Complex64,
    pub riccati: RiccatiSolution,
}

impl Method2State {
    /// `γ` at arc length `s` along the path.
    pub fn gamma_of(&self, s: f64) -> Complex64 {
        (-self.riccati.int_alpha_to_inf(s)).exp()
    }

    /// `u₋'(0) = (α₋(0) - z) u₋(0)`.
    pub fn u_minus_prime_0(&self) -> Complex64 {
        (self.alpha_minus_0 - self.z) * self.u_minus_0
    }
}

/// `e^w - 1` without cancellation for small `w`.
pub fn expm1(w: Complex64) -> Complex64 {
    let half = (0.5 * w.im).sin();
    Complex64::new(w.re.exp_m1() * w.im.cos() - 2.0 * half * half, w.re.exp() * w.im.sin())
}

pub fn boundary_values(prob: &Problem, z: Complex64) -> Result<Method2State> {
    prob.require_half_line()?;
    require_right_half_plane(z)?;
    let minus = solve_alpha_minus_detouring(prob, z)?;
    let a0 = minus.int_alpha_to_inf(0.0);
    let u0 = (-a0).exp();
    let am0 = minus.alpha_at_origin();
    let two_z = 2.0 * z;
    let integral = path_integral(&minus, two_z, |_, y| {
        let a = y[1];
        (two_z * expm1(-a) - (-a).exp() * y[0]) * (2.0 * a).exp()
    });
    let c1 = 1.0 / u0 + integral;
    let f0 = c1 * u0;
    let f0_prime = c1 * (am0 - z) * u0 + two_z / u0;
    if !(f0.re.is_finite() && f0.im.is_finite() && f0_prime.re.is_finite() && f0_prime.im.is_finite()) {
        return Err(Error::NonFinite("f(0)".into()));
    }
    Ok(Method2State {
        z,
        u_minus_0: u0,
        alpha_minus_0: am0,
        c1,
        f0,
        f0_prime,
        riccati: minus,
    })
}

/// `a f(0) + b f'(0)` for the resonance solution normalized as `e^{zx}`.
pub fn residual(prob: &Problem, z: Complex64) -> Result<Complex64> {
    let st = boundary_values(prob, z)?;
    Ok(prob.bc.apply(st.f0, st.f0_prime))
}

/// `a u₋(0) + b u₋'(0)`; real zeros `z > 0` are eigenvalues `λ = V∞ - z²`
/// with eigenfunction `u₋`.
pub fn bound_state_residual(prob: &Problem, z: Complex64) -> Result<Complex64> {
    prob.require_half_line()?;
    require_right_half_plane(z)?;
    let minus = solve_alpha_minus_detouring(prob, z)?;
    let u0 = (-minus.int_alpha_to_inf(0.0)).exp();
    Ok(prob.bc.apply(u0, (minus.alpha_at_origin() - z) * u0))
}
