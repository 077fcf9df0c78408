//! Problem definition: potential, domain, boundary condition and tolerances.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::ContourPolicy;
use crate::error::{Error, Result};
use crate::potential::{Domain, Potential};

/// Boundary condition `a f(0) + b f'(0) = 0` at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub a: f64,
    pub b: f64,
}

impl BoundaryCondition {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a.abs() + b.abs() == 0.0 {
            return Err(Error::InvalidParameter(format!("boundary condition ({a}, {b}) needs |a| + |b| > 0")));
        }
        Ok(BoundaryCondition { a, b })
    }

    pub fn dirichlet() -> Self {
        BoundaryCondition { a: 1.0, b: 0.0 }
    }

    pub fn neumann() -> Self {
        BoundaryCondition { a: 0.0, b: 1.0 }
    }

    /// `a f0 + b f0'`.
    pub fn apply(&self, f0: Complex64, f0_prime: Complex64) -> Complex64 {
        f0 * self.a + f0_prime * self.b
    }

    /// Short label: `D`, `N` or `R(a,b)`.
    pub fn label(&self) -> String {
        if self.b == 0.0 {
            "D".into()
        } else if self.a == 0.0 {
            "N".into()
        } else {
            format!("R({},{})", self.a, self.b)
        }
    }
}

/// Numerical tolerances shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative local error per integration step.
    pub ode: f64,
    /// Bound on `|V - V∞| max(1, |e^{2zx}|)` beyond the cutoff.
    pub decay: f64,
    /// Largest admissible cutoff length.
    pub x_cap: f64,
    /// Magnitude of a Riccati variable treated as a pole.
    pub pole_guard: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ode: 1e-12,
            decay: 1e-12,
            x_cap: 200.0,
            pole_guard: 1e6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub potential: Potential,
    pub domain: Domain,
    pub bc: BoundaryCondition,
    pub tol: Tolerances,
    pub contour: ContourPolicy,
}

impl Problem {
    pub fn half_line(potential: Potential, bc: BoundaryCondition) -> Self {
        Problem {
            potential,
            domain: Domain::HalfLine,
            bc,
            tol: Tolerances::default(),
            contour: ContourPolicy::Auto,
        }
    }

    pub fn whole_line(potential: Potential) -> Self {
        Problem {
            potential,
            domain: Domain::WholeLine,
            bc: BoundaryCondition::dirichlet(),
            tol: Tolerances::default(),
            contour: ContourPolicy::RealAxis,
        }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_ode_tol(mut self, tol: f64) -> Self {
        self.tol.ode = tol;
        self
    }

    pub fn with_contour(mut self, contour: ContourPolicy) -> Self {
        self.contour = contour;
        self
    }

    pub fn with_bc(mut self, bc: BoundaryCondition) -> Self {
        self.bc = bc;
        self
    }

    /// `V(w) - V∞` without sector checks (paths are validated when built).
    pub(crate) fn shifted(&self, w: Complex64) -> Complex64 {
        self.potential.eval_shifted_unchecked(w)
    }

    /// `λ = V∞ - z²`.
    pub fn lambda_of(&self, z: Complex64) -> Complex64 {
        self.potential.v_infinity() - z * z
    }

    /// Principal `z = sqrt(V∞ - λ)`, so that `Re z ≥ 0`.
    pub fn z_of(&self, lambda: Complex64) -> Complex64 {
        (self.potential.v_infinity() - lambda).sqrt()
    }

    pub(crate) fn require_half_line(&self) -> Result<()> {
        if self.domain != Domain::HalfLine {
            return Err(Error::Unsupported("this method solves half-line problems".into()));
        }
        Ok(())
    }
}

pub(crate) fn require_right_half_plane(z: Complex64) -> Result<()> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::InvalidParameter(format!("z = {z} must satisfy Re z > 0")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_conditions() {
        assert!(BoundaryCondition::new(0.0, 0.0).is_err());
        assert_eq!(BoundaryCondition::dirichlet().label(), "D");
        assert_eq!(BoundaryCondition::neumann().label(), "N");
        let bc = BoundaryCondition::new(2.0, 3.0).unwrap();
        assert_eq!(bc.apply(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)), Complex64::new(2.0, 3.0));
    }

    #[test]
    fn shifted_spectral_parameter() {
        let p = Problem::half_line(Potential::rittby(1.6), BoundaryCondition::dirichlet());
        let lambda = Complex64::new(0.69, -7.91);
        let z = p.z_of(lambda);
        assert!(z.re > 0.0);
        assert!((p.lambda_of(z) - lambda).norm() < 1e-14);
    }
}
