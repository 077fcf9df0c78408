//! Resonance residual from both Riccati variables.
//!
//! The resonance solution is written `f = e^{zx} + g(x)` with `g` built by
//! variation of constants from `u₋` and `u₊`; the boundary condition then
//! reads `a(1 + g(0)) + b(z + g'(0)) = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::Path;
use crate::error::{Error, Result};
use crate::problem::{require_right_half_plane, Problem};
use crate::riccati::{path_integral, solve_alpha_minus, solve_alpha_plus};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MethodOneOptions {
    /// Initial value `α₊(0)`; defaults to `z`.
    pub alpha0: Option<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Method1State {
    pub z: Complex64,
    pub alpha0: Complex64,
    pub alpha_minus_0: Complex64,
    pub i_plus_0: Complex64,
    pub i_minus_0: Complex64,
    /// `exp(∫₀^∞ α₋)`.
    pub exp_int_alpha_minus: Complex64,
    pub g0: Complex64,
    /// `g'(0)`, so that `f'(0) = z + g'(0)`.
    pub g0_prime: Complex64,
    pub wronskian_denominator: Complex64,
}

impl Method1State {
    pub fn f0(&self) -> Complex64 {
        1.0 + self.g0
    }

    pub fn f0_prime(&self) -> Complex64 {
        self.z + self.g0_prime
    }
}

fn admissible(alpha0: Complex64, alpha_minus_0: Complex64, z: Complex64) -> bool {
    (alpha0 - alpha_minus_0 + 2.0 * z).norm() >= 1e-6 * z.norm()
}

pub fn boundary_values(prob: &Problem, z: Complex64, opts: &MethodOneOptions) -> Result<Method1State> {
    prob.require_half_line()?;
    require_right_half_plane(z)?;
    let mut last = None;
    for path in Path::candidates(prob, z)? {
        match on_path(prob, z, opts, &path) {
            Err(e @ Error::RiccatiPole { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or(Error::NonFinite("no integration path".into())))
}

fn on_path(prob: &Problem, z: Complex64, opts: &MethodOneOptions, path: &Path) -> Result<Method1State> {
    let minus = solve_alpha_minus(prob, z, path)?;
    let am0 = minus.alpha_at_origin();
    let int_minus = minus.int_alpha_to_inf(0.0);

    let candidates: Vec<Complex64> = match opts.alpha0 {
        Some(a) => vec![a],
        None => vec![z, 2.0 * z, z + Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
    };
    let mut last_err = Error::SmallDenominator(0.0);
    let mut chosen = None;
    for alpha0 in candidates {
        if !admissible(alpha0, am0, z) {
            last_err = Error::SmallDenominator((alpha0 - am0 + 2.0 * z).norm());
            continue;
        }
        match solve_alpha_plus(prob, z, alpha0, path) {
            Ok(plus) => {
                chosen = Some((alpha0, plus));
                break;
            }
            Err(e @ Error::RiccatiPole { .. }) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    let (alpha0, plus) = chosen.ok_or(last_err)?;

    let i_plus_0 = path_integral(&minus, Complex64::new(0.0, 0.0), |w, y| prob.shifted(w) * (-y[1]).exp())
        + minus.potential_tail;
    let i_minus_0 = path_integral(&plus, 2.0 * z, |w, y| prob.shifted(w) * y[1].exp());
    let e = int_minus.exp();
    let d = alpha0 - am0 + 2.0 * z;
    let g0 = (i_minus_0 - i_plus_0 * e) / d;
    let g0_prime = (i_minus_0 * (am0 - z) - i_plus_0 * (alpha0 + z) * e) / d;
    for (name, v) in [("g(0)", g0), ("g'(0)", g0_prime)] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(name.into()));
        }
    }
    Ok(Method1State {
        z,
        alpha0,
        alpha_minus_0: am0,
        i_plus_0,
        i_minus_0,
        exp_int_alpha_minus: e,
        g0,
        g0_prime,
        wronskian_denominator: d,
    })
}

/// `a(1 + g(0)) + b(z + g'(0))`; its zeros with `Re z > 0` are resonances
/// `λ = V∞ - z²`.
pub fn residual(prob: &Problem, z: Complex64, opts: &MethodOneOptions) -> Result<Complex64> {
    let st = boundary_values(prob, z, opts)?;
    Ok(prob.bc.apply(st.f0(), st.f0_prime()))
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
    fn free_problem() {
        let d = Problem::half_line(Potential::zero(), BoundaryCondition::dirichlet());
        let n = d.clone().with_bc(BoundaryCondition::neumann());
        let z = c(0.8, -0.3);
        let st = boundary_values(&d, z, &MethodOneOptions::default()).unwrap();
        assert_eq!((st.i_plus_0, st.i_minus_0, st.g0, st.g0_prime), (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        assert_eq!(residual(&d, z, &MethodOneOptions::default()).unwrap(), c(1.0, 0.0));
        assert_eq!(residual(&n, z, &MethodOneOptions::default()).unwrap(), z);
    }

    #[test]
    fn square_well_closed_form() {
        let p = Problem::half_line(Potential::square_well(4.0, 1.0), BoundaryCondition::dirichlet());
        for z in [c(1.0, 0.0), c(0.7, 1.3), c(2.0, -0.4)] {
            let st = boundary_values(&p, z, &MethodOneOptions::default()).unwrap();
            let k = (z * z - 4.0).sqrt();
            let f0 = z.exp() * (k.cosh() - z / k * k.sinh());
            let fp0 = z.exp() * (z * k.cosh() - k * k.sinh());
            assert!((st.f0() - f0).norm() < 1e-9 * f0.norm().max(1.0), "{z}: {} vs {f0}", st.f0());
            assert!((st.f0_prime() - fp0).norm() < 1e-9 * fp0.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_left_half_plane_and_whole_line() {
        let p = Problem::half_line(Potential::gaussian(), BoundaryCondition::dirichlet());
        assert!(residual(&p, c(-1.0, 0.0), &MethodOneOptions::default()).is_err());
        let w = Problem::whole_line(Potential::gaussian());
        assert!(matches!(residual(&w, c(1.0, 0.0), &MethodOneOptions::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn alpha0_independence() {
        let p = Problem::half_line(Potential::gaussian(), BoundaryCondition::neumann());
        let z = c(1.57, 1.11);
        let r1 = residual(&p, z, &MethodOneOptions { alpha0: Some(z) }).unwrap();
        let r2 = residual(&p, z, &MethodOneOptions { alpha0: Some(2.0 * z) }).unwrap();
        assert!((r1 - r2).norm() < 1e-9, "{r1} {r2}");
    }
}
