//! Fixtures shared by the solver benchmarks.

use resonance_core::{BoundaryCondition, Complex64, Potential, Problem};

/// Second Gaussian resonance (Neumann), in z.
pub const GAUSSIAN_NEUMANN_Z: Complex64 = Complex64::new(1.570706304509, 1.109140398780);

/// Lowest Dirichlet resonance of the modified Gaussian with b = 10, in λ.
pub const MODIFIED_GAUSSIAN_LAMBDA: Complex64 = Complex64::new(37.7059307890, -0.4795537739);

pub fn gaussian(bc: BoundaryCondition) -> Problem {
    Problem::half_line(Potential::gaussian(), bc)
}

pub fn modified_gaussian() -> Problem {
    Problem::half_line(Potential::modified_gaussian(10.0), BoundaryCondition::dirichlet())
}

pub fn rittby() -> Problem {
    Problem::half_line(Potential::rittby(1.6), BoundaryCondition::dirichlet())
}
