//! Resonances and complex eigenvalues of one-dimensional Schrödinger
//! operators `-d²/dx² + V` with decaying potentials.
//!
//! The half-line solvers live in [`method_one`] and [`method_two`], the
//! whole-line Jost-type function in [`whole_line`], root finding and
//! argument-principle counting in [`locator`], enclosure regions in
//! [`bounds`] and first-order shifts in [`perturbation`].

pub mod bounds;
pub mod contour;
pub mod error;
pub mod locator;
pub mod method_one;
pub mod method_two;
pub mod ode;
pub mod perturbation;
pub mod potential;
pub mod problem;
pub mod quadrature;
pub mod riccati;
pub mod whole_line;

pub use bounds::{envelope, threshold, EnvelopePoint, EnvelopePolyline, NormBoundCheck, Provenance, RegionBound, SectorParams, Threshold};
pub use contour::{ContourPolicy, Path};
pub use error::{Error, Result};
pub use locator::{
    boundary_pair, ladder, polygon_winding, refine, residual, residual_scale, scan, solve, winding_number, MethodTag, Rect, RefineOptions, Resonance,
    Root, ScanOptions, ScanReport, WindingOptions,
};
pub use num_complex::Complex64;
pub use perturbation::{nu_correction, shift_fd, NuCorrection, NystromOperator};
pub use potential::{Domain, Potential};
pub use problem::{BoundaryCondition, Problem, Tolerances};
pub use whole_line::{phi, PhiEvaluation};
