//! First-order shift of a resonance under `V → V + εV₁`, from a Nyström
//! discretization of the Birman–Schwinger operator `A(z) = I + W G X` with
//! `X = |V|^{1/2}` and `W = V / X`.
//!
//! Resonances grow like `e^{zx}`, so the kernel used is the continuation of
//! the decaying resolvent kernel to `-z`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::{ContourPolicy, Path};
use crate::error::{Error, Result};
use crate::locator::{refine, RefineOptions};
use crate::method_one::{self, MethodOneOptions};
use crate::potential::{Domain, Potential};
use crate::problem::{BoundaryCondition, Problem};
use crate::quadrature::gauss_legendre;

/// Image coefficient of the half-line kernel decaying in `x`.
pub fn reflection_coefficient(bc: &BoundaryCondition, z: Complex64) -> Result<Complex64> {
    let den = bc.b * z - bc.a;
    if den.norm() <= 1e-14 * (bc.a.abs() + bc.b.abs() * z.norm()) {
        return Err(Error::SmallDenominator(den.norm()));
    }
    Ok((bc.b * z + bc.a) / den)
}

/// Resolvent kernel of `-d²/dx² + z²` decaying for `Re z > 0`: on the whole
/// line when `bc` is `None`, otherwise on the half line with `a f(0) + b f'(0) = 0`.
pub fn greens_function(bc: Option<&BoundaryCondition>, x: f64, y: f64, z: Complex64) -> Result<Complex64> {
    let direct = (-z * (x - y).abs()).exp();
    let image = match bc {
        None => Complex64::new(0.0, 0.0),
        Some(bc) => reflection_coefficient(bc, z)? * (-z * (x + y)).exp(),
    };
    Ok((direct + image) / (2.0 * z))
}

/// `∂G/∂z` of [`greens_function`].
pub fn greens_function_dz(bc: Option<&BoundaryCondition>, x: f64, y: f64, z: Complex64) -> Result<Complex64> {
    let d = (x - y).abs();
    let direct = (-z * d).exp();
    let mut value = -d * direct / (2.0 * z) - direct / (2.0 * z * z);
    if let Some(bc) = bc {
        let kappa = reflection_coefficient(bc, z)?;
        let dkappa = -2.0 * bc.a * bc.b / ((bc.b * z - bc.a) * (bc.b * z - bc.a));
        let s = x + y;
        let e = (-z * s).exp();
        value += (dkappa * e - kappa * s * e) / (2.0 * z) - kappa * e / (2.0 * z * z);
    }
    Ok(value)
}

/// Outgoing kernel `G(x, y; -z)` and its `z`-derivative.
fn outgoing(bc: Option<&BoundaryCondition>, x: f64, y: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    Ok((greens_function(bc, x, y, -z)?, -greens_function_dz(bc, x, y, -z)?))
}

/// Symmetrized Nyström matrix `K_ij = δ_ij + s √w_i X_i G_ij X_j √w_j`,
/// with `s` the sign of `V`.
#[derive(Debug, Clone)]
pub struct NystromOperator {
    pub z: Complex64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `|V|^{1/2}` at the nodes.
    pub root_abs_v: Vec<f64>,
    pub sign: f64,
    pub kappa: Complex64,
    pub cutoff: f64,
    pub matrix: DMatrix<Complex64>,
    /// `∂K/∂z`.
    pub derivative: DMatrix<Complex64>,
    bc: BoundaryCondition,
}

fn sign_of(prob: &Problem) -> Result<f64> {
    let pot = &prob.potential;
    if !pot.is_real() {
        return Err(Error::Unsupported("the perturbation formula needs a real potential".into()));
    }
    if pot.v_infinity() != Complex64::new(0.0, 0.0) {
        return Err(Error::Unsupported("the perturbation formula needs V to vanish at infinity".into()));
    }
    let (mut pos, mut neg) = (false, false);
    for k in 0..4000 {
        let v = pot.eval_real(0.01 * k as f64).re;
        pos |= v > 0.0;
        neg |= v < 0.0;
    }
    match (pos, neg) {
        (true, true) => Err(Error::Unsupported("sign-indefinite potential".into())),
        (false, true) => Ok(-1.0),
        _ => Ok(1.0),
    }
}

/// Assembles `A(z)` on `n` Gauss–Legendre nodes over `[0, X]`, where `X` is
/// the real-axis cutoff used by the Riccati solvers.
pub fn build_a(prob: &Problem, z: Complex64, n: usize) -> Result<NystromOperator> {
    if prob.domain != Domain::HalfLine {
        return Err(Error::Unsupported("the Nyström operator is assembled on the half line".into()));
    }
    if !(z.re > 0.0) {
        return Err(Error::InvalidParameter(format!("z = {z} must satisfy Re z > 0")));
    }
    let real = prob.clone().with_contour(ContourPolicy::RealAxis);
    let cutoff = Path::for_problem(&real, z)?.total_len().max(1e-3);
    build_a_truncated(prob, z, n, cutoff)
}

/// [`build_a`] on the fixed interval `[0, cutoff]`.
pub fn build_a_truncated(prob: &Problem, z: Complex64, n: usize, cutoff: f64) -> Result<NystromOperator> {
    if prob.domain != Domain::HalfLine {
        return Err(Error::Unsupported("the Nyström operator is assembled on the half line".into()));
    }
    if !(z.re > 0.0) || !(cutoff > 0.0) {
        return Err(Error::InvalidParameter(format!("need Re z > 0 and a positive cutoff, got z = {z}, cutoff = {cutoff}")));
    }
    let sign = sign_of(prob)?;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let knots: Vec<f64> = std::iter::once(0.0)
        .chain(prob.potential.breakpoints().into_iter().filter(|&b| b > 0.0 && b < cutoff))
        .chain(std::iter::once(cutoff))
        .collect();
    let pieces = knots.len() - 1;
    for w in knots.windows(2) {
        for (x, wt) in gauss_legendre((n / pieces).max(2), w[0], w[1]) {
            nodes.push(x);
            weights.push(wt);
        }
    }
    let root_abs_v: Vec<f64> = nodes.iter().map(|&x| prob.potential.eval_real(x).re.abs().sqrt()).collect();
    let d: Vec<f64> = weights.iter().zip(&root_abs_v).map(|(w, r)| w.sqrt() * r).collect();
    let m = nodes.len();
    let mut matrix = DMatrix::<Complex64>::identity(m, m);
    let mut derivative = DMatrix::<Complex64>::zeros(m, m);
    let bc = prob.bc;
    for i in 0..m {
        for j in 0..=i {
            let (g, dg) = outgoing(Some(&bc), nodes[i], nodes[j], z)?;
            let s = sign * d[i] * d[j];
            matrix[(i, j)] += s * g;
            derivative[(i, j)] = s * dg;
            if i != j {
                matrix[(j, i)] = matrix[(i, j)];
                derivative[(j, i)] = derivative[(i, j)];
            }
        }
    }
    Ok(NystromOperator {
        z,
        nodes,
        weights,
        root_abs_v,
        sign,
        kappa: reflection_coefficient(&bc, -z)?,
        cutoff,
        matrix,
        derivative,
        bc,
    })
}

impl NystromOperator {
    /// Smallest singular value and the matching right singular vector.
    pub fn null_vector(&self) -> (f64, DVector<Complex64>) {
        let svd = self.matrix.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let (k, sigma) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (k, &s)| if s < acc.1 { (k, s) } else { acc });
        let g: DVector<Complex64> = v_t.row(k).transpose().map(|c| c.conj());
        (sigma, g)
    }

    /// `∂K/∂ε` for `V → V + εV₁` in the symmetrized variables.
    pub fn perturbation_matrix(&self, v1: &Potential) -> Result<DMatrix<Complex64>> {
        let m = self.nodes.len();
        let v1_vals: Vec<f64> = self.nodes.iter().map(|&x| v1.eval_real(x).re).collect();
        // ∂X/∂ε = s V₁ / (2X), ∂W/∂ε = V₁ / (2X)
        let mut b = DMatrix::<Complex64>::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let (xi, xj) = (self.root_abs_v[i], self.root_abs_v[j]);
                if xi == 0.0 || xj == 0.0 {
                    continue;
                }
                let (g, _) = outgoing(Some(&self.bc), self.nodes[i], self.nodes[j], self.z)?;
                let factor = 0.5 * (v1_vals[i] * xj / xi + xi * v1_vals[j] / xj);
                let entry = (self.weights[i] * self.weights[j]).sqrt() * factor * g;
                b[(i, j)] = entry;
                b[(j, i)] = entry;
            }
        }
        Ok(b)
    }

    /// Real symmetric block form `[[-A₂, A₁], [A₁, A₂]]` of `A = A₁ + iA₂`.
    pub fn real_block(&self) -> DMatrix<f64> {
        let m = self.matrix.nrows();
        let mut out = DMatrix::<f64>::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                let a = self.matrix[(i, j)];
                out[(i, j)] = -a.im;
                out[(i, m + j)] = a.re;
                out[(m + i, j)] = a.re;
                out[(m + i, m + j)] = a.im;
            }
        }
        out
    }

    /// Two smallest singular values of [`Self::real_block`] and the largest
    /// residual `|A g|` over its two-dimensional near-null space, mapped back
    /// to complex vectors `g = u₂ + i u₁`.
    pub fn real_block_check(&self) -> (f64, f64, f64) {
        let m = self.matrix.nrows();
        let svd = self.real_block().svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let mut order: Vec<usize> = (0..2 * m).collect();
        order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let mut worst: f64 = 0.0;
        for &k in &order[..2] {
            let row = v_t.row(k);
            let g = DVector::<Complex64>::from_fn(m, |i, _| Complex64::new(row[m + i], row[i]));
            worst = worst.max((&self.matrix * &g).norm() / g.norm());
        }
        (svd.singular_values[order[0]], svd.singular_values[order[1]], worst)
    }
}

/// Bilinear pairing `Σ u_i v_i` (no conjugation).
pub fn bilinear(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

/// First-order correction at a resonance `z₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuCorrection {
    /// `dz/dε = -(B g, g) / (A' g, g)`.
    pub nu: Complex64,
    /// `dλ/dε = -2 z₀ ν`.
    pub lambda_slope: Complex64,
    pub sigma_min: f64,
    pub numerator: Complex64,
    pub denominator: Complex64,
}

pub fn nu_correction(prob: &Problem, v1: &Potential, z0: Complex64, n: usize) -> Result<NuCorrection> {
    let op = build_a(prob, z0, n)?;
    let (sigma_min, g) = op.null_vector();
    nu_from_operator(&op, v1, &g, sigma_min)
}

/// [`nu_correction`] with a caller-supplied null vector.
pub fn nu_from_operator(op: &NystromOperator, v1: &Potential, g: &DVector<Complex64>, sigma_min: f64) -> Result<NuCorrection> {
    let b = op.perturbation_matrix(v1)?;
    let numerator = bilinear(&(&b * g), g);
    let denominator = bilinear(&(&op.derivative * g), g);
    if denominator.norm() <= 1e-10 * bilinear(g, g).norm().max(1e-300) {
        return Err(Error::SmallDenominator(denominator.norm()));
    }
    let nu = -numerator / denominator;
    Ok(NuCorrection {
        nu,
        lambda_slope: -2.0 * op.z * nu,
        sigma_min,
        numerator,
        denominator,
    })
}

/// Resonance shifts `λ(ε) - λ(0)` of a one-parameter family, each refined
/// with method one from the unperturbed root `z0`.
pub fn shift_fd<F>(family: F, z0: Complex64, eps: &[f64], opts: &RefineOptions) -> Result<Vec<(f64, Complex64)>>
where
    F: Fn(f64) -> Problem,
{
    let base = family(0.0);
    let root0 = refine(|z| method_one::residual(&base, z, &MethodOneOptions::default()), z0, opts)?;
    let lambda0 = base.lambda_of(root0.z);
    eps.iter()
        .map(|&e| {
            if e == 0.0 {
                return Ok((e, Complex64::new(0.0, 0.0)));
            }
            let p = family(e);
            let r = refine(|z| method_one::residual(&p, z, &MethodOneOptions::default()), root0.z, opts)?;
            Ok((e, p.lambda_of(r.z) - lambda0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn image_coefficients() {
        let z = c(0.8, 0.3);
        assert!((reflection_coefficient(&BoundaryCondition::dirichlet(), z).unwrap() + 1.0).norm() < 1e-15);
        assert!((reflection_coefficient(&BoundaryCondition::neumann(), z).unwrap() - 1.0).norm() < 1e-15);
        let d = BoundaryCondition::dirichlet();
        assert!(greens_function(Some(&d), 0.0, 0.7, z).unwrap().norm() < 1e-15);
        let robin = BoundaryCondition::new(2.0, 1.0).unwrap();
        assert!(matches!(reflection_coefficient(&robin, c(2.0, 0.0)), Err(Error::SmallDenominator(_))));
    }

    #[test]
    fn kernel_satisfies_the_equation() {
        let bc = BoundaryCondition::new(0.7, -1.3).unwrap();
        let z = c(0.9, -0.4);
        let y = 1.1;
        let g = |x: f64| greens_function(Some(&bc), x, y, z).unwrap();
        let h = 1e-4;
        for x in [0.3, 2.0] {
            let second = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
            assert!((-second + z * z * g(x)).norm() < 1e-5);
        }
        let jump = (g(y + h) - g(y)) / h - (g(y) - g(y - h)) / h;
        assert!((jump + 1.0).norm() < 1e-3, "{jump}");
        let d0 = (-3.0 * g(0.0) + 4.0 * g(h) - g(2.0 * h)) / (2.0 * h);
        assert!((bc.a * g(0.0) + bc.b * d0).norm() < 1e-7);
    }

    #[test]
    fn kernel_derivative() {
        let bc = BoundaryCondition::new(1.0, 0.5).unwrap();
        let (x, y, z) = (0.4, 1.7, c(1.1, 0.6));
        let h = 1e-5;
        let fd = (greens_function(Some(&bc), x, y, z + h).unwrap() - greens_function(Some(&bc), x, y, z - h).unwrap()) / (2.0 * h);
        let exact = greens_function_dz(Some(&bc), x, y, z).unwrap();
        assert!((fd - exact).norm() < 1e-7 * exact.norm());
    }

    #[test]
    fn zero_potential_gives_identity() {
        let p = Problem::half_line(Potential::zero(), BoundaryCondition::dirichlet());
        let op = build_a(&p, c(1.0, 0.5), 20).unwrap();
        assert!((op.matrix.clone() - DMatrix::identity(op.matrix.nrows(), op.matrix.nrows())).norm() < 1e-15);
    }

    #[test]
    fn sign_indefinite_is_rejected() {
        let p = Problem::half_line(Potential::rittby(1.6).with_sector(1.0).unwrap(), BoundaryCondition::dirichlet());
        assert!(build_a(&p, c(1.0, 0.0), 20).is_err());
        let q = Problem::half_line(Potential::gaussian_sum(vec![(c(1.0, 0.0), 1.0), (c(-2.0, 0.0), 3.0)]), BoundaryCondition::dirichlet());
        assert!(matches!(build_a(&q, c(1.0, 0.0), 20), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bilinear_pairing_on_a_symmetric_family() {
        let a = |z: Complex64, e: f64| {
            DMatrix::from_row_slice(2, 2, &[z - 1.0 + e, c(0.0, 2.0), c(0.0, 2.0), z + 1.0])
        };
        // det = z² + 3 + ε(z + 1), root z₀ = i√3 at ε = 0
        let z0 = c(0.0, 3f64.sqrt());
        let m = a(z0, 0.0);
        let svd = m.clone().svd(false, true);
        let k = if svd.singular_values[0] < svd.singular_values[1] { 0 } else { 1 };
        let g: DVector<Complex64> = svd.v_t.unwrap().row(k).transpose().map(|c| c.conj());
        let da = DMatrix::<Complex64>::identity(2, 2);
        let db = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let nu = -bilinear(&(&db * &g), &g) / bilinear(&(&da * &g), &g);
        // implicit differentiation: dz/dε = -(z + 1)/(2z)
        let exact = -(z0 + 1.0) / (2.0 * z0);
        assert!((nu - exact).norm() < 1e-12, "{nu} vs {exact}");
        let sesqui = -(g.dotc(&(&db * &g))) / g.dotc(&(&da * &g));
        assert!((sesqui - exact).norm() > 1e-3);
    }
}
