//! Quadrature rules and one-dimensional maximization.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Seven-point Gauss–Lobatto nodes on `[0, 1]`.
pub const LOBATTO_NODES: [f64; 7] = [
    0.0,
    0.084_888_051_860_716_54,
    0.265_575_603_264_642_9,
    0.5,
    0.734_424_396_735_357_1,
    0.915_111_948_139_283_5,
    1.0,
];
/// Weights matching [`LOBATTO_NODES`] (they sum to one).
pub const LOBATTO_WEIGHTS: [f64; 7] = [
    0.023_809_523_809_523_808,
    0.138_413_023_680_782_97,
    0.215_872_690_604_931_3,
    0.243_809_523_809_523_8,
    0.215_872_690_604_931_3,
    0.138_413_023_680_782_97,
    0.023_809_523_809_523_808,
];

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of a complex
/// integrand over `[a, b]`. Returns the value and the error estimate.
pub fn integrate_complex<F>(mut f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Complex64,
{
    if a == b {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let (value, err) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, err });
    let mut total = value;
    let mut total_err = err;
    let mut splits = 0;
    while total_err > tol {
        if splits >= budget {
            return Err(Error::NonConvergence { tol, budget });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::NonConvergence { tol, budget });
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
        splits += 1;
        // Guard against drift of the running error sum.
        if splits % 64 == 0 {
            total_err = heap.iter().map(|p| p.err).sum();
            total = heap.iter().map(|p| p.value).sum();
        }
    }
    if !total.re.is_finite() || !total.im.is_finite() {
        return Err(Error::NonFinite("quadrature sum".into()));
    }
    Ok((total, total_err))
}

/// Real-valued wrapper around [`integrate_complex`].
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, tol, budget).map(|(v, e)| (v.re, e))
}

/// Integral over `[a, ∞)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F>(mut f: F, a: f64, tol: f64, budget: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    integrate(
        |t| {
            let u = 1.0 - t;
            let x = a + t / u;
            let v = f(x) / (u * u);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
        budget,
    )
}

/// Gauss–Legendre nodes and weights on `[a, b]`, ordered by node.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(n.max(2)).expect("degree >= 2");
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut pairs: Vec<(f64, f64)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > tol && iter < 200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}


struct ProductTables {
    /// Lagrange basis of the Lobatto nodes at Gauss–Legendre nodes on [0, 1].
    basis_at_gl: Vec<[f64; 7]>,
    gl: Vec<(f64, f64)>,
    /// Monomial coefficients of each Lagrange basis polynomial.
    monomial: [[f64; 7]; 7],
}

fn product_tables() -> &'static ProductTables {
    static TABLES: OnceLock<ProductTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let gl = gauss_legendre(32, 0.0, 1.0);
        let basis = |j: usize, t: f64| {
            let mut v = 1.0;
            for m in 0..7 {
                if m != j {
                    v *= (t - LOBATTO_NODES[m]) / (LOBATTO_NODES[j] - LOBATTO_NODES[m]);
                }
            }
            v
        };
        let basis_at_gl = gl.iter().map(|&(t, _)| std::array::from_fn(|j| basis(j, t))).collect();
        let mut monomial = [[0.0; 7]; 7];
        for (j, row) in monomial.iter_mut().enumerate() {
            let mut poly = vec![1.0];
            let mut denom = 1.0;
            for m in 0..7 {
                if m == j {
                    continue;
                }
                let mut next = vec![0.0; poly.len() + 1];
                for (k, c) in poly.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * LOBATTO_NODES[m];
                }
                poly = next;
                denom *= LOBATTO_NODES[j] - LOBATTO_NODES[m];
            }
            for k in 0..7 {
                row[k] = poly[k] / denom;
            }
        }
        ProductTables {
            basis_at_gl,
            gl,
            monomial,
        }
    })
}

/// Weights `W_j = ∫₀¹ L_j(τ) e^{κτ} dτ` for the seven Lobatto nodes, so that
/// `Σ W_j g(τ_j)` integrates `g(τ) e^{κτ}` exactly for `g` of degree ≤ 6.
pub fn exp_product_weights(kappa: Complex64) -> [Complex64; 7] {
    let t = product_tables();
    if kappa.norm() <= 10.0 {
        let mut w = [Complex64::new(0.0, 0.0); 7];
        for (q, &(tau, gw)) in t.gl.iter().enumerate() {
            let e = (kappa * tau).exp() * gw;
            for j in 0..7 {
                w[j] += e * t.basis_at_gl[q][j];
            }
        }
        w
    } else {
        let ek = kappa.exp();
        let mut mu = [Complex64::new(0.0, 0.0); 7];
        mu[0] = (ek - 1.0) / kappa;
        for k in 1..7 {
            mu[k] = (ek - mu[k - 1] * k as f64) / kappa;
        }
        std::array::from_fn(|j| (0..7).map(|k| mu[k] * t.monomial[j][k]).sum())
    }
}
