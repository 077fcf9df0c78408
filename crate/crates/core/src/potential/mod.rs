//! Potentials `V(x)` of the operator `-d²/dx² + V`: built-in families and
//! parsed expressions, evaluation along rotated rays, norms and the ray
//! suprema entering the enclosure bounds.

pub mod expr;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
pub use expr::Expr;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    HalfLine,
    WholeLine,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::HalfLine => "halfline",
            Domain::WholeLine => "wholeline",
        })
    }
}

/// Built-in potential families.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    Zero,
    /// `-depth * exp(-x²)`; `depth` may be complex.
    Gaussian { depth: Complex64 },
    /// `x² exp(-x²/b²)`.
    ModifiedGaussian { b: f64 },
    /// `(x² - J) exp(-rate x²) + J`, tending to `J` at infinity.
    Rittby { j: f64, rate: f64 },
    /// `-exp((1 - sqrt(1 + 2 eps x²)) / eps)`, the Gaussian well at `eps = 0`.
    PerturbedGaussian { eps: f64 },
    /// `Σ w_k exp(-s_k x²)`.
    GaussianSum { terms: Vec<(Complex64, f64)> },
    /// `Σ w_k exp(-s_k |x|)`, continued analytically from the right half-plane.
    ExponentialSum { terms: Vec<(Complex64, f64)> },
    /// `-depth` on `|x| < width`, zero outside.
    SquareWell { depth: f64, width: f64 },
}

impl Builtin {
    fn name(&self) -> &'static str {
        match self {
            Builtin::Zero => "zero",
            Builtin::Gaussian { .. } => "gaussian",
            Builtin::ModifiedGaussian { .. } => "modified_gaussian",
            Builtin::Rittby { .. } => "rittby",
            Builtin::PerturbedGaussian { .. } => "perturbed_gaussian",
            Builtin::GaussianSum { .. } => "gaussian_sum",
            Builtin::ExponentialSum { .. } => "exponential_sum",
            Builtin::SquareWell { .. } => "square_well",
        }
    }

    /// `V(w) - V∞`, without cancellation when `V∞ ≠ 0`.
    fn eval_shifted(&self, w: Complex64) -> Complex64 {
        match self {
            Builtin::Rittby { j, rate } => (w * w - j) * (-rate * w * w).exp(),
            other => other.eval(w),
        }
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        match self {
            Builtin::Zero => ZERO,
            Builtin::Gaussian { depth } => -depth * (-w * w).exp(),
            Builtin::ModifiedGaussian { b } => w * w * (-w * w / (b * b)).exp(),
            Builtin::Rittby { j, rate } => (w * w - j) * (-rate * w * w).exp() + j,
            Builtin::PerturbedGaussian { eps } => {
                let w2 = w * w;
                if *eps == 0.0 {
                    -(-w2).exp()
                } else {
                    // (1 - sqrt(1+u))/eps = -2 w² / (1 + sqrt(1+u)), u = 2 eps w²
                    let root = (1.0 + 2.0 * eps * w2).sqrt();
                    -(-2.0 * w2 / (1.0 + root)).exp()
                }
            }
            Builtin::GaussianSum { terms } => terms.iter().map(|(c, s)| c * (-s * w * w).exp()).sum(),
            Builtin::ExponentialSum { terms } => {
                let r = if w.re >= 0.0 { w } else { -w };
                terms.iter().map(|(c, s)| c * (-s * r).exp()).sum()
            }
            Builtin::SquareWell { depth, width } => {
                if w.re.abs() < *width {
                    Complex64::new(-depth, 0.0)
                } else {
                    ZERO
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    Builtin(Builtin),
    Expression { source: String, expr: Expr },
}

/// A decaying (possibly complex) potential with its analyticity data.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    kind: PotentialKind,
    v_infinity: Complex64,
    alpha: f64,
    domain_hint: Domain,
    even: bool,
}

/// Finite sum `Σ w_k exp(-s_k |x|^r)` with real weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    pub power: u8,
    pub weights: Vec<f64>,
}

impl Potential {
    fn builtin(b: Builtin, v_infinity: f64, alpha: f64) -> Self {
        Potential {
            kind: PotentialKind::Builtin(b),
            v_infinity: Complex64::new(v_infinity, 0.0),
            alpha,
            domain_hint: Domain::HalfLine,
            even: true,
        }
    }

    pub fn zero() -> Self {
        Self::builtin(Builtin::Zero, 0.0, PI)
    }

    /// The Gaussian well `-exp(-x²)`.
    pub fn gaussian() -> Self {
        Self::gaussian_well(Complex64::new(1.0, 0.0))
    }

    pub fn gaussian_well(depth: Complex64) -> Self {
        Self::builtin(Builtin::Gaussian { depth }, 0.0, FRAC_PI_2)
    }

    pub fn modified_gaussian(b: f64) -> Self {
        Self::builtin(Builtin::ModifiedGaussian { b }, 0.0, FRAC_PI_2)
    }

    pub fn rittby(j: f64) -> Self {
        Self::builtin(Builtin::Rittby { j, rate: 0.1 }, j, FRAC_PI_2)
    }

    pub fn perturbed_gaussian(eps: f64) -> Self {
        let alpha = if eps > 0.0 { PI } else { FRAC_PI_2 };
        Self::builtin(Builtin::PerturbedGaussian { eps }, 0.0, alpha)
    }

    pub fn gaussian_sum(terms: Vec<(Complex64, f64)>) -> Self {
        Self::builtin(Builtin::GaussianSum { terms }, 0.0, FRAC_PI_2)
    }

    pub fn exponential_sum(terms: Vec<(Complex64, f64)>) -> Self {
        Self::builtin(Builtin::ExponentialSum { terms }, 0.0, PI)
    }

    pub fn square_well(depth: f64, width: f64) -> Self {
        Self::builtin(Builtin::SquareWell { depth, width }, 0.0, PI)
    }

    /// Parses an expression potential. The sector half-angle defaults to π
    /// and `V(∞)` is taken as the value far out on the real axis when it
    /// settles to a constant, otherwise zero.
    pub fn parse_expression(src: &str) -> Result<Self> {
        let expr = Expr::parse(src)?;
        let even = expr.is_even();
        let far = expr.eval(Complex64::new(1e3, 0.0));
        let farther = expr.eval(Complex64::new(2e3, 0.0));
        let v_infinity = if far.re.is_finite() && far.im.is_finite() && (far - farther).norm() < 1e-14 * (1.0 + far.norm()) {
            far
        } else {
            ZERO
        };
        Ok(Potential {
            kind: PotentialKind::Expression {
                source: src.to_string(),
                expr,
            },
            v_infinity,
            alpha: PI,
            domain_hint: Domain::HalfLine,
            even,
        })
    }

    /// Looks up a builtin by name; unknown keys in `params` are rejected.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match name {
            "zero" => &[],
            "gaussian" => &["depth", "depth_im"],
            "modified_gaussian" => &["b"],
            "rittby" => &["j"],
            "perturbed_gaussian" => &["eps"],
            "square_well" => &["depth", "width"],
            _ => return Err(Error::InvalidParameter(format!("unknown builtin potential `{name}`"))),
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!("`{name}` takes no parameter `{k}`")));
        }
        let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
        let p = match name {
            "zero" => Self::zero(),
            "gaussian" => Self::gaussian_well(Complex64::new(get("depth", 1.0), get("depth_im", 0.0))),
            "modified_gaussian" => {
                let b = get("b", 10.0);
                if b <= 0.0 {
                    return Err(Error::InvalidParameter("b must be positive".into()));
                }
                Self::modified_gaussian(b)
            }
            "rittby" => Self::rittby(get("j", 1.6)),
            "perturbed_gaussian" => {
                let eps = get("eps", 0.0);
                if eps < 0.0 {
                    return Err(Error::InvalidParameter("eps must be non-negative".into()));
                }
                Self::perturbed_gaussian(eps)
            }
            "square_well" => {
                let width = get("width", 1.0);
                if width <= 0.0 {
                    return Err(Error::InvalidParameter("width must be positive".into()));
                }
                Self::square_well(get("depth", 1.0), width)
            }
            _ => unreachable!(),
        };
        Ok(p)
    }

    pub fn with_domain_hint(mut self, domain: Domain) -> Self {
        self.domain_hint = domain;
        self
    }

    /// Overrides the declared sector half-angle; must lie in `(0, π]`.
    pub fn with_sector(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= PI) {
            return Err(Error::InvalidParameter(format!("sector angle {alpha} not in (0, pi]")));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            PotentialKind::Builtin(b) => b.name().to_string(),
            PotentialKind::Expression { source, .. } => source.clone(),
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        if let PotentialKind::Builtin(b) = &self.kind {
            match b {
                Builtin::Gaussian { depth } => {
                    m.insert("depth".into(), depth.re);
                    m.insert("depth_im".into(), depth.im);
                }
                Builtin::ModifiedGaussian { b } => {
                    m.insert("b".into(), *b);
                }
                Builtin::Rittby { j, .. } => {
                    m.insert("j".into(), *j);
                }
                Builtin::PerturbedGaussian { eps } => {
                    m.insert("eps".into(), *eps);
                }
                Builtin::SquareWell { depth, width } => {
                    m.insert("depth".into(), *depth);
                    m.insert("width".into(), *width);
                }
                Builtin::Zero | Builtin::GaussianSum { .. } | Builtin::ExponentialSum { .. } => {}
            }
        }
        m
    }

    pub fn v_infinity(&self) -> Complex64 {
        self.v_infinity
    }

    pub fn analytic_sector_alpha(&self) -> f64 {
        self.alpha
    }

    pub fn domain_hint(&self) -> Domain {
        self.domain_hint
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, PotentialKind::Builtin(Builtin::Zero))
    }

    pub fn is_analytic(&self) -> bool {
        match &self.kind {
            PotentialKind::Builtin(Builtin::SquareWell { .. }) => false,
            PotentialKind::Builtin(_) => true,
            PotentialKind::Expression { expr, .. } => expr.is_analytic(),
        }
    }

    /// Analytic on each interval between consecutive [`Potential::breakpoints`],
    /// with complex points assigned to a piece by their real part.
    pub fn is_piecewise_analytic(&self) -> bool {
        self.is_analytic() || matches!(self.kind, PotentialKind::Builtin(Builtin::SquareWell { .. }))
    }

    /// True when `V` takes real values on the real axis.
    pub fn is_real(&self) -> bool {
        if self.v_infinity.im != 0.0 {
            return false;
        }
        match &self.kind {
            PotentialKind::Builtin(Builtin::Gaussian { depth }) => depth.im == 0.0,
            PotentialKind::Builtin(Builtin::GaussianSum { terms } | Builtin::ExponentialSum { terms }) => {
                terms.iter().all(|(c, _)| c.im == 0.0)
            }
            PotentialKind::Builtin(_) => true,
            // Expressions only contain real literals.
            PotentialKind::Expression { .. } => true,
        }
    }

    /// Rate `β` of the Gaussian factor `exp(-β x²)` governing the decay, when
    /// the family has one. Used to place integration contours.
    pub fn gaussian_rate(&self) -> Option<f64> {
        match &self.kind {
            PotentialKind::Builtin(b) => match b {
                Builtin::Gaussian { .. } | Builtin::PerturbedGaussian { .. } => Some(1.0),
                Builtin::ModifiedGaussian { b } => Some(1.0 / (b * b)),
                Builtin::Rittby { rate, .. } => Some(*rate),
                Builtin::GaussianSum { terms } => terms.iter().map(|t| t.1).reduce(f64::min),
                _ => None,
            },
            PotentialKind::Expression { .. } => None,
        }
    }

    /// Points on the positive real axis where `V` is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            PotentialKind::Builtin(Builtin::SquareWell { width, .. }) => vec![*width],
            _ => Vec::new(),
        }
    }

    /// The representation `Σ w_k exp(-s_k |x|^r)`, when `V` is declared as one.
    pub fn mixture(&self) -> Option<Mixture> {
        let (power, terms): (u8, Vec<(Complex64, f64)>) = match &self.kind {
            PotentialKind::Builtin(Builtin::Gaussian { depth }) => (2, vec![(-depth, 1.0)]),
            PotentialKind::Builtin(Builtin::PerturbedGaussian { eps }) if *eps == 0.0 => {
                (2, vec![(Complex64::new(-1.0, 0.0), 1.0)])
            }
            PotentialKind::Builtin(Builtin::GaussianSum { terms }) => (2, terms.clone()),
            PotentialKind::Builtin(Builtin::ExponentialSum { terms }) => (1, terms.clone()),
            _ => return None,
        };
        if terms.iter().any(|(c, s)| c.im != 0.0 || *s < 0.0) {
            return None;
        }
        Some(Mixture {
            power,
            weights: terms.iter().map(|(c, _)| c.re).collect(),
        })
    }

    fn raw(&self, w: Complex64) -> Complex64 {
        match &self.kind {
            PotentialKind::Builtin(b) => b.eval(w),
            PotentialKind::Expression { expr, .. } => expr.eval(w),
        }
    }

    fn raw_shifted(&self, w: Complex64) -> Complex64 {
        match &self.kind {
            PotentialKind::Builtin(b) => b.eval_shifted(w),
            PotentialKind::Expression { expr, .. } => expr.eval(w) - self.v_infinity,
        }
    }

    /// `V(x) - V∞` at a real point.
    pub fn eval_shifted_real(&self, x: f64) -> Complex64 {
        self.raw_shifted(Complex64::new(x, 0.0))
    }

    /// Value of `V` at a real point.
    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.raw(Complex64::new(x, 0.0))
    }

    /// Value of the analytic continuation of `V` at `w`.
    ///
    /// Complex points must lie in the double sector `|arg(±w)| ≤ α/2`.
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        if w.im == 0.0 {
            return Ok(self.eval_real(w.re));
        }
        if !self.is_analytic() {
            return Err(Error::NonAnalytic {
                what: self.name(),
                w,
            });
        }
        let a = w.arg().abs();
        let a = a.min(PI - a);
        if 2.0 * a > self.alpha + 1e-12 {
            return Err(Error::OutsideSector { w, alpha: self.alpha });
        }
        Ok(self.raw(w))
    }


    /// `V(w) - V∞` without sector checks.
    pub(crate) fn eval_shifted_unchecked(&self, w: Complex64) -> Complex64 {
        self.raw_shifted(w)
    }

    /// `∫ |V(x) - V∞| dx` over the domain, to absolute accuracy `tol`.
    pub fn l1_norm(&self, domain: Domain, tol: f64) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let half = |sign: f64, tol: f64| -> Result<f64> {
            let f = |x: f64| self.eval_shifted_real(sign * x).norm();
            let mut start = 0.0;
            let mut total = 0.0;
            let bps = self.breakpoints();
            let pieces = bps.len() + 1;
            for bp in bps {
                total += quadrature::integrate(f, start, bp, tol / (2.0 * pieces as f64), 4000)?.0;
                start = bp;
            }
            Ok(total + quadrature::integrate_to_infinity(f, start, tol / (2.0 * pieces as f64), 4000)?.0)
        };
        match domain {
            Domain::HalfLine => half(1.0, tol),
            Domain::WholeLine if self.even => Ok(2.0 * half(1.0, tol / 2.0)?),
            Domain::WholeLine => Ok(half(1.0, tol / 2.0)? + half(-1.0, tol / 2.0)?),
        }
    }

    fn check_theta(&self, theta: f64) -> Result<()> {
        if !(0.0..=self.alpha + 1e-12).contains(&theta) {
            return Err(Error::OutsideSector {
                w: Complex64::from_polar(1.0, theta / 2.0),
                alpha: self.alpha,
            });
        }
        if theta > 0.0 && !self.is_analytic() {
            return Err(Error::NonAnalytic {
                what: self.name(),
                w: Complex64::from_polar(1.0, theta / 2.0),
            });
        }
        Ok(())
    }

    /// `a(θ) = sup_v Im(e^{iθ} V(e^{iθ/2} v))`.
    pub fn ray_sup_a(&self, theta: f64, tol: f64) -> Result<f64> {
        self.check_theta(theta)?;
        let rot = Complex64::from_polar(1.0, theta);
        let limit = (rot * self.v_infinity).im;
        self.ray_supremum(theta, tol, |v| (rot * v).im, limit, RaySettings::default())
    }

    /// `c(θ) = sup_v |V(e^{iθ/2} v)|`.
    pub fn sup_norm_rotated(&self, theta: f64, tol: f64) -> Result<f64> {
        self.check_theta(theta)?;
        self.ray_supremum(theta, tol, |v| v.norm(), self.v_infinity.norm(), RaySettings::default())
    }

    /// Maximum of `V(x) + x V'(x) / 2` over real `x` (the first-order slope
    /// of `a(θ)` at `θ = 0`), with the derivative taken by a five-point
    /// stencil.
    pub fn virial_max(&self, tol: f64) -> Result<f64> {
        let f = |x: f64| {
            let h = 1e-3 * (1.0 + x.abs());
            let d = (-self.eval_real(x + 2.0 * h).re + 8.0 * self.eval_real(x + h).re
                - 8.0 * self.eval_real(x - h).re
                + self.eval_real(x - 2.0 * h).re)
                / (12.0 * h);
            self.eval_real(x).re + 0.5 * x * d
        };
        let limit = self.v_infinity.re;
        self.real_supremum(f, limit, tol)
    }

    /// `M = max V(x)` over real `x`.
    pub fn real_max(&self, tol: f64) -> Result<f64> {
        let limit = self.v_infinity.re;
        self.real_supremum(|x| self.eval_real(x).re, limit, tol)
    }

    fn real_supremum<F: Fn(f64) -> f64>(&self, f: F, limit: f64, tol: f64) -> Result<f64> {
        let g = |v: Complex64| Complex64::new(f(v.re), 0.0);
        let settings = RaySettings::default();
        // Reuse the ray scanner on the real axis with a custom objective.
        let mut best = limit;
        for sign in self.signs() {
            let s = scan_ray(
                |v| g(Complex64::new(sign * v, 0.0)),
                |v| self.eval_shifted_real(sign * v).norm(),
                |z| z.re,
                tol,
                settings,
            )?;
            best = best.max(s);
        }
        Ok(best)
    }

    fn signs(&self) -> &'static [f64] {
        if self.even {
            &[1.0]
        } else {
            &[1.0, -1.0]
        }
    }

    fn ray_supremum<F: Fn(Complex64) -> f64 + Copy>(
        &self,
        theta: f64,
        tol: f64,
        objective: F,
        limit: f64,
        settings: RaySettings,
    ) -> Result<f64> {
        if self.is_zero() {
            return Ok(limit.max(0.0));
        }
        let half = Complex64::from_polar(1.0, theta / 2.0);
        let mut best = limit;
        for &sign in self.signs() {
            let s = scan_ray(
                |v| self.raw(half * (sign * v)),
                |v| self.raw_shifted(half * (sign * v)).norm(),
                objective,
                tol,
                settings,
            )?;
            best = best.max(s);
        }
        Ok(best)
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        let p = self.params();
        if !p.is_empty() {
            let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct RaySettings {
    cap: f64,
    max_samples: usize,
}

impl Default for RaySettings {
    fn default() -> Self {
        RaySettings {
            cap: 400.0,
            max_samples: 2_000_000,
        }
    }
}

/// Samples `objective(value(v))` on `v ∈ [0, X]` with a step adapted to the
/// phase and modulus variation of `value`, stops once `decay(v)` stays below
/// `tol / 10`, and polishes the best local maxima by golden-section search.
fn scan_ray<V, D, F>(value: V, decay: D, objective: F, tol: f64, settings: RaySettings) -> Result<f64>
where
    V: Fn(f64) -> Complex64,
    D: Fn(f64) -> f64,
    F: Fn(Complex64) -> f64,
{
    let obj = |v: f64| objective(value(v));
    let threshold = tol / 10.0;
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(4096);
    let mut v = 0.0;
    let mut h: f64 = 1e-2;
    let mut prev = value(v);
    samples.push((v, objective(prev)));
    // window maxima for the growth test
    let windows = 8usize;
    let mut window_max = vec![f64::NEG_INFINITY; windows];
    loop {
        let next_v = v + h;
        let next = value(next_v);
        let dphase = if prev.norm() > 0.0 && next.norm() > 0.0 {
            (next / prev).arg().abs()
        } else {
            0.0
        };
        let scale = prev.norm().max(next.norm());
        let drel = if scale > 0.0 { (next - prev).norm() / scale } else { 0.0 };
        if (dphase > 0.5 || drel > 0.2) && h > 1e-6 {
            h *= 0.5;
            continue;
        }
        v = next_v;
        prev = next;
        let o = objective(next);
        samples.push((v, o));
        let wi = ((v / settings.cap) * windows as f64).floor() as usize;
        if wi < windows {
            window_max[wi] = window_max[wi].max(o);
        }
        if dphase < 0.1 && drel < 0.05 {
            h = (h * 1.5).min(0.1);
        }
        if v >= 1.0 && decay(v) < threshold {
            let ahead = [1.25, 1.5, 2.0, 3.0];
            if ahead.iter().all(|f| decay(v * f) < threshold) {
                break;
            }
        }
        if v >= settings.cap || samples.len() > settings.max_samples {
            // Not decayed: accept the supremum only if it is not still growing.
            let early = window_max[..windows / 4].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let late = window_max[windows / 2..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let last = window_max[windows - 1];
            let grows = window_max[windows / 2..].windows(2).all(|p| p[1] >= p[0]);
            if late > 2.0 * early.abs().max(1e-300) && last >= late && grows {
                return Err(Error::Unbounded { cutoff: v });
            }
            break;
        }
    }
    let mut best = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    // Local maxima of the sampled objective, best first.
    let mut peaks: Vec<usize> = (0..samples.len())
        .filter(|&i| {
            let l = if i == 0 { f64::NEG_INFINITY } else { samples[i - 1].1 };
            let r = samples.get(i + 1).map_or(f64::NEG_INFINITY, |s| s.1);
            samples[i].1 >= l && samples[i].1 >= r
        })
        .collect();
    peaks.sort_by(|&a, &b| samples[b].1.total_cmp(&samples[a].1));
    for &i in peaks.iter().take(6) {
        let a = if i == 0 { samples[0].0 } else { samples[i - 1].0 };
        let b = samples.get(i + 1).map_or(samples[i].0, |s| s.0);
        if b > a {
            let (_, m) = quadrature::golden_max(obj, a, b, 1e-12 * (1.0 + b));
            best = best.max(m);
        }
    }
    Ok(best)
}
