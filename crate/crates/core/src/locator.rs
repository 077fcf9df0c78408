//! Complex root finding for residual functions: Muller refinement, argument
//! principle scans, and separation of nearly coincident pairs.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::method_one::{self, MethodOneOptions};
use crate::method_two;
use crate::problem::Problem;
use crate::whole_line;

/// Which residual produced a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MethodTag {
    MethodOne,
    MethodTwo,
    Phi,
    BoundState,
    Custom,
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodTag::MethodOne => "method-one",
            MethodTag::MethodTwo => "method-two",
            MethodTag::Phi => "phi",
            MethodTag::BoundState => "bound-state",
            MethodTag::Custom => "custom",
        })
    }
}

impl std::str::FromStr for MethodTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "method-one" | "1" | "one" => Ok(MethodTag::MethodOne),
            "method-two" | "2" | "two" => Ok(MethodTag::MethodTwo),
            "phi" => Ok(MethodTag::Phi),
            "bound-state" => Ok(MethodTag::BoundState),
            "custom" => Ok(MethodTag::Custom),
            _ => Err(Error::InvalidParameter(format!("unknown method `{s}`"))),
        }
    }
}

/// Boundary values `(f(0), f'(0))` of the outgoing solution for the
/// half-line methods.
pub fn boundary_pair(prob: &Problem, method: MethodTag, z: Complex64) -> Result<(Complex64, Complex64)> {
    match method {
        MethodTag::MethodOne => {
            let st = method_one::boundary_values(prob, z, &MethodOneOptions::default())?;
            Ok((st.f0(), st.f0_prime()))
        }
        MethodTag::MethodTwo => {
            let st = method_two::boundary_values(prob, z)?;
            Ok((st.f0, st.f0_prime))
        }
        other => Err(Error::Unsupported(format!("{other} has no boundary values"))),
    }
}

/// Residual of `prob` at `z` for the chosen method: `a f(0) + b f'(0)` for
/// the half-line methods, `φ(z)` for `Phi`. Analytic in `z`.
pub fn residual(prob: &Problem, method: MethodTag, z: Complex64) -> Result<Complex64> {
    match method {
        MethodTag::MethodOne | MethodTag::MethodTwo => {
            let (f0, fp0) = boundary_pair(prob, method, z)?;
            Ok(prob.bc.apply(f0, fp0))
        }
        MethodTag::BoundState => method_two::bound_state_residual(prob, z),
        MethodTag::Phi => Ok(whole_line::phi(prob, z)?.phi),
        MethodTag::Custom => Err(Error::Unsupported("custom residuals are supplied by the caller".into())),
    }
}

/// Size of the boundary data near `z`, `max(1, |f(0)| + |f'(0)|)`; 1 for
/// methods without boundary values.
pub fn residual_scale(prob: &Problem, method: MethodTag, z: Complex64) -> f64 {
    boundary_pair(prob, method, z).map_or(1.0, |(f0, fp0)| (f0.norm() + fp0.norm()).max(1.0))
}

/// Refines a root of [`residual`] divided by [`residual_scale`] at the
/// guess, and packages it as a [`Resonance`].
pub fn solve(prob: &Problem, method: MethodTag, guess: Complex64, opts: &RefineOptions) -> Result<Resonance> {
    let scale = residual_scale(prob, method, guess);
    let root = refine(|z| Ok(residual(prob, method, z)? / scale), guess, opts)?;
    Ok(Resonance::from_root(root, prob, method))
}

/// Follows a ladder of resonances: row `k` is solved on `problems(k)`, the
/// first two rows start from `seeds` and later rows from [`ladder_guess`].
pub fn ladder<P>(problems: P, method: MethodTag, seeds: [Complex64; 2], count: usize, opts: &RefineOptions) -> Vec<Result<Resonance>>
where
    P: Fn(usize) -> Problem,
{
    let mut out: Vec<Result<Resonance>> = Vec::with_capacity(count);
    let mut track: Vec<Complex64> = Vec::with_capacity(count);
    for k in 0..count {
        let prob = problems(k);
        let guess = if k < 2 { seeds[k] } else { ladder_guess(&prob, track[k - 2], track[k - 1]) };
        let res = solve(&prob, method, guess, opts);
        track.push(res.as_ref().map(|r| r.z).unwrap_or(guess));
        out.push(res);
    }
    out
}

/// Result of a converged root iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub z: Complex64,
    pub residual_abs: f64,
    pub iterations: usize,
    pub history: Vec<(Complex64, f64)>,
}

/// A located resonance `λ = V∞ - z²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub lambda: Complex64,
    pub z: Complex64,
    pub residual_abs: f64,
    pub method: MethodTag,
    pub iterations: usize,
    pub refinement_history: Vec<(Complex64, f64)>,
}

impl Resonance {
    pub fn from_root(root: Root, prob: &Problem, method: MethodTag) -> Self {
        Resonance {
            lambda: prob.lambda_of(root.z),
            z: root.z,
            residual_abs: root.residual_abs,
            method,
            iterations: root.iterations,
            refinement_history: root.history,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// Step tolerance, relative to `1 + |z|`.
    pub tol: f64,
    /// Bound on `|residual|` at the root.
    pub tol_res: f64,
    pub max_iter: usize,
    /// Require `Re z > 0` for every iterate.
    pub right_half_plane: bool,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            tol: 1e-10,
            tol_res: 1e-9,
            max_iter: 60,
            right_half_plane: true,
        }
    }
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Evaluates `f`, nudging the point when the residual reports a Riccati pole.
fn eval_nudged<F>(f: &mut F, z: Complex64) -> Result<(Complex64, Complex64)>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut w = z;
    let mut last = None;
    for k in 0..4 {
        match f(w) {
            Ok(v) if is_finite(v) => return Ok((w, v)),
            Ok(_) => last = Some(Error::NonFinite(format!("residual at {w}"))),
            Err(e @ (Error::RiccatiPole { .. } | Error::NonFinite(_) | Error::StepUnderflow { .. })) => last = Some(e),
            Err(e) => return Err(e),
        }
        let kick = Complex64::from_polar(1e-3 * (1.0 + z.norm()) * (k + 1) as f64, PI / 3.0 * (k + 1) as f64);
        w = z + kick;
    }
    Err(last.unwrap_or(Error::NonFinite("residual".into())))
}

/// Muller iteration from `guess`, with a secant step whenever the
/// quadratic model degenerates.
pub fn refine<F>(mut f: F, guess: Complex64, opts: &RefineOptions) -> Result<Root>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if opts.right_half_plane && !(guess.re > 0.0) {
        return Err(Error::Escaped(guess));
    }
    let delta = 1e-3 * guess.norm().max(0.1);
    let mut starts = [guess - delta, guess + Complex64::new(0.0, delta), guess];
    if opts.right_half_plane {
        for s in starts.iter_mut() {
            if s.re <= 0.0 {
                *s = Complex64::new(0.5 * guess.re, s.im);
            }
        }
    }
    let mut history = Vec::new();
    let mut pts = Vec::with_capacity(3);
    for s in starts {
        let (w, v) = eval_nudged(&mut f, s)?;
        history.push((w, v.norm()));
        pts.push((w, v));
    }
    let (mut z0, mut f0) = pts[0];
    let (mut z1, mut f1) = pts[1];
    let (mut z2, mut f2) = pts[2];
    if f2.norm() == 0.0 {
        return Ok(Root {
            z: z2,
            residual_abs: 0.0,
            iterations: 0,
            history,
        });
    }
    for it in 1..=opts.max_iter {
        let d01 = (f1 - f0) / (z1 - z0);
        let d12 = (f2 - f1) / (z2 - z1);
        let d012 = (d12 - d01) / (z2 - z0);
        let w = d12 + d012 * (z2 - z1);
        let disc = (w * w - 4.0 * f2 * d012).sqrt();
        let den = if (w + disc).norm() >= (w - disc).norm() { w + disc } else { w - disc };
        let mut step = if den.norm() > 0.0 && is_finite(den) {
            -2.0 * f2 / den
        } else if d12.norm() > 0.0 && is_finite(d12) {
            -f2 / d12
        } else {
            Complex64::new(delta, delta)
        };
        if !is_finite(step) {
            step = -f2 / d12;
        }
        let limit = 0.5 * (1.0 + z2.norm());
        if step.norm() > limit {
            step *= limit / step.norm();
        }
        let mut z3 = z2 + step;
        if opts.right_half_plane {
            let mut tries = 0;
            while z3.re <= 0.0 && tries < 6 {
                step *= 0.5;
                z3 = z2 + step;
                tries += 1;
            }
            if z3.re <= 0.0 {
                return Err(Error::Escaped(z3));
            }
        }
        let (z3, f3) = eval_nudged(&mut f, z3)?;
        history.push((z3, f3.norm()));
        let moved = (z3 - z2).norm();
        if (moved <= opts.tol * (1.0 + z3.norm()) && f3.norm() <= opts.tol_res) || f3.norm() == 0.0 {
            return Ok(Root {
                z: z3,
                residual_abs: f3.norm(),
                iterations: it,
                history,
            });
        }
        if moved == 0.0 {
            break;
        }
        (z0, f0) = (z1, f1);
        (z1, f1) = (z2, f2);
        (z2, f2) = (z3, f3);
    }
    Err(Error::RootNonConvergence {
        iterations: opts.max_iter,
        last: z2,
        residual: f2.norm(),
    })
}

/// Axis-aligned rectangle in the `z` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Result<Self> {
        let r = Rect {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
        };
        if !(r.re_min < r.re_max && r.im_min < r.im_max) {
            return Err(Error::InvalidParameter(format!("degenerate rectangle {re:?} x {im:?}")));
        }
        Ok(r)
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&z.re) && (self.im_min..=self.im_max).contains(&z.im)
    }

    fn size(&self) -> f64 {
        (self.re_max - self.re_min).max(self.im_max - self.im_min)
    }

    fn grown(&self, by: f64) -> Rect {
        Rect {
            re_min: self.re_min - by,
            re_max: self.re_max + by,
            im_min: self.im_min - by,
            im_max: self.im_max + by,
        }
    }

    fn quarters(&self, split: Complex64) -> [Rect; 4] {
        let (xm, ym) = (split.re, split.im);
        [
            Rect { re_min: self.re_min, re_max: xm, im_min: self.im_min, im_max: ym },
            Rect { re_min: xm, re_max: self.re_max, im_min: self.im_min, im_max: ym },
            Rect { re_min: xm, re_max: self.re_max, im_min: ym, im_max: self.im_max },
            Rect { re_min: self.re_min, re_max: xm, im_min: ym, im_max: self.im_max },
        ]
    }

    /// Counterclockwise corners.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

/// Memoizing wrapper so shared edges of neighbouring rectangles are
/// evaluated once.
pub struct Memo<F> {
    f: F,
    cache: HashMap<(u64, u64), Complex64>,
    pub evaluations: usize,
}

impl<F> Memo<F>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    pub fn new(f: F) -> Self {
        Memo {
            f,
            cache: HashMap::new(),
            evaluations: 0,
        }
    }

    pub fn eval(&mut self, z: Complex64) -> Result<Complex64> {
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(v) = self.cache.get(&key) {
            return Ok(*v);
        }
        let v = (self.f)(z)?;
        if !is_finite(v) {
            return Err(Error::NonFinite(format!("residual at {z}")));
        }
        self.evaluations += 1;
        self.cache.insert(key, v);
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingOptions {
    /// Initial samples per edge.
    pub samples_per_edge: usize,
    /// Largest accepted phase change between neighbouring samples.
    pub max_phase_step: f64,
    /// Smallest sample spacing relative to the rectangle size.
    pub min_spacing: f64,
    /// `|f|` below this (relative to the typical sample) counts as a zero.
    pub zero_rel: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        WindingOptions {
            samples_per_edge: 16,
            max_phase_step: FRAC_PI_4,
            min_spacing: 1e-9,
            zero_rel: 1e-10,
        }
    }
}

/// Winding number together with the contour moments
/// `(1/2πi) ∮ z^k f'/f dz`, `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourCount {
    pub winding: i64,
    pub moments: [Complex64; 3],
}

struct EdgeWalk<'a, F> {
    memo: &'a mut Memo<F>,
    opts: WindingOptions,
    min_step: f64,
    tiny: f64,
    dlog: [Complex64; 3],
    phase: f64,
}

impl<F> EdgeWalk<'_, F>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    fn check(&self, z: Complex64, v: Complex64) -> Result<()> {
        if v.norm() <= self.tiny {
            return Err(Error::ZeroOnContour(z));
        }
        Ok(())
    }

    fn segment(&mut self, a: Complex64, fa: Complex64, b: Complex64, fb: Complex64) -> Result<()> {
        let d = (fb / fa).arg();
        if d.abs() > self.opts.max_phase_step {
            if (b - a).norm() < self.min_step {
                return Err(Error::ZeroOnContour(0.5 * (a + b)));
            }
            let m = 0.5 * (a + b);
            let fm = self.memo.eval(m)?;
            self.check(m, fm)?;
            self.segment(a, fa, m, fm)?;
            return self.segment(m, fm, b, fb);
        }
        let dl = Complex64::new((fb.norm() / fa.norm()).ln(), d);
        let (za, zb) = (a, b);
        self.dlog[0] += dl;
        self.dlog[1] += dl * 0.5 * (za + zb);
        self.dlog[2] += dl * 0.5 * (za * za + zb * zb);
        self.phase += d;
        Ok(())
    }
}

/// Argument-principle count of zeros of `f` inside `rect`.
pub fn contour_count<F>(memo: &mut Memo<F>, rect: &Rect, opts: &WindingOptions) -> Result<ContourCount>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    polygon_count(memo, &rect.corners(), opts)
}

/// Argument-principle count over the closed polygon through `vertices`,
/// taken counter-clockwise.
pub fn polygon_count<F>(memo: &mut Memo<F>, vertices: &[Complex64], opts: &WindingOptions) -> Result<ContourCount>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if vertices.len() < 3 {
        return Err(Error::InvalidParameter("a polygon needs at least three vertices".into()));
    }
    let size = vertices
        .iter()
        .flat_map(|a| vertices.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    let m = vertices.len();
    let n = opts.samples_per_edge.max(2);
    let mut samples = Vec::with_capacity(m * n + 1);
    for e in 0..m {
        let (a, b) = (vertices[e], vertices[(e + 1) % m]);
        for k in 0..n {
            let z = a + (b - a) * (k as f64 / n as f64);
            samples.push((z, memo.eval(z)?));
        }
    }
    samples.push(samples[0]);
    let mut mags: Vec<f64> = samples.iter().map(|s| s.1.norm()).collect();
    mags.sort_by(f64::total_cmp);
    let typical = mags[mags.len() / 2];
    let mut walk = EdgeWalk {
        memo,
        opts: *opts,
        min_step: opts.min_spacing * size,
        tiny: opts.zero_rel * typical,
        dlog: [Complex64::new(0.0, 0.0); 3],
        phase: 0.0,
    };
    for s in &samples {
        walk.check(s.0, s.1)?;
    }
    for w in samples.windows(2) {
        walk.segment(w[0].0, w[0].1, w[1].0, w[1].1)?;
    }
    let turns = walk.phase / (2.0 * PI);
    let winding = turns.round();
    if (turns - winding).abs() > 1e-6 {
        return Err(Error::NonConvergence { tol: 1e-6, budget: walk.memo.evaluations });
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    Ok(ContourCount {
        winding: winding as i64,
        moments: walk.dlog.map(|m| m / two_pi_i),
    })
}

/// Winding number of `f` around the polygon through `vertices`.
pub fn polygon_winding<F>(f: F, vertices: &[Complex64], opts: &WindingOptions) -> Result<i64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    polygon_count(&mut Memo::new(f), vertices, opts).map(|c| c.winding)
}

/// Winding number of `f` around `rect`.
pub fn winding_number<F>(f: F, rect: &Rect, opts: &WindingOptions) -> Result<i64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    contour_count(&mut Memo::new(f), rect, opts).map(|c| c.winding)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub depth: usize,
    pub winding: WindingOptions,
    pub jitter_retries: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            depth: 6,
            winding: WindingOptions::default(),
            jitter_retries: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub rect: Rect,
    pub winding: i64,
    /// Every rectangle visited below the root with its winding number.
    pub subdivisions: Vec<(Rect, i64)>,
    /// Parent/children windings of every split, for additivity checks.
    pub splits: Vec<(i64, [i64; 4])>,
    /// Root estimates: one per simple leaf, two per unresolved pair.
    pub candidates: Vec<Complex64>,
    /// Leaves still holding two or more zeros at the depth limit.
    pub unresolved: Vec<(Rect, i64)>,
    pub evaluations: usize,
}

fn count_jittered<F>(memo: &mut Memo<F>, rect: &Rect, opts: &ScanOptions) -> Result<(Rect, ContourCount)>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut r = *rect;
    for attempt in 0..=opts.jitter_retries {
        match contour_count(memo, &r, &opts.winding) {
            Ok(c) => return Ok((r, c)),
            Err(Error::ZeroOnContour(z)) if attempt < opts.jitter_retries => {
                r = rect.grown(1e-3 * rect.size() * (attempt + 1) as f64 * 0.731);
                let _ = z;
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

fn pair_from_moments(c: &ContourCount) -> [Complex64; 2] {
    // zeros are roots of t² - s₁ t + (s₁² - s₂)/2
    let s1 = c.moments[1];
    let s2 = c.moments[2];
    let p = (s1 * s1 - s2) * 0.5;
    let d = (s1 * s1 - 4.0 * p).sqrt();
    [(s1 + d) * 0.5, (s1 - d) * 0.5]
}

/// Winding-number quadtree over `rect`: splits until every leaf holds at
/// most one zero or the depth is exhausted.
pub fn scan<F>(f: F, rect: &Rect, opts: &ScanOptions) -> Result<ScanReport>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut memo = Memo::new(f);
    let (root, count) = count_jittered(&mut memo, rect, opts)?;
    let mut report = ScanReport {
        rect: root,
        winding: count.winding,
        subdivisions: Vec::new(),
        splits: Vec::new(),
        candidates: Vec::new(),
        unresolved: Vec::new(),
        evaluations: 0,
    };
    let mut stack = vec![(root, count, 0usize)];
    while let Some((r, c, depth)) = stack.pop() {
        match c.winding {
            w if w <= 0 => {}
            1 => {
                let est = c.moments[1] / c.moments[0];
                report.candidates.push(if r.contains(est) { est } else { r.center() });
            }
            w if depth >= opts.depth => {
                report.unresolved.push((r, w));
                if w == 2 {
                    report.candidates.extend(pair_from_moments(&c));
                } else {
                    report.candidates.push(r.center());
                }
            }
            w => {
                // split at a slightly off-centre point to avoid symmetric zeros
                let mut done = false;
                for attempt in 0..=opts.jitter_retries {
                    let off = 0.013 * (attempt as f64 + 1.0) * r.size();
                    let split = r.center() + Complex64::new(off * 0.37, off * 0.61);
                    let quads = r.quarters(split);
                    let mut kids = Vec::with_capacity(4);
                    let mut failed = None;
                    for q in quads {
                        match contour_count(&mut memo, &q, &opts.winding) {
                            Ok(cc) => kids.push((q, cc)),
                            Err(Error::ZeroOnContour(z)) => {
                                failed = Some(z);
                                break;
                            }
                            Err(e) => return Err(e),
                        }
                    }
                    if failed.is_some() && attempt < opts.jitter_retries {
                        continue;
                    }
                    if let Some(z) = failed {
                        return Err(Error::ZeroOnContour(z));
                    }
                    report.splits.push((w, [kids[0].1.winding, kids[1].1.winding, kids[2].1.winding, kids[3].1.winding]));
                    for (q, cc) in kids {
                        report.subdivisions.push((q, cc.winding));
                        stack.push((q, cc, depth + 1));
                    }
                    done = true;
                    break;
                }
                debug_assert!(done);
            }
        }
    }
    report.evaluations = memo.evaluations;
    Ok(report)
}

/// Resolves two close zeros near `center`: a least-squares quadratic fit on
/// a circle of `radius` seeds both, and each is refined on the residual
/// deflated by the other.
pub fn deflate_pair<F>(mut f: F, center: Complex64, radius: f64, opts: &RefineOptions) -> Result<(Root, Root)>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let m = 24;
    let mut a = DMatrix::<Complex64>::zeros(m, 3);
    let mut rhs = DVector::<Complex64>::zeros(m);
    for k in 0..m {
        let d = Complex64::from_polar(radius, 2.0 * PI * k as f64 / m as f64);
        let v = f(center + d)?;
        let dn = d / radius;
        a[(k, 0)] = Complex64::new(1.0, 0.0);
        a[(k, 1)] = dn;
        a[(k, 2)] = dn * dn;
        rhs[k] = v;
    }
    let svd = a.svd(true, true);
    let coef = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidParameter(format!("quadratic fit failed: {e}")))?;
    let (c0, c1, c2) = (coef[0], coef[1], coef[2]);
    let (mut g1, mut g2) = if c2.norm() > 1e-300 {
        let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
        (
            center + radius * (-c1 + disc) / (2.0 * c2),
            center + radius * (-c1 - disc) / (2.0 * c2),
        )
    } else {
        (center - 0.5 * radius, center + 0.5 * radius)
    };
    if (g1 - g2).norm() < 1e-3 * radius {
        g1 -= 0.05 * radius;
        g2 += 0.05 * radius;
    }
    let mut r1 = None;
    let mut r2 = None;
    for _ in 0..3 {
        let other = g2;
        let root1 = refine(|z| Ok(f(z)? / (z - other)), g1, opts)?;
        let other = root1.z;
        let root2 = refine(|z| Ok(f(z)? / (z - other)), g2, opts)?;
        let stable = (root1.z - g1).norm() <= opts.tol * (1.0 + g1.norm()) * 10.0
            && (root2.z - g2).norm() <= opts.tol * (1.0 + g2.norm()) * 10.0;
        g1 = root1.z;
        g2 = root2.z;
        r1 = Some(root1);
        r2 = Some(root2);
        if stable {
            break;
        }
    }
    let (mut r1, mut r2) = (r1.expect("refined"), r2.expect("refined"));
    if (r1.z - r2.z).norm() <= 100.0 * opts.tol * (1.0 + r1.z.norm()) {
        return Err(Error::Collapse(0.5 * (r1.z + r2.z)));
    }
    r1.residual_abs = f(r1.z)?.norm();
    r2.residual_abs = f(r2.z)?.norm();
    Ok((r1, r2))
}

/// Next guess of a resonance ladder from its last two members, by linear
/// extrapolation in `λ`.
pub fn ladder_guess(prob: &Problem, previous: Complex64, last: Complex64) -> Complex64 {
    let l0 = prob.lambda_of(previous);
    let l1 = prob.lambda_of(last);
    let z = prob.z_of(2.0 * l1 - l0);
    if z.im.signum() != last.im.signum() && last.im != 0.0 {
        z.conj()
    } else {
        z
    }
}
