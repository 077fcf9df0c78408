//! Dormand–Prince 5(4) integration of complex systems `y' = f(s, y)` over a
//! real parameter, with continuous (dense) output on every accepted step.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

pub type State<const N: usize> = [Complex64; N];

/// Step-size control parameters.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<const N: usize> {
    pub rtol: f64,
    pub atol: [f64; N],
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
}

impl<const N: usize> OdeOptions<N> {
    pub fn new(tol: f64) -> Self {
        OdeOptions {
            rtol: tol,
            atol: [tol; N],
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 200_000,
        }
    }

    pub fn with_atol(mut self, atol: [f64; N]) -> Self {
        self.atol = atol;
        self
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }
}

/// One accepted step with its quartic dense-output polynomial.
#[derive(Debug, Clone)]
pub struct Step<const N: usize> {
    pub s0: f64,
    pub h: f64,
    rcont: [State<N>; 5],
}

impl<const N: usize> Step<N> {
    pub fn s1(&self) -> f64 {
        self.s0 + self.h
    }

    pub fn start(&self) -> State<N> {
        self.rcont[0]
    }

    pub fn end(&self) -> State<N> {
        std::array::from_fn(|i| self.rcont[0][i] + self.rcont[1][i])
    }

    /// State at fraction `theta ∈ [0, 1]` of the step.
    pub fn at_fraction(&self, theta: f64) -> State<N> {
        let t1 = 1.0 - theta;
        std::array::from_fn(|i| {
            let r = &self.rcont;
            r[0][i] + theta * (r[1][i] + t1 * (r[2][i] + theta * (r[3][i] + t1 * r[4][i])))
        })
    }
}

/// Sequence of accepted steps covering the integration span.
#[derive(Debug, Clone, Default)]
pub struct Trajectory<const N: usize> {
    steps: Vec<Step<N>>,
    pub functionals: BTreeMap<String, Complex64>,
}

impl<const N: usize> Trajectory<N> {
    pub fn steps(&self) -> &[Step<N>] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Step endpoints in integration order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.steps.iter().map(|s| s.s0).collect();
        if let Some(last) = self.steps.last() {
            v.push(last.s1());
        }
        v
    }

    pub fn start(&self) -> Option<State<N>> {
        self.steps.first().map(Step::start)
    }

    pub fn end(&self) -> Option<State<N>> {
        self.steps.last().map(Step::end)
    }

    /// Appends another trajectory that starts where this one ends.
    pub fn extend(&mut self, other: Trajectory<N>) {
        self.steps.extend(other.steps);
        self.functionals.extend(other.functionals);
    }

    /// Dense output at `s`; `None` outside the covered span.
    pub fn at(&self, s: f64) -> Option<State<N>> {
        let first = self.steps.first()?;
        let forward = first.h > 0.0;
        let idx = self.steps.partition_point(|st| if forward { st.s1() < s } else { st.s1() > s });
        let st = self.steps.get(idx)?;
        let theta = (s - st.s0) / st.h;
        if !(-1e-9..=1.0 + 1e-9).contains(&theta) {
            return None;
        }
        Some(st.at_fraction(theta.clamp(0.0, 1.0)))
    }
}

fn axpy<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    std::array::from_fn(|i| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, k) in terms {
            acc += k[i] * *c;
        }
        y[i] + acc * h
    })
}

fn finite<const N: usize>(y: &State<N>) -> bool {
    y.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Integrates `y' = f(s, y)` from `span.0` to `span.1` (either direction).
pub fn integrate<const N: usize, F>(f: F, span: (f64, f64), y0: State<N>, opts: &OdeOptions<N>) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &State<N>) -> State<N>,
{
    integrate_with_guard(f, span, y0, opts, |_, _| None)
}

/// As [`integrate`], calling `guard` after each accepted step; a returned
/// error aborts the integration.
pub fn integrate_with_guard<const N: usize, F, G>(
    mut f: F,
    span: (f64, f64),
    y0: State<N>,
    opts: &OdeOptions<N>,
    mut guard: G,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &State<N>) -> State<N>,
    G: FnMut(f64, &State<N>) -> Option<Error>,
{
    let (s_start, s_end) = span;
    let mut traj = Trajectory {
        steps: Vec::new(),
        functionals: BTreeMap::new(),
    };
    let length = (s_end - s_start).abs();
    if length == 0.0 {
        return Ok(traj);
    }
    let dir = (s_end - s_start).signum();
    let scale = |a: &State<N>, b: &State<N>, i: usize| opts.atol[i] + opts.rtol * a[i].norm().max(b[i].norm());

    let mut s = s_start;
    let mut y = y0;
    let mut k1 = f(s, &y);
    let mut h = match opts.h_init {
        Some(h) => h.abs(),
        None => initial_step(&mut f, s, &y, &k1, dir, opts, &scale),
    }
    .max(1e-6 * length.min(1.0))
    .min(length)
    .min(opts.h_max);
    let mut err_old: f64 = 1e-4;
    let mut rejected = false;
    let mut n_steps = 0usize;
    let h_min = 1e-14 * (1.0 + s_start.abs().max(s_end.abs()));

    loop {
        if n_steps >= opts.max_steps {
            return Err(Error::MaxSteps(opts.max_steps));
        }
        let remaining = (s_end - s).abs();
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        let hs = dir * h;
        let k2 = f(s + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(s + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(s + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(s + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(s + hs, &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y1 = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let s1 = if last { s_end } else { s + hs };
        let k7 = f(s1, &y1);
        n_steps += 1;

        let mut err = 0.0;
        for i in 0..N {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * hs;
            let sc = scale(&y, &y1, i);
            let r = if sc > 0.0 { e.norm() / sc } else { 0.0 };
            err += r * r;
        }
        let err = (err / N as f64).sqrt();

        if !err.is_finite() || !finite(&y1) {
            h *= 0.25;
            rejected = true;
            if h < h_min {
                return Err(Error::StepUnderflow { at: s });
            }
            continue;
        }

        if err <= 1.0 {
            let rcont2: State<N> = std::array::from_fn(|i| y1[i] - y[i]);
            let rcont3: State<N> = std::array::from_fn(|i| k1[i] * hs - rcont2[i]);
            let rcont4: State<N> = std::array::from_fn(|i| rcont2[i] - k7[i] * hs - rcont3[i]);
            let rcont5: State<N> = std::array::from_fn(|i| {
                (k1[i] * D1 + k3[i] * D3 + k4[i] * D4 + k5[i] * D5 + k6[i] * D6 + k7[i] * D7) * hs
            });
            traj.steps.push(Step {
                s0: s,
                h: s1 - s,
                rcont: [y, rcont2, rcont3, rcont4, rcont5],
            });
            s = s1;
            y = y1;
            k1 = k7;
            if let Some(e) = guard(s, &y) {
                return Err(e);
            }
            if last {
                return Ok(traj);
            }
            let mut fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * err_old.powf(0.4 / 5.0);
            fac = fac.clamp(0.2, 10.0);
            if rejected {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(opts.h_max);
            err_old = err.max(1e-4);
            rejected = false;
        } else {
            let fac = (0.9 * err.powf(-0.2)).max(0.2);
            h *= fac;
            rejected = true;
            if h < h_min {
                return Err(Error::StepUnderflow { at: s });
            }
        }
    }
}

fn initial_step<const N: usize, F, S>(
    f: &mut F,
    s: f64,
    y: &State<N>,
    k1: &State<N>,
    dir: f64,
    opts: &OdeOptions<N>,
    scale: &S,
) -> f64
where
    F: FnMut(f64, &State<N>) -> State<N>,
    S: Fn(&State<N>, &State<N>, usize) -> f64,
{
    let norm = |v: &State<N>| {
        let mut acc = 0.0;
        for i in 0..N {
            let sc = scale(y, y, i).max(1e-300);
            acc += (v[i].norm() / sc).powi(2);
        }
        (acc / N as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(k1);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y, dir * h0, &[(1.0, k1)]);
    let k2 = f(s + dir * h0, &y1);
    let diff: State<N> = std::array::from_fn(|i| k2[i] - k1[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(opts.h_max)
}
