use log::{info, warn};
use resonance_core::bounds::check_norm_bounds;
use resonance_core::{
    envelope, ladder, nu_correction, residual, residual_scale, scan, solve, threshold, BoundaryCondition, Complex64,
    Domain, Error, MethodTag, Potential, Problem, Provenance, Rect, RegionBound, Resonance, ScanOptions,
};

use crate::config::{BcChoice, RunConfig, Task};
use crate::error::CliResult;
use crate::output::{round12, BoundsRow, EnvelopeRow, PerturbRow, ResonanceRow, Table};

pub const CONVERGED: &str = "converged";
pub const NOT_CONVERGED: &str = "not-converged";
pub const FAILED: &str = "failed";
/// Converged, but the fresh residual at the reported root exceeds the tolerance.
pub const UNVERIFIED: &str = "unverified";

/// Rows of one run and whether every solve succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub complete: bool,
}

impl RunConfig {
    pub fn problem_with(&self, bc: BoundaryCondition) -> Problem {
        let p = match self.domain {
            Domain::HalfLine => Problem::half_line(self.potential.clone(), bc),
            Domain::WholeLine => Problem::whole_line(self.potential.clone()),
        };
        p.with_tolerances(self.tolerances)
    }

    pub fn problem(&self) -> Problem {
        match self.bc {
            BcChoice::Fixed(bc) => self.problem_with(bc),
            BcChoice::Alternate => self.problem_with(alternating_bc(0)),
        }
    }
}

pub fn alternating_bc(row: usize) -> BoundaryCondition {
    if row % 2 == 0 {
        BoundaryCondition::dirichlet()
    } else {
        BoundaryCondition::neumann()
    }
}

/// `|residual(z)| / residual_scale(z)` evaluated afresh at the rounded root.
pub fn fresh_residual(prob: &Problem, method: MethodTag, z: Complex64) -> f64 {
    let z = Complex64::new(round12(z.re), round12(z.im));
    match residual(prob, method, z) {
        Ok(r) => r.norm() / residual_scale(prob, method, z),
        Err(_) => f64::NAN,
    }
}

fn resonance_row(
    n: usize,
    prob: &Problem,
    method: MethodTag,
    guess: Complex64,
    result: resonance_core::Result<Resonance>,
    tol_res: f64,
) -> ResonanceRow {
    let (z, residual_abs, iterations, status) = match result {
        Ok(r) => {
            let fresh = fresh_residual(prob, method, r.z);
            let status = if fresh <= tol_res { CONVERGED } else { UNVERIFIED };
            (r.z, fresh, r.iterations, status)
        }
        Err(Error::RootNonConvergence { iterations, last, residual }) => {
            warn!("row {n}: no convergence from {guess} after {iterations} iterations");
            (last, residual, iterations, NOT_CONVERGED)
        }
        Err(e) => {
            warn!("row {n}: {e}");
            (guess, f64::NAN, 0, FAILED)
        }
    };
    let lambda = prob.lambda_of(z);
    ResonanceRow {
        n,
        method: method.to_string(),
        re_lambda: lambda.re,
        im_lambda: lambda.im,
        re_z: z.re,
        im_z: z.im,
        residual_abs,
        iterations,
        status: status.to_string(),
    }
}

fn all_converged(rows: &[ResonanceRow]) -> bool {
    rows.iter().all(|r| r.status == CONVERGED)
}

/// Runs the configured task.
pub fn execute(cfg: &RunConfig) -> CliResult<Outcome> {
    info!("task {} on {} ({:?}, {})", cfg.task.name(), cfg.potential.name(), cfg.domain, cfg.method);
    match &cfg.task {
        Task::Solve { z, lambda } => run_solve(cfg, z, lambda),
        Task::Scan { rect, depth } | Task::PhiScan { rect, depth } => run_scan(cfg, rect, *depth),
        Task::Table { rows, seeds } => Ok(run_table(cfg, *rows, *seeds)),
        Task::Envelope { points } => run_envelope(cfg, *points),
        Task::Bounds { points, lambda } => Ok(run_bounds(cfg, *points, lambda)),
        Task::Perturb { vary, base, eps, guess, derivative, nodes } => {
            run_perturb(cfg, vary, *base, eps, *guess, derivative.as_ref(), *nodes)
        }
    }
}

fn run_solve(cfg: &RunConfig, z: &[Complex64], lambda: &[Complex64]) -> CliResult<Outcome> {
    let prob = cfg.problem();
    let guesses: Vec<Complex64> = z.iter().copied().chain(lambda.iter().map(|&l| prob.z_of(l))).collect();
    let rows: Vec<ResonanceRow> = guesses
        .iter()
        .enumerate()
        .map(|(n, &g)| resonance_row(n, &prob, cfg.method, g, solve(&prob, cfg.method, g, &cfg.refine), cfg.refine.tol_res))
        .collect();
    let complete = all_converged(&rows);
    Ok(Outcome { table: Table::Resonances(rows), complete })
}

fn same_root(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-7 * (1.0 + a.norm())
}

fn run_scan(cfg: &RunConfig, rect: &Rect, depth: usize) -> CliResult<Outcome> {
    let prob = cfg.problem();
    let method = cfg.method;
    let opts = ScanOptions { depth, ..ScanOptions::default() };
    let report = scan(|z| residual(&prob, method, z), rect, &opts)?;
    info!(
        "winding {} over the rectangle, {} candidates, {} evaluations",
        report.winding,
        report.candidates.len(),
        report.evaluations
    );
    let mut complete = report.unresolved.is_empty();
    for (r, w) in &report.unresolved {
        warn!("{w} zeros left unresolved near {}", r.center());
    }

    let mut found: Vec<(Complex64, ResonanceRow)> = Vec::new();
    let mut failures = Vec::new();
    for &g in &report.candidates {
        let row = resonance_row(0, &prob, method, g, solve(&prob, method, g, &cfg.refine), cfg.refine.tol_res);
        let z = Complex64::new(row.re_z, row.im_z);
        if row.status != CONVERGED {
            failures.push((z, row));
        } else if !rect.contains(z) {
            info!("root {z} from candidate {g} lies outside the rectangle");
        } else if !found.iter().any(|(w, _)| same_root(*w, z)) {
            found.push((z, row));
        }
    }
    if found.len() as i64 != report.winding {
        warn!("found {} distinct zeros but the winding number is {}", found.len(), report.winding);
        complete = false;
    }
    complete &= failures.is_empty();
    found.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let rows = found
        .into_iter()
        .chain(failures)
        .enumerate()
        .map(|(n, (_, mut row))| {
            row.n = n;
            row
        })
        .collect();
    Ok(Outcome { table: Table::Resonances(rows), complete })
}

fn run_table(cfg: &RunConfig, rows: usize, seeds: [Complex64; 2]) -> Outcome {
    let bc_of = |k: usize| match cfg.bc {
        BcChoice::Fixed(bc) => bc,
        BcChoice::Alternate => alternating_bc(k),
    };
    let results = ladder(|k| cfg.problem_with(bc_of(k)), cfg.method, seeds, rows, &cfg.refine);
    let mut out: Vec<ResonanceRow> = Vec::with_capacity(rows);
    for (k, r) in results.into_iter().enumerate() {
        let prob = cfg.problem_with(bc_of(k));
        let guess = match out.last() {
            Some(prev) if k >= 2 => Complex64::new(prev.re_z, prev.im_z),
            _ => seeds[k.min(1)],
        };
        out.push(resonance_row(k + 1, &prob, cfg.method, guess, r, cfg.refine.tol_res));
    }
    let complete = all_converged(&out);
    Outcome { table: Table::Resonances(out), complete }
}

fn run_envelope(cfg: &RunConfig, points: usize) -> CliResult<Outcome> {
    let env = envelope(&cfg.potential, points, cfg.sup_tol)?;
    info!("a1 = {}, a2 = {}, M = {}", env.a1, env.a2, env.m);
    let rows = env
        .points
        .iter()
        .map(|p| EnvelopeRow { theta: p.theta, a_theta: p.a_theta, x: p.x, y: p.y })
        .collect();
    Ok(Outcome { table: Table::Envelope(rows), complete: true })
}

fn label(lambda: Complex64) -> String {
    let (re, im) = (round12(lambda.re), round12(lambda.im));
    if im < 0.0 || (im == 0.0 && im.is_sign_negative()) {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn inside(slack: f64) -> &'static str {
    if slack >= 0.0 {
        "inside"
    } else {
        "outside"
    }
}

/// Distance from `w` to the ray `e^{-iθ} ℝ⁺`.
fn ray_distance(w: Complex64, theta: f64) -> f64 {
    let proj = w * Complex64::from_polar(1.0, theta);
    if proj.re <= 0.0 {
        w.norm()
    } else {
        proj.im.abs()
    }
}

fn min_slack(region: &RegionBound, lambda: Complex64) -> f64 {
    let slack = |(&t, &v): (&f64, &f64)| match region.provenance {
        Provenance::RayBall => v - ray_distance(lambda, t),
        _ => v - lambda.re * t.sin() - lambda.im * t.cos(),
    };
    region.theta_grid.iter().zip(&region.values).map(slack).fold(f64::INFINITY, f64::min)
}

fn unavailable(name: String, e: &Error) -> BoundsRow {
    info!("{name}: {e}");
    BoundsRow { name, value: f64::NAN, verdict: "unavailable".into() }
}

fn run_bounds(cfg: &RunConfig, points: usize, lambdas: &[Complex64]) -> Outcome {
    let p: &Potential = &cfg.potential;
    let tol = cfg.sup_tol;
    let mut rows = Vec::new();
    let row = |name: &str, value: f64, verdict: &str| BoundsRow { name: name.into(), value, verdict: verdict.into() };

    let l1 = p.l1_norm(cfg.domain, tol);
    match &l1 {
        Ok(v) => rows.push(row("l1-norm", *v, "finite")),
        Err(e) => rows.push(unavailable("l1-norm".into(), e)),
    }
    let gamma = threshold(p, tol).ok().and_then(|t| t.value());
    match gamma {
        Some(g) => rows.push(row("threshold", g, "bound")),
        None => rows.push(row("threshold", f64::NAN, "none")),
    }
    let env = envelope(p, points, tol);
    match &env {
        Ok(e) => {
            rows.push(row("a1", e.a1, "bound"));
            rows.push(row("a2", e.a2, "bound"));
            rows.push(row("m", e.m, "bound"));
        }
        Err(e) => rows.push(unavailable("envelope".into(), e)),
    }
    let regions: Vec<(Provenance, resonance_core::Result<RegionBound>)> = if lambdas.is_empty() {
        Vec::new()
    } else {
        vec![
            (Provenance::HalfPlane, RegionBound::half_planes(p, points, tol)),
            (Provenance::RayBall, RegionBound::ray_ball(p, points, tol)),
        ]
    };

    for &lambda in lambdas {
        let at = label(lambda);
        if let Some(g) = gamma {
            let slack = g - lambda.re;
            rows.push(BoundsRow { name: format!("threshold@{at}"), value: slack, verdict: inside(slack).into() });
        }
        for (prov, region) in &regions {
            let name = format!("{prov}@{at}");
            rows.push(match region {
                Ok(r) => {
                    let slack = min_slack(r, lambda);
                    BoundsRow { name, value: slack, verdict: inside(slack).into() }
                }
                Err(e) => unavailable(name, e),
            });
        }
        if let Ok(e) = &env {
            let slack = e.margin(lambda);
            rows.push(BoundsRow { name: format!("{}@{at}", Provenance::Envelope), value: slack, verdict: inside(slack).into() });
        }
        if cfg.domain == Domain::WholeLine {
            match check_norm_bounds(p, lambda, tol) {
                Ok(c) => {
                    let quarter = c.quarter_bound - lambda.norm();
                    let verdict = match c.quarter {
                        Some(_) => inside(quarter),
                        None => "no-claim",
                    };
                    rows.push(BoundsRow { name: format!("{}@{at}", Provenance::NormQuarter), value: quarter, verdict: verdict.into() });
                    let nine = c.nine_quarters_bound - lambda.norm();
                    rows.push(BoundsRow {
                        name: format!("{}@{at}", Provenance::NormNineQuarters),
                        value: nine,
                        verdict: inside(nine).into(),
                    });
                }
                Err(e) => rows.push(unavailable(format!("norm@{at}"), &e)),
            }
        }
    }
    Outcome { table: Table::Bounds(rows), complete: true }
}

fn run_perturb(
    cfg: &RunConfig,
    vary: &str,
    base: f64,
    eps: &[f64],
    guess: Complex64,
    derivative: Option<&Potential>,
    nodes: usize,
) -> CliResult<Outcome> {
    let bc = match cfg.bc {
        BcChoice::Fixed(bc) => bc,
        BcChoice::Alternate => alternating_bc(0),
    };
    let family = |e: f64| -> CliResult<Problem> {
        let pot = cfg.source.with_param(vary, base + e)?.build(cfg.sector)?;
        Ok(Problem::half_line(pot, bc).with_tolerances(cfg.tolerances))
    };
    let method = MethodTag::MethodOne;
    let base_prob = family(0.0)?;
    let root = solve(&base_prob, method, guess, &cfg.refine)?;
    let lambda0 = root.lambda;
    info!("unperturbed root z = {}, λ = {}", root.z, lambda0);

    let slope = match derivative {
        Some(v1) => match nu_correction(&base_prob, v1, root.z, nodes) {
            Ok(nu) => {
                info!("dλ/d{vary} = {} (σ_min = {:e})", nu.lambda_slope, nu.sigma_min);
                Some(nu.lambda_slope)
            }
            Err(e) => {
                warn!("linear prediction unavailable: {e}");
                None
            }
        },
        None => None,
    };

    let mut complete = true;
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        let prob = family(e)?;
        let predicted = slope.map_or(Complex64::new(f64::NAN, f64::NAN), |s| s * e);
        let (lambda, status) = match solve(&prob, method, root.z, &cfg.refine) {
            Ok(r) => (r.lambda, CONVERGED),
            Err(err) => {
                warn!("{vary} = {}: {err}", base + e);
                complete = false;
                let status = if matches!(err, Error::RootNonConvergence { .. }) { NOT_CONVERGED } else { FAILED };
                (Complex64::new(f64::NAN, f64::NAN), status)
            }
        };
        let shift = lambda - lambda0;
        rows.push(PerturbRow {
            eps: e,
            re_lambda: lambda.re,
            im_lambda: lambda.im,
            re_shift: shift.re,
            im_shift: shift.im,
            re_predicted: predicted.re,
            im_predicted: predicted.im,
            status: status.into(),
        });
    }
    Ok(Outcome { table: Table::Perturb(rows), complete })
}
