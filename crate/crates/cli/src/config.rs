//! Run configuration: an INI file overlaid with command-line flags, then
//! validated into a [`RunConfig`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use ini::Ini;
use resonance_core::{BoundaryCondition, Complex64, Domain, MethodTag, Potential, Rect, RefineOptions, Tolerances};

use crate::args::{Cli, Format, ProblemArgs, TaskCommand};
use crate::error::{CliError, CliResult};

const POTENTIAL_KEYS: &[&str] = &["name", "expression", "sector"];
const PROBLEM_KEYS: &[&str] = &["domain", "bc", "method"];
const TASK_KEYS: &[&str] = &[
    "z", "lambda", "rect", "depth", "rows", "seeds", "points", "eps", "guess", "vary", "derivative", "nodes",
];
const TOLERANCE_KEYS: &[&str] = &["ode", "decay", "x_cap", "pole_guard", "residual", "step", "max_iter", "sup"];
const OUTPUT_KEYS: &[&str] = &["format"];

pub const DEFAULT_SEEDS: &str = "0.7;1.5+1.1i";
pub const DEFAULT_EPS: &str = "5e-5,1e-4,5e-4,1e-3";
pub const PERTURBED_GAUSSIAN_DERIVATIVE: &str = "-0.5*x^4*exp(-x^2)";

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Flat `(section, key) -> value` store; later writes win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    entries: BTreeMap<(String, String), String>,
}

impl Settings {
    pub fn parse(text: &str) -> CliResult<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| invalid(format!("config syntax: {e}")))?;
        let mut s = Settings::default();
        for (section, props) in ini.iter() {
            for (key, value) in props.iter() {
                let Some(section) = section else {
                    return Err(invalid(format!("key `{key}` appears before any section header")));
                };
                s.set(section, key, value);
            }
        }
        s.check_keys()?;
        Ok(s)
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl Into<String>) {
        self.entries.insert((section.to_string(), key.to_string()), value.into());
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.entries.get(&(section.to_string(), key.to_string())).map(String::as_str)
    }

    fn section<'a>(&'a self, section: &'a str) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
        self.entries
            .iter()
            .filter(move |((s, _), _)| s == section)
            .map(|((_, k), v)| (k.as_str(), v.as_str()))
    }

    fn check_keys(&self) -> CliResult<()> {
        for (section, key) in self.entries.keys() {
            let allowed = match section.as_str() {
                "potential" => continue,
                "problem" => PROBLEM_KEYS,
                "task" => TASK_KEYS,
                "tolerances" => TOLERANCE_KEYS,
                "output" => OUTPUT_KEYS,
                other => return Err(invalid(format!("unknown section [{other}]"))),
            };
            if !allowed.contains(&key.as_str()) {
                return Err(invalid(format!("unknown key `{key}` in [{section}]")));
            }
        }
        Ok(())
    }

    fn parsed<T: std::str::FromStr>(&self, section: &str, key: &str) -> CliResult<Option<T>> {
        self.get(section, key)
            .map(|v| {
                v.trim()
                    .parse::<T>()
                    .map_err(|_| invalid(format!("cannot parse [{section}] {key} = `{v}`")))
            })
            .transpose()
    }
}

/// How the potential is built; kept symbolic so families can be rebuilt.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSource {
    Builtin { name: String, params: BTreeMap<String, f64> },
    Expression(String),
}

impl PotentialSource {
    pub fn build(&self, sector: Option<f64>) -> CliResult<Potential> {
        let p = match self {
            PotentialSource::Builtin { name, params } => Potential::from_name(name, params),
            PotentialSource::Expression(src) => Potential::parse_expression(src),
        }
        .map_err(|e| invalid(format!("potential: {e}")))?;
        match sector {
            Some(a) => p.with_sector(a).map_err(|e| invalid(format!("potential: {e}"))),
            None => Ok(p),
        }
    }

    /// The same builtin with one parameter replaced.
    pub fn with_param(&self, key: &str, value: f64) -> CliResult<PotentialSource> {
        match self {
            PotentialSource::Builtin { name, params } => {
                let mut params = params.clone();
                params.insert(key.to_string(), value);
                Ok(PotentialSource::Builtin { name: name.clone(), params })
            }
            PotentialSource::Expression(_) => Err(invalid("perturb needs a builtin potential with a named parameter")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcChoice {
    Fixed(BoundaryCondition),
    /// Dirichlet on even rows, Neumann on odd rows.
    Alternate,
}

#[derive(Debug, Clone)]
pub enum Task {
    Solve { z: Vec<Complex64>, lambda: Vec<Complex64> },
    Scan { rect: Rect, depth: usize },
    Table { rows: usize, seeds: [Complex64; 2] },
    Envelope { points: usize },
    Bounds { points: usize, lambda: Vec<Complex64> },
    Perturb { vary: String, base: f64, eps: Vec<f64>, guess: Complex64, derivative: Option<Potential>, nodes: usize },
    PhiScan { rect: Rect, depth: usize },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Solve { .. } => "solve",
            Task::Scan { .. } => "scan",
            Task::Table { .. } => "table",
            Task::Envelope { .. } => "envelope",
            Task::Bounds { .. } => "bounds",
            Task::Perturb { .. } => "perturb",
            Task::PhiScan { .. } => "phi-scan",
        }
    }
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: PotentialSource,
    pub sector: Option<f64>,
    pub potential: Potential,
    pub domain: Domain,
    pub bc: BcChoice,
    pub method: MethodTag,
    pub task: Task,
    pub tolerances: Tolerances,
    pub refine: RefineOptions,
    /// Tolerance for suprema and norms in the bound computations.
    pub sup_tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Parses `1.5+1.1i`, `-2e-3-4i`, `0.7`, `3i` or `re,im`.
pub fn parse_complex(text: &str) -> CliResult<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || invalid(format!("cannot parse complex number `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((re, im)) = s.split_once(',') {
        return Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let coef = |t: &str| -> CliResult<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse().map_err(|_| bad())?, coef(&body[k..])?)),
        None => Ok(Complex64::new(0.0, coef(body)?)),
    }
}

fn parse_complex_list(text: &str) -> CliResult<Vec<Complex64>> {
    text.split(';').filter(|t| !t.trim().is_empty()).map(parse_complex).collect()
}

fn parse_real_list(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| invalid(format!("cannot parse number `{t}`"))))
        .collect()
}

fn parse_rect(text: &str) -> CliResult<Rect> {
    let v = parse_real_list(text)?;
    let [re0, re1, im0, im1] = v[..] else {
        return Err(invalid(format!("rect needs four numbers, got `{text}`")));
    };
    if !(re0 > 0.0) {
        return Err(invalid(format!("rect must lie in Re z > 0, got re_min = {re0}")));
    }
    Rect::new((re0, re1), (im0, im1)).map_err(|e| invalid(format!("rect: {e}")))
}

fn parse_bc(text: &str) -> CliResult<BcChoice> {
    match text.trim() {
        "dirichlet" | "D" => Ok(BcChoice::Fixed(BoundaryCondition::dirichlet())),
        "neumann" | "N" => Ok(BcChoice::Fixed(BoundaryCondition::neumann())),
        "alternate" => Ok(BcChoice::Alternate),
        other => {
            let v = parse_real_list(other)?;
            let [a, b] = v[..] else {
                return Err(invalid(format!("bc must be dirichlet, neumann, alternate or `a,b`, got `{other}`")));
            };
            BoundaryCondition::new(a, b)
                .map(BcChoice::Fixed)
                .map_err(|e| invalid(format!("bc: {e}")))
        }
    }
}

fn parse_domain(text: &str) -> CliResult<Domain> {
    match text.trim() {
        "halfline" | "half" => Ok(Domain::HalfLine),
        "wholeline" | "whole" => Ok(Domain::WholeLine),
        other => Err(invalid(format!("domain must be halfline or wholeline, got `{other}`"))),
    }
}

fn overlay_problem(s: &mut Settings, p: &ProblemArgs) -> CliResult<()> {
    if let Some(name) = &p.potential {
        s.set("potential", "name", name.as_str());
    }
    if let Some(e) = &p.expr {
        s.set("potential", "expression", e.as_str());
    }
    for kv in &p.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| invalid(format!("--param expects KEY=VALUE, got `{kv}`")))?;
        s.set("potential", k.trim(), v.trim());
    }
    for (key, value) in [("domain", &p.domain), ("bc", &p.bc), ("method", &p.method)] {
        if let Some(v) = value {
            s.set("problem", key, v.as_str());
        }
    }
    Ok(())
}

fn overlay_task(s: &mut Settings, task: &TaskCommand) -> CliResult<&'static str> {
    let mut put = |key: &str, v: Option<String>| {
        if let Some(v) = v {
            s.set("task", key, v);
        }
    };
    let (name, problem) = match task {
        TaskCommand::Solve(a) => {
            put("z", a.z.clone());
            put("lambda", a.lambda.clone());
            ("solve", &a.problem)
        }
        TaskCommand::Scan(a) | TaskCommand::PhiScan(a) => {
            put("rect", a.rect.clone());
            put("depth", a.depth.map(|d| d.to_string()));
            let name = if matches!(task, TaskCommand::Scan(_)) { "scan" } else { "phi-scan" };
            (name, &a.problem)
        }
        TaskCommand::Table(a) => {
            put("rows", a.rows.map(|d| d.to_string()));
            put("seeds", a.seeds.clone());
            ("table", &a.problem)
        }
        TaskCommand::Envelope(a) => {
            put("points", a.points.map(|d| d.to_string()));
            ("envelope", &a.problem)
        }
        TaskCommand::Bounds(a) => {
            put("points", a.points.map(|d| d.to_string()));
            put("lambda", a.lambda.clone());
            ("bounds", &a.problem)
        }
        TaskCommand::Perturb(a) => {
            put("eps", a.eps.clone());
            put("guess", a.guess.clone());
            put("vary", a.vary.clone());
            put("derivative", a.derivative.clone());
            put("nodes", a.nodes.map(|d| d.to_string()));
            ("perturb", &a.problem)
        }
    };
    overlay_problem(s, problem)?;
    Ok(name)
}

/// Reads the config file (if any), overlays the flags and validates.
pub fn load(cli: &Cli) -> CliResult<RunConfig> {
    let mut settings = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
            Settings::parse(&text)?
        }
        None => Settings::default(),
    };
    let task = overlay_task(&mut settings, &cli.task)?;
    if let Some(t) = cli.tol {
        settings.set("tolerances", "residual", t.to_string());
    }
    if let Some(f) = cli.format {
        settings.set("output", "format", f.name());
    }
    settings.check_keys()?;
    build(&settings, task, cli.out.clone())
}

fn potential_source(s: &Settings) -> CliResult<(PotentialSource, Option<f64>)> {
    let sector = s.parsed::<f64>("potential", "sector")?;
    let params = s
        .section("potential")
        .filter(|(k, _)| !POTENTIAL_KEYS.contains(k))
        .map(|(k, v)| {
            v.trim()
                .parse::<f64>()
                .map(|x| (k.to_string(), x))
                .map_err(|_| invalid(format!("potential parameter `{k}` = `{v}` is not a number")))
        })
        .collect::<CliResult<BTreeMap<_, _>>>()?;
    let source = match (s.get("potential", "name"), s.get("potential", "expression")) {
        (Some(_), Some(_)) => return Err(invalid("give either a builtin potential name or an expression, not both")),
        (Some(name), None) => PotentialSource::Builtin { name: name.trim().to_string(), params },
        (None, Some(expr)) => {
            if !params.is_empty() {
                return Err(invalid("expression potentials take no parameters"));
            }
            PotentialSource::Expression(expr.to_string())
        }
        (None, None) => return Err(invalid("no potential given (use --potential or --expr)")),
    };
    Ok((source, sector))
}

fn tolerances(s: &Settings) -> CliResult<(Tolerances, RefineOptions, f64)> {
    let mut tol = Tolerances::default();
    let mut refine = RefineOptions::default();
    let mut sup = 1e-10;
    let positive = |key: &str, v: Option<f64>, slot: &mut f64| -> CliResult<()> {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("tolerance `{key}` must be positive, got {v}")));
            }
            *slot = v;
        }
        Ok(())
    };
    positive("ode", s.parsed("tolerances", "ode")?, &mut tol.ode)?;
    positive("decay", s.parsed("tolerances", "decay")?, &mut tol.decay)?;
    positive("x_cap", s.parsed("tolerances", "x_cap")?, &mut tol.x_cap)?;
    positive("pole_guard", s.parsed("tolerances", "pole_guard")?, &mut tol.pole_guard)?;
    positive("residual", s.parsed("tolerances", "residual")?, &mut refine.tol_res)?;
    positive("step", s.parsed("tolerances", "step")?, &mut refine.tol)?;
    positive("sup", s.parsed("tolerances", "sup")?, &mut sup)?;
    if let Some(n) = s.parsed::<usize>("tolerances", "max_iter")? {
        if n == 0 {
            return Err(invalid("max_iter must be at least 1"));
        }
        refine.max_iter = n;
    }
    Ok((tol, refine, sup))
}

fn positive_count(s: &Settings, key: &str, default: usize) -> CliResult<usize> {
    let n = s.parsed::<usize>("task", key)?.unwrap_or(default);
    if n == 0 {
        return Err(invalid(format!("`{key}` must be at least 1")));
    }
    Ok(n)
}

fn build(s: &Settings, task_name: &str, out: Option<PathBuf>) -> CliResult<RunConfig> {
    let (source, sector) = potential_source(s)?;
    let potential = source.build(sector)?;

    let domain = match s.get("problem", "domain") {
        Some(d) => parse_domain(d)?,
        None if task_name == "phi-scan" => Domain::WholeLine,
        None => Domain::HalfLine,
    };
    let potential = potential.with_domain_hint(domain);

    let bc = match s.get("problem", "bc") {
        Some(b) => parse_bc(b)?,
        None if task_name == "table" => BcChoice::Alternate,
        None => BcChoice::Fixed(BoundaryCondition::dirichlet()),
    };
    if bc == BcChoice::Alternate && task_name != "table" {
        return Err(invalid("bc = alternate is only meaningful for the table task"));
    }

    let method = match s.get("problem", "method") {
        Some(m) => m.trim().parse::<MethodTag>().map_err(|e| invalid(e.to_string()))?,
        None if domain == Domain::WholeLine => MethodTag::Phi,
        None => MethodTag::MethodOne,
    };
    let half_line_method = matches!(method, MethodTag::MethodOne | MethodTag::MethodTwo);
    match (domain, method) {
        (Domain::HalfLine, _) if half_line_method => {}
        (Domain::WholeLine, MethodTag::Phi) => {}
        (d, m) => return Err(invalid(format!("method {m} is not available on the {d:?} domain"))),
    }
    if task_name == "phi-scan" && domain != Domain::WholeLine {
        return Err(invalid("phi-scan works on the whole line"));
    }
    if matches!(task_name, "scan" | "table") && domain != Domain::HalfLine {
        return Err(invalid(format!("{task_name} works on the half line; use phi-scan for the whole line")));
    }

    let task = match task_name {
        "solve" => {
            let z = s.get("task", "z").map(parse_complex_list).transpose()?.unwrap_or_default();
            let lambda = s.get("task", "lambda").map(parse_complex_list).transpose()?.unwrap_or_default();
            if z.is_empty() && lambda.is_empty() {
                return Err(invalid("solve needs at least one guess (z or lambda)"));
            }
            if let Some(bad) = z.iter().find(|w| !(w.re > 0.0)) {
                return Err(invalid(format!("guess z = {bad} must have Re z > 0")));
            }
            Task::Solve { z, lambda }
        }
        "scan" | "phi-scan" => {
            let rect = parse_rect(s.get("task", "rect").ok_or_else(|| invalid(format!("{task_name} needs a rect")))?)?;
            let depth = positive_count(s, "depth", 6)?;
            if task_name == "scan" {
                Task::Scan { rect, depth }
            } else {
                Task::PhiScan { rect, depth }
            }
        }
        "table" => {
            let seeds = parse_complex_list(s.get("task", "seeds").unwrap_or(DEFAULT_SEEDS))?;
            let [a, b] = seeds[..] else {
                return Err(invalid("table needs exactly two seeds"));
            };
            Task::Table { rows: positive_count(s, "rows", 17)?, seeds: [a, b] }
        }
        "envelope" => Task::Envelope { points: positive_count(s, "points", 200)? },
        "bounds" => Task::Bounds {
            points: positive_count(s, "points", 200)?,
            lambda: s.get("task", "lambda").map(parse_complex_list).transpose()?.unwrap_or_default(),
        },
        "perturb" => {
            let vary = s.get("task", "vary").unwrap_or("eps").trim().to_string();
            let base = match &source {
                PotentialSource::Builtin { params, .. } => params.get(&vary).copied().unwrap_or(0.0),
                PotentialSource::Expression(_) => return Err(invalid("perturb needs a builtin potential")),
            };
            let eps = parse_real_list(s.get("task", "eps").unwrap_or(DEFAULT_EPS))?;
            if eps.is_empty() {
                return Err(invalid("perturb needs at least one eps"));
            }
            for &e in &eps {
                source.with_param(&vary, base + e)?.build(sector)?;
            }
            let guess = parse_complex(s.get("task", "guess").ok_or_else(|| invalid("perturb needs a guess"))?)?;
            let derivative_src = match (s.get("task", "derivative"), &source) {
                (Some(d), _) => Some(d.to_string()),
                (None, PotentialSource::Builtin { name, .. }) if name == "perturbed_gaussian" && vary == "eps" => {
                    Some(PERTURBED_GAUSSIAN_DERIVATIVE.to_string())
                }
                _ => None,
            };
            let derivative = derivative_src
                .map(|d| Potential::parse_expression(&d).map_err(|e| invalid(format!("derivative: {e}"))))
                .transpose()?;
            Task::Perturb { vary, base, eps, guess, derivative, nodes: positive_count(s, "nodes", 200)? }
        }
        other => return Err(invalid(format!("unknown task `{other}`"))),
    };

    let (tolerances, refine, sup_tol) = tolerances(s)?;
    let format = match s.get("output", "format") {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => return Err(invalid(format!("format must be csv or json, got `{other}`"))),
    };
    Ok(RunConfig { source, sector, potential, domain, bc, method, task, tolerances, refine, sup_tol, format, out })
}
