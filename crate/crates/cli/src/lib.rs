//! Command-line front end: argument parsing, run configuration, report files.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use anisocap_core::lab::catalog::{
    builtin_norm, named_scenarios, scenario, Scenario, SurfaceSpec, BUILTIN_NORMS, SURFACE_KINDS,
};
use anisocap_core::lab::rigidity::RELATIONS;
use anisocap_core::lab::suite::{
    run_jobs, suite_jobs, validate_options, CheckOptions, Job, CHECKS, DEFAULT_SEED, FD_LADDER, IDENTITY_LADDER,
};
use anisocap_core::lab::weights::CATALOG as WEIGHTS;
use anisocap_core::lab::{CheckReport, Criterion, Verdict};
use anisocap_core::minkowski::{self, CapillaryBVP, PhiSpec, SolveResult};
use anisocap_core::par;
use anisocap_core::surface::PsiMode;

pub const SCHEMA_VERSION: u32 = 1;
/// Directory for report files when `--report` is relative or absent.
pub const REPORT_DIR_ENV: &str = "CAPILLARY_REPORT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Bad names or flag combinations; exit status 2.
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "anisocap",
    version,
    about = "Anisotropic capillary identity lab and 1-D Minkowski solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// List checks, scenarios, norms, weights and relations.
    List,
    /// Run one check, or the full suite with `all`.
    Verify(VerifyArgs),
    /// Solve a problem once.
    Solve {
        #[command(subcommand)]
        problem: SolveProblem,
    },
    /// Run an experiment.
    Experiment {
        #[command(subcommand)]
        experiment: ExperimentKind,
    },
    /// Write the refinement ladder of a check as CSV.
    Ladder(LadderArgs),
}

#[derive(Debug, Subcommand)]
pub enum SolveProblem {
    /// The capillary L_p-Minkowski problem on an arc.
    Minkowski1d(SolveArgs),
}

#[derive(Debug, Subcommand)]
pub enum ExperimentKind {
    /// Multi-start uniqueness experiment for the 1-D solver.
    Uniqueness(SolveArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check id, or `all`.
    pub check: String,
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct LadderArgs {
    pub check: String,
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct SurfaceArgs {
    /// Scenario name or surface kind (see `list`).
    #[arg(long)]
    pub surface: Option<String>,
    /// Builtin norm; overrides the scenario's norm.
    #[arg(long)]
    pub norm: Option<String>,
    /// Ambient dimension for surface kinds.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Wulff radius of the base surface.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Capillary coefficient, inside the admissible interval of the norm.
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    /// Perturbation amplitude.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Perturbation profile (`cos-azimuth` or `radial`).
    #[arg(long)]
    pub psi_mode: Option<String>,
    /// Contact angle of a Euclidean sphere cap.
    #[arg(long)]
    pub cap_angle: Option<f64>,
    /// Comma-separated semi-axes of closed ellipsoids.
    #[arg(long, value_delimiter = ',')]
    pub axes: Option<Vec<f64>>,
    /// Comma-separated center of closed surfaces.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Refinement level of single-level checks.
    #[arg(long, default_value_t = 4)]
    pub level: u32,
    /// Comma-separated refinement ladder.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<u32>>,
    /// Curvature order; every admissible order when absent.
    #[arg(long)]
    pub k: Option<usize>,
    /// Weight function (see `list`).
    #[arg(long)]
    pub f: Option<String>,
    /// Curvature relation for `rigidity`.
    #[arg(long)]
    pub relation: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Instances per algebraic sweep.
    #[arg(long, default_value_t = 10_000)]
    pub sweep_count: usize,
    /// Worker threads for job-level parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// CSV path for the refinement ladders.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Override of the identity tolerance floor.
    #[arg(long)]
    pub tol_floor: Option<f64>,
    /// Override of the equality-case tolerance.
    #[arg(long)]
    pub tol_equality: Option<f64>,
    /// Override of the boundary-lemma tolerance.
    #[arg(long)]
    pub tol_boundary: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Exponent of the problem, at least 1.
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    /// Contact angle of the arc.
    #[arg(long, default_value_t = 1.0472)]
    pub theta: f64,
    /// `manufactured`, `const`, `bump`, or a file of grid values.
    #[arg(long, default_value = "manufactured")]
    pub phi: String,
    /// Grid intervals.
    #[arg(long = "N", default_value_t = 256)]
    pub n: usize,
    /// Random starts for the uniqueness experiment.
    #[arg(long)]
    pub starts: Option<usize>,
}

/// Which command a configuration runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum CommandConfig {
    List,
    Verify { check: String },
    SolveMinkowski1d,
    ExperimentUniqueness,
    Ladder { check: String },
}

/// A fully resolved run: every report embeds the configuration that made it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scenario: Option<Scenario>,
    pub options: CheckOptions,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub jobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut s = Summary {
            total: reports.len(),
            ..Default::default()
        };
        for r in reports {
            match r.verdict {
                Verdict::Pass => s.passed += 1,
                Verdict::Fail => s.failed += 1,
                Verdict::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }

    /// 0 when everything passed, 1 on any failure, 3 when only
    /// inconclusive results stand in the way.
    pub fn exit_code(&self) -> u8 {
        if self.failed > 0 || self.total == 0 {
            1
        } else if self.inconclusive > 0 {
            3
        } else {
            0
        }
    }
}

/// The versioned JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub config: RunConfig,
    pub summary: Summary,
    pub reports: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solution: Option<SolveResult>,
}

impl ReportDocument {
    fn new(config: RunConfig, reports: Vec<CheckReport>, solution: Option<SolveResult>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            summary: Summary::of(&reports),
            config,
            reports,
            solution,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn resolve_scenario(a: &SurfaceArgs) -> Result<Option<Scenario>, CliError> {
    let params = a.r0.is_some()
        || a.omega0.is_some()
        || a.eps.is_some()
        || a.psi_mode.is_some()
        || a.cap_angle.is_some()
        || a.axes.is_some()
        || a.center.is_some()
        || a.dim.is_some();
    let Some(name) = &a.surface else {
        if params || a.norm.is_some() {
            return Err(usage("surface flags need --surface"));
        }
        return Ok(None);
    };
    if let Ok(s) = scenario(name) {
        if params {
            return Err(usage(format!(
                "'{name}' is a named scenario; parameter flags apply to surface kinds ({})",
                SURFACE_KINDS.join(", ")
            )));
        }
        return Ok(Some(match &a.norm {
            Some(norm) => {
                let doc = builtin_norm(norm, s.dim()).map_err(usage)?;
                Scenario::new(&format!("{name}@{norm}"), doc, s.surface)
            }
            None => s,
        }));
    }
    if !SURFACE_KINDS.contains(&name.as_str()) {
        let names: Vec<String> = named_scenarios().into_iter().map(|s| s.name).collect();
        return Err(usage(format!(
            "unknown surface '{name}' (scenarios: {}; kinds: {})",
            names.join(", "),
            SURFACE_KINDS.join(", ")
        )));
    }
    let dim = a.dim.unwrap_or(3);
    if !(dim == 2 || dim == 3) {
        return Err(usage("--dim must be 2 or 3"));
    }
    let r0 = a.r0.unwrap_or(1.0);
    let omega0 = a.omega0.unwrap_or(-0.3);
    let default_axes = if dim == 3 { vec![1.0, 1.25, 0.8] } else { vec![1.5, 1.0] };
    let axes = a.axes.clone().unwrap_or(default_axes);
    let center = a.center.clone().unwrap_or(vec![0.0; dim]);
    if axes.len() != dim || center.len() != dim {
        return Err(usage(format!("--axes and --center need {dim} components")));
    }
    let psi_mode = match &a.psi_mode {
        Some(m) => PsiMode::parse(m).map_err(usage)?,
        None => PsiMode::CosAzimuth,
    };
    let surface = match name.as_str() {
        "capillary-wulff" => SurfaceSpec::CapillaryWulff { r0, omega0 },
        "perturbed-capillary" => SurfaceSpec::PerturbedCapillary {
            r0,
            omega0,
            eps: a.eps.unwrap_or(0.05),
            psi_mode,
        },
        "sphere-cap" => SurfaceSpec::SphereCap {
            r: r0,
            theta: a.cap_angle.unwrap_or(std::f64::consts::FRAC_PI_3),
        },
        "closed-wulff" => SurfaceSpec::ClosedWulff { r: r0, center },
        "closed-ellipsoid" => SurfaceSpec::ClosedEllipsoid {
            semi_axes: axes,
            center,
        },
        "closed-sphere" => SurfaceSpec::ClosedSphere { r: r0 },
        _ => SurfaceSpec::RadialEllipsoid {
            semi_axes: axes,
            step: 1e-3,
        },
    };
    let default_norm = match surface {
        SurfaceSpec::SphereCap { .. } | SurfaceSpec::ClosedSphere { .. } => "isotropic",
        _ => "ellipsoid",
    };
    let norm = builtin_norm(a.norm.as_deref().unwrap_or(default_norm), dim).map_err(usage)?;
    Ok(Some(Scenario::new(name, norm, surface)))
}

fn parse_phi(s: &str) -> Result<PhiSpec, CliError> {
    if let Ok(spec) = PhiSpec::parse(s) {
        return Ok(spec);
    }
    let path = Path::new(s);
    if !path.is_file() {
        return Err(usage(PhiSpec::parse(s).unwrap_err()));
    }
    let text = std::fs::read_to_string(path).map_err(io)?;
    let values: Vec<f64> = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(_) => text
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| usage(format!("{s}: {e}")))?,
    };
    Ok(PhiSpec::Values { values })
}

fn apply_solver(o: &mut CheckOptions, a: &SolverArgs) -> Result<(), CliError> {
    o.solver.p = a.p;
    o.solver.theta = a.theta;
    o.solver.phi = parse_phi(&a.phi)?;
    o.solver.n = a.n;
    if let Some(s) = a.starts {
        o.solver.starts = s;
    }
    Ok(())
}

fn apply_common(o: &mut CheckOptions, a: &CommonArgs) {
    o.level = a.level;
    o.levels = a.levels.clone();
    o.k = a.k;
    o.f = a.f.clone();
    o.relation = a.relation.clone();
    o.seed = a.seed;
    o.sweep_count = a.sweep_count;
    if let Some(v) = a.tol_floor {
        o.policy.floor = v;
    }
    if let Some(v) = a.tol_equality {
        o.policy.equality = v;
    }
    if let Some(v) = a.tol_boundary {
        o.policy.boundary = v;
    }
}

impl RunConfig {
    /// Resolves parsed arguments into a configuration, rejecting unknown
    /// names with the relevant catalog.
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let mut options = CheckOptions::default();
        let blank = |command| RunConfig {
            command,
            scenario: None,
            options: CheckOptions::default(),
            jobs: None,
            report: None,
            csv: None,
        };
        let config = match &cli.command {
            Commands::List => blank(CommandConfig::List),
            Commands::Verify(v) => {
                apply_common(&mut options, &v.common);
                apply_solver(&mut options, &v.solver)?;
                let scenario = resolve_scenario(&v.surface)?;
                if v.check == "all" {
                    if scenario.is_some() {
                        return Err(usage("`verify all` runs the fixed scenario catalog; drop --surface"));
                    }
                } else {
                    validate_options(&v.check, &options).map_err(usage)?;
                }
                RunConfig {
                    command: CommandConfig::Verify { check: v.check.clone() },
                    scenario,
                    options,
                    jobs: v.common.jobs,
                    report: v.common.report.clone(),
                    csv: v.common.csv.clone(),
                }
            }
            Commands::Ladder(l) => {
                apply_common(&mut options, &l.common);
                apply_solver(&mut options, &l.solver)?;
                validate_options(&l.check, &options).map_err(usage)?;
                if options.levels.is_none() {
                    let fd = matches!(
                        l.check.as_str(),
                        "divergence-identity" | "gradient-identity" | "quadrature-area" | "curvature-convergence"
                    );
                    options.levels = Some(if fd {
                        FD_LADDER.to_vec()
                    } else {
                        IDENTITY_LADDER.to_vec()
                    });
                }
                RunConfig {
                    command: CommandConfig::Ladder { check: l.check.clone() },
                    scenario: resolve_scenario(&l.surface)?,
                    options,
                    jobs: l.common.jobs,
                    report: l.common.report.clone(),
                    csv: l.out.clone().or_else(|| l.common.csv.clone()),
                }
            }
            Commands::Solve {
                problem: SolveProblem::Minkowski1d(s),
            }
            | Commands::Experiment {
                experiment: ExperimentKind::Uniqueness(s),
            } => {
                apply_solver(&mut options, &s.solver)?;
                options.seed = s.seed;
                if s.solver.starts.is_none() && matches!(cli.command, Commands::Solve { .. }) {
                    // A plain solve runs no multi-start experiment unless asked.
                    options.solver.starts = 0;
                }
                let command = if matches!(cli.command, Commands::Solve { .. }) {
                    CommandConfig::SolveMinkowski1d
                } else {
                    CommandConfig::ExperimentUniqueness
                };
                RunConfig {
                    command,
                    scenario: None,
                    options,
                    jobs: None,
                    report: s.report.clone(),
                    csv: None,
                }
            }
        };
        Ok(config)
    }

    /// Report path after applying the report-directory variable.
    pub fn report_path(&self) -> Option<PathBuf> {
        let dir = std::env::var_os(REPORT_DIR_ENV).map(PathBuf::from);
        match (&self.report, dir) {
            (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
            (Some(p), _) => Some(p.clone()),
            (None, Some(d)) => Some(d.join(format!("{}.json", self.default_stem()))),
            (None, None) => None,
        }
    }

    fn default_stem(&self) -> String {
        match &self.command {
            CommandConfig::List => "list".into(),
            CommandConfig::Verify { check } => format!("verify-{check}"),
            CommandConfig::SolveMinkowski1d => "solve-minkowski1d".into(),
            CommandConfig::ExperimentUniqueness => "experiment-uniqueness".into(),
            CommandConfig::Ladder { check } => format!("ladder-{check}"),
        }
    }
}

/// The result of a run, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: ReportDocument,
    /// Human-readable lines for stdout.
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self.document.config.command {
            CommandConfig::List => 0,
            _ => self.document.summary.exit_code(),
        }
    }
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

/// One line per report.
pub fn report_line(r: &CheckReport) -> String {
    let mut line = format!("{:<12} {}", verdict_label(r.verdict), r.id);
    if let Some(s) = &r.scenario {
        line += &format!(" [{s}]");
    }
    if let Some(k) = r.k {
        line += &format!(" k={k}");
    }
    if let Some(f) = &r.f {
        line += &format!(" f={f}");
    }
    if let Some(l) = r.level {
        line += &format!(" L={l}");
    }
    line += &format!(" rel={:.3e}", r.rel_residual);
    if let Some(fit) = &r.fitted_order {
        line += &format!(" order={fit}");
    }
    for c in r.criteria.iter().filter(|c| !c.passed) {
        line += &format!(" !{}={:.3e}(bound {:.1e})", c.name, c.value, c.bound);
    }
    if let Some(e) = &r.error {
        line += &format!(" error: {e}");
    }
    line
}

fn list_lines() -> Vec<String> {
    let mut out = vec!["checks:".to_string()];
    out.extend(CHECKS.iter().map(|(id, d)| format!("  {id:<28} {d}")));
    out.push("scenarios:".into());
    out.extend(
        named_scenarios()
            .iter()
            .map(|s| format!("  {:<28} {} / dim {}", s.name, s.surface.kind(), s.dim())),
    );
    out.push(format!("surface kinds: {}", SURFACE_KINDS.join(", ")));
    out.push(format!("norms: {}", BUILTIN_NORMS.join(", ")));
    out.push(format!("weights: {}", WEIGHTS.join(", ")));
    let rel: Vec<&str> = RELATIONS.iter().map(|r| r.name()).collect();
    out.push(format!("relations: {}", rel.join(", ")));
    out.push("phi: manufactured, const, bump, <file of grid values>".into());
    out
}

fn solve_once(o: &CheckOptions) -> (Vec<CheckReport>, Option<SolveResult>) {
    let s = &o.solver;
    let bvp = match CapillaryBVP::from_spec(s.theta, s.p, &s.phi, s.n) {
        Ok(b) => b,
        Err(e) => return (vec![CheckReport::errored("minkowski-solve", None, e)], None),
    };
    let label = format!("p={},theta={},N={},phi={}", s.p, s.theta, s.n, s.phi.name());
    let mut reports = Vec::new();
    let solution = match minkowski::solve(&bvp, None) {
        Ok(sol) => {
            let mut r = CheckReport::new("minkowski-solve");
            r.scenario = Some(label.clone());
            reports.push(
                r.sides(sol.residual, 0.0, 1.0)
                    .criterion(Criterion::at_most("residual", sol.residual, bvp.controls.tolerance))
                    .criterion(Criterion::at_least("convexity", sol.min_convexity, f64::MIN_POSITIVE))
                    .metric("iterations", sol.iterations as f64)
                    .finish(),
            );
            Some(sol)
        }
        Err(e) => {
            reports.push(CheckReport::errored("minkowski-solve", Some(label), e));
            None
        }
    };
    if s.starts > 0 {
        reports.extend(Job::from_parts("minkowski-uniqueness", None, o.clone()).run());
        if s.p == 2.0 {
            reports.extend(Job::from_parts("minkowski-scaling-family", None, o.clone()).run());
        }
    }
    (reports, solution)
}

/// Executes a configuration.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let o = &config.options;
    let (reports, solution) = match &config.command {
        CommandConfig::List => {
            return Ok(Outcome {
                document: ReportDocument::new(config.clone(), vec![], None),
                lines: list_lines(),
            })
        }
        CommandConfig::Verify { check } if check == "all" => {
            let jobs = suite_jobs(o);
            (par::with_threads(config.jobs, || run_jobs(&jobs)), None)
        }
        CommandConfig::Verify { check } | CommandConfig::Ladder { check } => {
            let job = Job::from_parts(check, config.scenario.clone(), o.clone());
            (par::with_threads(config.jobs, || run_jobs(&[job])), None)
        }
        CommandConfig::SolveMinkowski1d => solve_once(o),
        CommandConfig::ExperimentUniqueness => {
            let job = Job::from_parts("minkowski-uniqueness", None, o.clone());
            let mut reports = job.run();
            if o.solver.p == 2.0 {
                reports.extend(Job::from_parts("minkowski-scaling-family", None, o.clone()).run());
            }
            (reports, None)
        }
    };
    let document = ReportDocument::new(config.clone(), reports, solution);
    let mut lines: Vec<String> = document.reports.iter().map(report_line).collect();
    let s = document.summary;
    lines.push(format!(
        "summary: {} passed, {} failed, {} inconclusive of {}",
        s.passed, s.failed, s.inconclusive, s.total
    ));
    Ok(Outcome { document, lines })
}

/// Flat CSV row of a ladder.
#[derive(Debug, Serialize)]
struct LadderCsvRow<'a> {
    id: &'a str,
    scenario: &'a str,
    k: Option<usize>,
    f: &'a str,
    level: u32,
    h: f64,
    lhs: f64,
    rhs: f64,
    residual: f64,
    /// Order fitted over the whole ladder, repeated on each row; "exact" at the floor.
    fitted_order: String,
}

/// All ladder rows of the reports as CSV.
pub fn ladders_csv(reports: &[CheckReport]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        let order = r.fitted_order.as_ref().map(|o| o.to_string()).unwrap_or_default();
        for row in &r.ladder {
            w.serialize(LadderCsvRow {
                id: &r.id,
                scenario: r.scenario.as_deref().unwrap_or(""),
                k: r.k,
                f: r.f.as_deref().unwrap_or(""),
                level: row.level,
                h: row.h,
                lhs: row.lhs,
                rhs: row.rhs,
                residual: row.residual,
                fitted_order: order.clone(),
            })
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(io)?;
    String::from_utf8(bytes).map_err(io)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(|e| io(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(stdout: &mut dyn std::io::Write, text: &str) -> Result<(), CliError> {
    match stdout.write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(io(e)),
        _ => Ok(()),
    }
}

/// Parses, runs and writes outputs; returns the process exit code.
pub fn main_with(cli: &Cli, stdout: &mut dyn std::io::Write) -> Result<u8, CliError> {
    let config = RunConfig::from_cli(cli)?;
    let outcome = run(&config)?;
    if config.command == CommandConfig::List {
        let mut text = outcome.lines.join("\n");
        text.push('\n');
        emit(stdout, &text)?;
        return Ok(0);
    }
    let report = config.report_path();
    let emit_json_stdout = report.is_none() && matches!(config.command, CommandConfig::SolveMinkowski1d);
    let csv = ladders_csv(&outcome.document.reports)?;
    if let CommandConfig::Ladder { check } = &config.command {
        if csv.is_empty() {
            return Err(usage(format!("check '{check}' produced no ladder rows")));
        }
        match &config.csv {
            Some(p) => write_file(p, &csv)?,
            None => emit(stdout, &csv)?,
        }
    } else if emit_json_stdout {
        emit(stdout, &format!("{}\n", outcome.document.to_json()))?;
    } else {
        let mut text = outcome.lines.join("\n");
        text.push('\n');
        emit(stdout, &text)?;
        if let Some(p) = &config.csv {
            write_file(p, &csv)?;
        }
    }
    if let Some(p) = report {
        if config.command != CommandConfig::List {
            write_file(&p, &outcome.document.to_json())?;
        }
    }
    Ok(outcome.exit_code())
}
