//! The check catalog: dispatch by id, and the job list behind a full run.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lab::algebraic::{mixed_curvature_sweep, newton_maclaurin_sweep};
use crate::lab::catalog::{named_scenarios, scenario, Scenario};
use crate::lab::integral::*;
use crate::lab::report::{CheckReport, TolerancePolicy};
use crate::lab::rigidity::{rigidity, RelationKind, RELATIONS};
use crate::lab::weights::WeightFunction;
use crate::minkowski::{self, CapillaryBVP, PhiSpec, DEFAULT_SIZES};

/// Check ids with one-line descriptions.
pub const CHECKS: &[(&str, &str)] = &[
    ("hsiung-minkowski", "weighted anisotropic capillary Minkowski identity"),
    (
        "euclidean-minkowski",
        "classical weighted Minkowski identity on closed surfaces",
    ),
    (
        "minkowski-corollary",
        "sign of the weighted Minkowski defect against the monotonicity of f",
    ),
    ("boundary-lemmas", "conormal identities along the capillary boundary"),
    ("divergence-identity", "divergence of the capillary Newton-tensor field"),
    ("gradient-identity", "gradient of the capillary support function"),
    ("heintze-karcher", "anisotropic capillary Heintze-Karcher inequality"),
    (
        "support-constancy",
        "constancy of the capillary support function on Wulff shapes",
    ),
    ("boundary-condition", "capillary contact-angle condition"),
    ("quadrature-area", "cap, boundary and sphere areas against closed forms"),
    (
        "curvature-convergence",
        "finite-difference curvatures against an exact ellipsoid",
    ),
    ("wulff-duality", "Cahn-Hoffman map onto the unit Wulff shape"),
    ("positivity", "positivity of F + omega0 <., E^F> for random norms"),
    ("newton-maclaurin", "Newton-Maclaurin sweep"),
    ("mixed-curvature-inequality", "mixed-curvature inequality sweep"),
    (
        "rigidity",
        "curvature relations: forward on Wulff shapes, violated elsewhere",
    ),
    (
        "minkowski-manufactured",
        "1-D capillary Minkowski solver against a manufactured solution",
    ),
    ("minkowski-self-convergence", "1-D solver grid self-convergence"),
    ("minkowski-uniqueness", "1-D solver multi-start uniqueness experiment"),
    ("minkowski-scaling-family", "1-D solver rescaling family at p = 2"),
];

pub const DEFAULT_SEED: u64 = 20240607;

fn unknown_check(id: &str) -> Error {
    let ids: Vec<&str> = CHECKS.iter().map(|c| c.0).collect();
    Error::Domain(format!("unknown check '{id}' (valid: {})", ids.join(", ")))
}

pub fn validate_check(id: &str) -> Result<()> {
    if CHECKS.iter().any(|c| c.0 == id) {
        Ok(())
    } else {
        Err(unknown_check(id))
    }
}

/// Parameters of the 1-D solver checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub p: f64,
    pub theta: f64,
    pub n: usize,
    pub phi: PhiSpec,
    pub starts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            p: 3.0,
            theta: 1.0472,
            n: 256,
            phi: PhiSpec::Manufactured,
            starts: 20,
        }
    }
}

/// Everything a single check may need. `None` fields fan out to the
/// check's defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckOptions {
    pub level: u32,
    /// Refinement ladder; `None` means a single level for identities and the
    /// default ladder for finite-difference checks.
    pub levels: Option<Vec<u32>>,
    pub k: Option<usize>,
    pub f: Option<String>,
    pub relation: Option<String>,
    pub seed: u64,
    pub sweep_count: usize,
    pub policy: TolerancePolicy,
    pub solver: SolverOptions,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            level: 4,
            levels: None,
            k: None,
            f: None,
            relation: None,
            seed: DEFAULT_SEED,
            sweep_count: 10_000,
            policy: TolerancePolicy::default(),
            solver: SolverOptions::default(),
        }
    }
}

/// Ladder used by the pointwise finite-difference checks.
pub const FD_LADDER: [u32; 3] = [2, 3, 4];
/// Ladder used for convergence orders of the integral identities.
pub const IDENTITY_LADDER: [u32; 3] = [3, 4, 5];

fn default_scenario(id: &str) -> &'static str {
    match id {
        "euclidean-minkowski" => "closed-ellipsoid-euclidean",
        "minkowski-corollary" | "divergence-identity" | "gradient-identity" => "ellipsoid-perturbed-cap",
        _ => "ellipsoid-wulff-cap",
    }
}

fn weights(opts: &CheckOptions, default: &[&str]) -> Result<Vec<WeightFunction>> {
    match &opts.f {
        Some(f) => Ok(vec![WeightFunction::named(f)?]),
        None => default.iter().map(|f| WeightFunction::named(f)).collect(),
    }
}

fn ks(opts: &CheckOptions, range: std::ops::Range<usize>) -> Vec<usize> {
    match opts.k {
        Some(k) => vec![k],
        None => range.collect(),
    }
}

fn solver_bvp(s: &SolverOptions, p: f64) -> Result<CapillaryBVP> {
    CapillaryBVP::from_spec(s.theta, p, &s.phi, s.n)
}

/// Runs one check. A check fans out over `k` and `f` when those are unset.
pub fn run_check(id: &str, scn: Option<&Scenario>, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
    validate_check(id)?;
    let owned;
    let scn = match scn {
        Some(s) => s,
        None => {
            owned = scenario(default_scenario(id))?;
            &owned
        }
    };
    let n = scn.dim() - 1;
    let p = &opts.policy;
    let single = vec![opts.level];
    let levels = opts.levels.clone().unwrap_or(single.clone());
    let fd_levels = opts.levels.clone().unwrap_or(FD_LADDER.to_vec());
    let mut out = Vec::new();
    match id {
        "hsiung-minkowski" => {
            for f in weights(opts, &["const"])? {
                for k in ks(opts, 0..n) {
                    out.push(hsiung_minkowski(scn, &f, k, &levels, p)?);
                }
            }
        }
        "euclidean-minkowski" => {
            for f in weights(opts, &["const"])? {
                for k in ks(opts, 0..n) {
                    out.push(euclidean_minkowski(scn, &f, k, opts.level, p)?);
                }
            }
        }
        "minkowski-corollary" => {
            for f in weights(opts, &["u", "exp-neg-u"])? {
                for k in ks(opts, 0..n) {
                    out.push(minkowski_corollary(scn, &f, k, opts.level, p)?);
                }
            }
        }
        "boundary-lemmas" => out.push(boundary_lemmas(scn, opts.level, p)?),
        "divergence-identity" => {
            for k in ks(opts, 0..n) {
                out.push(divergence_identity(scn, k, &fd_levels, p)?);
            }
        }
        "gradient-identity" => out.push(gradient_identity(scn, &fd_levels, p)?),
        "heintze-karcher" => out.push(heintze_karcher(scn, &levels, p)?),
        "support-constancy" => out.push(support_constancy(scn, opts.level)?),
        "boundary-condition" => out.push(boundary_condition(scn, opts.level)?),
        "quadrature-area" => {
            let mut r = quadrature_area(scn.dim(), &fd_levels, p)?;
            r.scenario = Some(format!("dim-{}", scn.dim()));
            out.push(r);
        }
        "curvature-convergence" => {
            let mut r = curvature_convergence(scn.dim(), &fd_levels, p)?;
            r.scenario = Some(format!("dim-{}", scn.dim()));
            out.push(r);
        }
        "wulff-duality" => out.push(wulff_duality(scn, 2000)?),
        "positivity" => out.push(positivity(opts.seed, 64, 2000)?),
        "newton-maclaurin" => out.push(newton_maclaurin_sweep(opts.seed, opts.sweep_count)),
        "mixed-curvature-inequality" => out.push(mixed_curvature_sweep(opts.seed, opts.sweep_count)),
        "rigidity" => {
            let kinds = match &opts.relation {
                Some(r) => vec![RelationKind::parse(r)?],
                None => RELATIONS.iter().copied().filter(|k| n >= k.min_n()).collect(),
            };
            for kind in kinds {
                out.push(rigidity(scn, kind, opts.level)?);
            }
        }
        "minkowski-manufactured" => {
            let s = &opts.solver;
            out.push(minkowski::manufactured_convergence(s.theta, s.p, &DEFAULT_SIZES)?);
        }
        "minkowski-self-convergence" => {
            let s = &opts.solver;
            out.push(minkowski::self_convergence(s.theta, s.p, &s.phi, &DEFAULT_SIZES)?);
        }
        "minkowski-uniqueness" => {
            let s = &opts.solver;
            out.push(minkowski::uniqueness_experiment(
                &solver_bvp(s, s.p)?,
                s.starts,
                opts.seed,
            )?);
        }
        "minkowski-scaling-family" => {
            let s = &opts.solver;
            out.push(minkowski::scaling_family_check(&solver_bvp(s, 2.0)?, 3.0)?);
        }
        other => return Err(unknown_check(other)),
    }
    Ok(out)
}

/// One unit of work in a full run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: String,
    pub scenario: Option<Scenario>,
    pub options: CheckOptions,
}

impl Job {
    fn new(id: &str, scenario: Option<&Scenario>, options: CheckOptions) -> Self {
        Self {
            id: id.to_string(),
            scenario: scenario.cloned(),
            options,
        }
    }

    pub fn from_parts(id: &str, scenario: Option<Scenario>, options: CheckOptions) -> Self {
        Self {
            id: id.to_string(),
            scenario,
            options,
        }
    }

    /// Runs the job; errors become failed reports so one bad job does not
    /// hide the others.
    pub fn run(&self) -> Vec<CheckReport> {
        match run_check(&self.id, self.scenario.as_ref(), &self.options) {
            Ok(r) => r,
            Err(e) => vec![CheckReport::errored(
                self.id.clone(),
                self.scenario.as_ref().map(|s| s.name.clone()),
                e,
            )],
        }
    }
}

/// The job list of `verify all`.
pub fn suite_jobs(base: &CheckOptions) -> Vec<Job> {
    let all = named_scenarios();
    let with = |f: &dyn Fn(&mut CheckOptions)| {
        let mut o = base.clone();
        f(&mut o);
        o
    };
    let mut jobs = Vec::new();
    for s in &all {
        let perturbed = !s.is_wulff() && !s.is_closed();
        if perturbed {
            let o = with(&|o| {
                o.levels = Some(IDENTITY_LADDER.to_vec());
                o.f = None;
            });
            for f in ["u", "u2", "exp-neg-u"] {
                let mut of = o.clone();
                of.f = Some(f.into());
                jobs.push(Job::new("hsiung-minkowski", Some(s), of));
            }
            jobs.push(Job::new("minkowski-corollary", Some(s), base.clone()));
            jobs.push(Job::new("divergence-identity", Some(s), base.clone()));
            jobs.push(Job::new("gradient-identity", Some(s), base.clone()));
        } else {
            for f in ["const", "u", "exp-neg-u"] {
                jobs.push(Job::new("hsiung-minkowski", Some(s), with(&|o| o.f = Some(f.into()))));
            }
            if !s.is_closed() {
                jobs.push(Job::new(
                    "minkowski-corollary",
                    Some(s),
                    with(&|o| o.f = Some("u".into())),
                ));
            }
        }
        if s.is_closed() && s.is_isotropic() {
            for f in ["const", "u"] {
                jobs.push(Job::new(
                    "euclidean-minkowski",
                    Some(s),
                    with(&|o| o.f = Some(f.into())),
                ));
            }
        }
        if s.is_closed() && s.has_fd_curvature() {
            jobs.push(Job::new("divergence-identity", Some(s), base.clone()));
            jobs.push(Job::new("gradient-identity", Some(s), base.clone()));
        }
        if !s.is_closed() {
            jobs.push(Job::new("boundary-lemmas", Some(s), base.clone()));
            jobs.push(Job::new("boundary-condition", Some(s), base.clone()));
            jobs.push(Job::new("rigidity", Some(s), base.clone()));
        }
        jobs.push(Job::new("heintze-karcher", Some(s), base.clone()));
        jobs.push(Job::new("support-constancy", Some(s), base.clone()));
    }
    let mut seen_norms = Vec::new();
    for s in &all {
        if !seen_norms.contains(&s.norm) {
            seen_norms.push(s.norm.clone());
            jobs.push(Job::new("wulff-duality", Some(s), base.clone()));
        }
    }
    for dim_rep in ["ellipsoid-wulff-cap", "arc-wulff"] {
        let s = all.iter().find(|s| s.name == dim_rep);
        jobs.push(Job::new("quadrature-area", s, base.clone()));
        jobs.push(Job::new("curvature-convergence", s, base.clone()));
    }
    for id in ["positivity", "newton-maclaurin", "mixed-curvature-inequality"] {
        jobs.push(Job::new(id, None, base.clone()));
    }
    let solver = |p: f64, phi: PhiSpec, n: usize| {
        with(&|o| {
            o.solver.p = p;
            o.solver.phi = phi.clone();
            o.solver.n = n;
        })
    };
    for p in [1.0, 2.0, 3.0] {
        jobs.push(Job::new(
            "minkowski-manufactured",
            None,
            solver(p, PhiSpec::Manufactured, 256),
        ));
    }
    jobs.push(Job::new(
        "minkowski-self-convergence",
        None,
        solver(3.0, PhiSpec::Bump { amplitude: 0.3 }, 256),
    ));
    jobs.push(Job::new(
        "minkowski-uniqueness",
        None,
        solver(3.0, PhiSpec::Manufactured, 256),
    ));
    jobs.push(Job::new(
        "minkowski-uniqueness",
        None,
        solver(2.0, PhiSpec::Manufactured, 256),
    ));
    jobs.push(Job::new(
        "minkowski-uniqueness",
        None,
        solver(1.0, PhiSpec::Constant { c: 1.0 }, 256),
    ));
    jobs.push(Job::new(
        "minkowski-scaling-family",
        None,
        solver(2.0, PhiSpec::Manufactured, 256),
    ));
    jobs
}

/// Runs jobs (concurrently with the `parallel` feature) and merges the
/// reports in key order. Reports sharing a key keep their job order.
pub fn run_jobs(jobs: &[Job]) -> Vec<CheckReport> {
    let mut reports: Vec<CheckReport> = crate::par::map(jobs, Job::run).into_iter().flatten().collect();
    reports.sort_by_key(|r| r.key());
    reports
}

/// A check id must match exactly; the error lists the catalog.
pub fn require_check(id: &str) -> Result<&'static str> {
    CHECKS
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.0)
        .ok_or_else(|| unknown_check(id))
}

/// Rejects option combinations that cannot apply to a check.
pub fn validate_options(id: &str, opts: &CheckOptions) -> Result<()> {
    require_check(id)?;
    if let Some(levels) = &opts.levels {
        if levels.is_empty() {
            return domain("--levels needs at least one level");
        }
    }
    if let Some(f) = &opts.f {
        WeightFunction::named(f)?;
    }
    if let Some(r) = &opts.relation {
        RelationKind::parse(r)?;
    }
    Ok(())
}
