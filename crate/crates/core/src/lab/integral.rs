//! Integral identities and inequalities evaluated on catalog surfaces.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capillary::{CapillaryContext, CapillarySurface, PointState};
use crate::error::{domain, Error, Result};
use crate::lab::catalog::{Scenario, SurfaceSpec};
use crate::lab::report::{CheckReport, Criterion, LadderRow, TolerancePolicy};
use crate::lab::weights::{Monotonicity, WeightFunction};
use crate::norm::{MinkowskiNorm, WulffShapeSpec};
use crate::par;
use crate::poly::HARMONIC_MODES_3D;
use crate::quadrature::{convergence_fit, fit_errors, level_spacing, ANALYTIC_FLOOR, FD_FLOOR};
use crate::sphere::{quasi_uniform, random_unit, vertical, GnomonicChart, Matrix, Vector};
use crate::surface::{Geometry, Hypersurface, RadialGraph, RadialProfile, SupportSurface, SurfaceModel};
use crate::symmetric::{binomial, newton_operators, SymmetricFunctions};

/// Step of the finite-difference cross-check of `∇ū` inside the Minkowski check.
const CROSSCHECK_STEP: f64 = 1e-4;
/// Every `CROSSCHECK_STRIDE`-th node is cross-checked.
const CROSSCHECK_STRIDE: usize = 100;
/// Smallest relative gap that counts as strict for the Heintze–Karcher inequality.
const STRICT_GAP: f64 = 1e-4;
/// Spread of `ū` required on perturbed surfaces.
const SPREAD_WITNESS: f64 = 1e-3;

fn header(id: &str, scn: &Scenario, cs: &CapillarySurface) -> CheckReport {
    let mut r = CheckReport::new(id);
    r.scenario = Some(scn.name.clone());
    r.surface = Some(cs.describe());
    r.norm = Some(cs.context.norm.describe());
    r.omega0 = Some(cs.context.omega0);
    r.level = Some(cs.level());
    r
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k >= n {
        domain(format!("k = {k} must lie in 0..={}", n - 1))
    } else {
        Ok(())
    }
}

fn sorted_levels(levels: &[u32]) -> Result<Vec<u32>> {
    let mut v = levels.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.is_empty() {
        return domain("at least one refinement level is required");
    }
    Ok(v)
}

/// Requested levels, preceded by `top − 1` when only one level was asked for,
/// so that an error estimate is always available.
fn evaluation_levels(levels: &[u32]) -> Result<Vec<u32>> {
    let mut v = sorted_levels(levels)?;
    if v.len() == 1 && v[0] > 1 {
        v.insert(0, v[0] - 1);
    }
    Ok(v)
}

fn build_all(scn: &Scenario, levels: &[u32]) -> Result<Vec<CapillarySurface>> {
    levels.iter().map(|&l| scn.build(l)).collect()
}

fn spacings(levels: &[u32]) -> Vec<f64> {
    levels.iter().map(|&l| level_spacing(l)).collect()
}

/// Range of `ū` over all nodes.
pub fn u_range(cs: &CapillarySurface) -> (f64, f64) {
    cs.interior
        .iter()
        .chain(&cs.boundary)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.u_bar), hi.max(s.u_bar))
        })
}

/// The three integrals of the weighted Minkowski formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkowskiTerms {
    /// `∫ f H_k (F(ν) + ω₀⟨ν,E^F⟩)`.
    pub first: f64,
    /// `∫ f H_{k+1} ⟨X,ν⟩`.
    pub second: f64,
    /// `−∫ ⟨∇f, P_k ξ⟩ / ((n−k) C(n,k))`.
    pub rhs: f64,
    /// Sum of the absolute integrands, the normalization of residuals.
    pub scale: f64,
}

impl MinkowskiTerms {
    pub fn lhs(&self) -> f64 {
        self.first - self.second
    }

    pub fn rel_residual(&self) -> f64 {
        (self.lhs() - self.rhs).abs() / self.scale
    }
}

pub fn minkowski_terms(cs: &CapillarySurface, f: &WeightFunction, k: usize) -> Result<MinkowskiTerms> {
    let n = cs.n();
    check_k(n, k)?;
    let coef = 1.0 / ((n - k) as f64 * binomial(n, k));
    let a = |s: &PointState| f.value(s.u_bar) * s.h(k) * s.q;
    let b = |s: &PointState| f.value(s.u_bar) * s.h(k + 1) * s.support;
    let c = |s: &PointState| f.derivative(s.u_bar) * s.grad_u.dot(&s.p_xi(k));
    Ok(MinkowskiTerms {
        first: cs.integrate_with(a)?,
        second: cs.integrate_with(b)?,
        rhs: -coef * cs.integrate_with(c)?,
        scale: cs.integrate_with(|s| a(s).abs() + b(s).abs() + coef * c(s).abs())?,
    })
}

/// Central-difference stencil in the gnomonic chart of one node.
struct Stencil<'a> {
    geom: &'a Geometry,
    ginv: Matrix,
    delta: f64,
    plus: Vec<PointState>,
    minus: Vec<PointState>,
}

impl<'a> Stencil<'a> {
    fn new(cs: &CapillarySurface, geom: &'a Geometry, delta: f64) -> Result<Self> {
        let n = geom.tangents.len();
        let chart = GnomonicChart::with_basis(&geom.z, geom.sphere_basis.clone());
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        for i in 0..n {
            let mut y = vec![0.0; n];
            y[i] = delta;
            plus.push(cs.state_at(&chart.point(&y))?);
            y[i] = -delta;
            minus.push(cs.state_at(&chart.point(&y))?);
        }
        let g = Matrix::from_fn(n, n, |i, j| geom.tangents[i].dot(&geom.tangents[j]));
        let ginv = g.try_inverse().ok_or(Error::MeshQuality {
            node: 0,
            asymmetry: f64::NAN,
        })?;
        Ok(Self {
            geom,
            ginv,
            delta,
            plus,
            minus,
        })
    }

    /// Surface gradient `Σ g^{ij} ∂_i φ X_j` of a scalar field.
    fn gradient(&self, phi: impl Fn(&PointState) -> f64) -> Vector {
        let n = self.plus.len();
        let mut out = Vector::zeros(self.geom.x.len());
        for i in 0..n {
            let d = (phi(&self.plus[i]) - phi(&self.minus[i])) / (2.0 * self.delta);
            for j in 0..n {
                out += &self.geom.tangents[j] * (self.ginv[(i, j)] * d);
            }
        }
        out
    }

    /// Surface divergence `Σ g^{ij} ⟨∂_i V, X_j⟩` of a tangent field.
    fn divergence(&self, v: impl Fn(&PointState) -> Vector) -> f64 {
        let n = self.plus.len();
        let mut out = 0.0;
        for i in 0..n {
            let d = (v(&self.plus[i]) - v(&self.minus[i])) / (2.0 * self.delta);
            for j in 0..n {
                out += self.ginv[(i, j)] * d.dot(&self.geom.tangents[j]);
            }
        }
        out
    }
}

/// Largest relative difference between the analytic `∇ū` and central
/// differences of `ū`, normalized by `max(max|∇ū|, 10⁻³ mean ū)`.
fn gradient_error(cs: &CapillarySurface, nodes: &[usize], delta: f64) -> Result<f64> {
    let errors = par::try_map(nodes, |_, &i| {
        let s = &cs.interior[i];
        let st = Stencil::new(cs, &s.geom, delta)?;
        let fd = st.gradient(|p| p.u_bar);
        Ok((fd - s.geom.ambient(&s.grad_u)).norm())
    })?;
    let denom = gradient_scale(cs);
    Ok(errors.into_iter().fold(0.0, f64::max) / denom)
}

fn gradient_scale(cs: &CapillarySurface) -> f64 {
    let max_grad = cs.interior.iter().map(|s| s.grad_u.norm()).fold(0.0, f64::max);
    let mean_u = cs.interior.iter().map(|s| s.u_bar.abs()).sum::<f64>() / cs.interior.len() as f64;
    max_grad.max(1e-3 * mean_u)
}

/// The weighted capillary Minkowski formula.
pub fn hsiung_minkowski(
    scn: &Scenario,
    f: &WeightFunction,
    k: usize,
    levels: &[u32],
    policy: &TolerancePolicy,
) -> Result<CheckReport> {
    let requested = sorted_levels(levels)?;
    let eval = evaluation_levels(levels)?;
    let surfaces = build_all(scn, &eval)?;
    let cs = surfaces.last().expect("nonempty");
    check_k(cs.n(), k)?;
    let (lo, hi) = u_range(cs);
    f.verify_tag(lo, hi)?;
    let terms = surfaces
        .iter()
        .map(|s| minkowski_terms(s, f, k))
        .collect::<Result<Vec<_>>>()?;
    let t = *terms.last().expect("nonempty");
    let estimate = match terms.len() {
        0 | 1 => 0.0,
        m => (t.first / t.scale - terms[m - 2].first / terms[m - 2].scale).abs(),
    };
    let tol = policy.identity_tolerance(estimate);

    let mut r = header("hsiung-minkowski", scn, cs).sides(t.lhs(), t.rhs, t.scale);
    r.k = Some(k);
    r.f = Some(f.name.clone());
    for (l, tt) in eval.iter().zip(&terms) {
        if requested.contains(l) {
            r.ladder.push(LadderRow {
                level: *l,
                h: level_spacing(*l),
                lhs: tt.lhs(),
                rhs: tt.rhs,
                residual: tt.rel_residual(),
            });
        }
    }
    let rel = r.rel_residual;
    r = r.criterion(Criterion::at_most("relative-residual", rel, tol));
    if r.ladder.len() >= 3 {
        let errors: Vec<f64> = r.ladder.iter().map(|row| row.residual).collect();
        let fit = fit_errors(&errors, &spacings(&requested), scn.ladder_floor())?;
        r = r.criterion(Criterion::order("fitted-order", &fit, policy.quadrature_order));
        r.fitted_order = Some(fit);
    }
    let sample: Vec<usize> = (0..cs.interior.len()).step_by(CROSSCHECK_STRIDE).collect();
    let cross = gradient_error(cs, &sample, CROSSCHECK_STEP)?;
    Ok(r.criterion(Criterion::at_most("gradient-crosscheck", cross, 1e-6))
        .metric("first", t.first)
        .metric("second", t.second)
        .metric("scale", t.scale)
        .metric("estimate", estimate)
        .metric("tolerance", tol)
        .finish())
}

/// The Euclidean weighted Minkowski formula from the classical shape operator.
pub fn euclidean_terms(cs: &CapillarySurface, f: &WeightFunction, k: usize) -> Result<MinkowskiTerms> {
    let n = cs.n();
    check_k(n, k)?;
    let coef = 1.0 / ((n - k) as f64 * binomial(n, k));
    let rows = par::map(&cs.surface.interior, |node| {
        let g = &node.geom;
        let kappa: Vec<f64> = g.dnu.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        let sym = SymmetricFunctions::of(&kappa);
        let p = newton_operators(&g.dnu, &sym.sigma);
        let u = g.x.dot(&g.nu);
        let xt = g.coords(&g.x);
        let grad_u = &g.dnu * &xt;
        let fv = f.value(u);
        [
            fv * sym.h(k),
            fv * sym.h(k + 1) * u,
            f.derivative(u) * grad_u.dot(&(&p[k] * &xt)),
        ]
    });
    let integral = |j: usize, abs: bool| {
        let v: Vec<f64> = rows.iter().map(|r| if abs { r[j].abs() } else { r[j] }).collect();
        cs.surface.integrate(&v)
    };
    Ok(MinkowskiTerms {
        first: integral(0, false)?,
        second: integral(1, false)?,
        rhs: -coef * integral(2, false)?,
        scale: integral(0, true)? + integral(1, true)? + coef * integral(2, true)?,
    })
}

/// The classical (isotropic, closed) weighted Minkowski formula, computed
/// from `dν` alone with the weight evaluated on `⟨X,ν⟩`.
pub fn euclidean_minkowski(
    scn: &Scenario,
    f: &WeightFunction,
    k: usize,
    level: u32,
    policy: &TolerancePolicy,
) -> Result<CheckReport> {
    if !scn.is_closed() {
        return domain("the Euclidean specialization needs a closed surface");
    }
    let eval = evaluation_levels(&[level])?;
    let surfaces = build_all(scn, &eval)?;
    let terms = surfaces
        .iter()
        .map(|s| euclidean_terms(s, f, k))
        .collect::<Result<Vec<_>>>()?;
    let t = *terms.last().expect("nonempty");
    let estimate = match terms.len() {
        1 => 0.0,
        m => (t.first / t.scale - terms[m - 2].first / terms[m - 2].scale).abs(),
    };
    let tol = policy.identity_tolerance(estimate);
    let cs = surfaces.last().expect("nonempty");
    let mut r = header("euclidean-minkowski", scn, cs).sides(t.lhs(), t.rhs, t.scale);
    r.k = Some(k);
    r.f = Some(f.name.clone());
    r.norm = Some("euclidean".into());
    let rel = r.rel_residual;
    Ok(r.criterion(Criterion::at_most("relative-residual", rel, tol))
        .metric("estimate", estimate)
        .metric("tolerance", tol)
        .finish())
}

/// Sign of `∫ f H_k q − ∫ f H_{k+1}⟨X,ν⟩` against the monotonicity of `f`.
pub fn minkowski_corollary(
    scn: &Scenario,
    f: &WeightFunction,
    k: usize,
    level: u32,
    policy: &TolerancePolicy,
) -> Result<CheckReport> {
    if f.tag == Monotonicity::Neither {
        return domain(format!(
            "the sign test needs a monotone weight; '{}' is tagged neither",
            f.name
        ));
    }
    let eval = evaluation_levels(&[level])?;
    let surfaces = build_all(scn, &eval)?;
    let cs = surfaces.last().expect("nonempty");
    let kmin = cs.min_kappa();
    if !(kmin > 0.0) {
        return Err(Error::Convexity(format!("min κ^F = {kmin:.3e}")));
    }
    let (lo, hi) = u_range(cs);
    f.verify_tag(lo, hi)?;
    let terms = surfaces
        .iter()
        .map(|s| minkowski_terms(s, f, k))
        .collect::<Result<Vec<_>>>()?;
    let t = *terms.last().expect("nonempty");
    let estimate = match terms.len() {
        1 => 0.0,
        m => (t.lhs() / t.scale - terms[m - 2].lhs() / terms[m - 2].scale).abs(),
    };
    let tol = policy.identity_tolerance(estimate);
    let d = t.lhs() / t.scale;
    let mut r = header("minkowski-corollary", scn, cs).sides(t.first, t.second, t.scale);
    r.k = Some(k);
    r.f = Some(f.name.clone());
    let strict = policy.strictness * tol;
    let c = if scn.has_constant_support() || f.tag == Monotonicity::Constant {
        Criterion::at_most("equality", d.abs(), policy.equality)
    } else if f.tag == Monotonicity::NonDecreasing {
        Criterion::at_most("strict-difference", d, -strict)
    } else {
        Criterion::at_least("strict-difference", d, strict)
    };
    Ok(r.criterion(c)
        .metric("difference", d)
        .metric("estimate", estimate)
        .metric("tolerance", tol)
        .finish())
}

/// Boundary facts of capillary surfaces: `S_F` preserves `T(∂Σ)`,
/// `⟨ξ,μ⟩ = 0`, `⟨P_kξ,μ⟩ = 0`, and `⟨μ,E_{n+1}⟩ ≠ 0`.
pub fn boundary_lemmas(scn: &Scenario, level: u32, policy: &TolerancePolicy) -> Result<CheckReport> {
    if scn.is_closed() {
        return domain("boundary lemmas need a surface with boundary");
    }
    let cs = scn.build(level)?;
    let n = cs.n();
    let e = vertical(cs.surface.dim());
    let (mut shape, mut xi_mu, mut pk_mu, mut mu_e) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for (s, b) in cs.boundary.iter().zip(&cs.surface.boundary) {
        let mu = s.geom.coords(&b.mu);
        xi_mu = xi_mu.max(s.xi.dot(&mu).abs());
        for k in 0..=n {
            pk_mu = pk_mu.max(s.p_xi(k).dot(&mu).abs());
        }
        if let Some(t) = &b.tangent {
            let st = &s.curv.s_f * s.geom.coords(t);
            shape = shape.max(st.dot(&mu).abs());
        }
        mu_e = mu_e.min(b.mu.dot(&e).abs());
    }
    let worst = shape.max(xi_mu).max(pk_mu);
    let mut r = header("boundary-lemmas", &scn.clone(), &cs).sides(worst, 0.0, 1.0);
    if n >= 2 {
        r = r.criterion(Criterion::at_most("shape-operator-conormal", shape, policy.boundary));
    }
    Ok(r.criterion(Criterion::at_most("xi-conormal", xi_mu, policy.boundary))
        .criterion(Criterion::at_most("newton-xi-conormal", pk_mu, policy.boundary))
        .criterion(Criterion::at_least("conormal-vertical", mu_e, 1e-6))
        .metric("boundary-nodes", cs.boundary.len() as f64)
        .finish())
}

/// FD step of the pointwise ladders: half the level spacing.
fn pointwise_step(level: u32) -> f64 {
    0.5 * level_spacing(level)
}

/// `div(P_k ξ) = (n−k) C(n,k) (q H_k − ⟨X,ν⟩ H_{k+1})`, pointwise by finite
/// differences and integrated against the boundary flux.
pub fn divergence_identity(scn: &Scenario, k: usize, levels: &[u32], policy: &TolerancePolicy) -> Result<CheckReport> {
    let levels = sorted_levels(levels)?;
    let surfaces = build_all(scn, &levels)?;
    let cs = surfaces.last().expect("nonempty");
    let n = cs.n();
    // P_n vanishes identically, so k = n carries no information.
    check_k(n, k)?;
    let c = (n - k) as f64 * binomial(n, k);
    let mut ladder = Vec::new();
    for (l, s) in levels.iter().zip(&surfaces) {
        let delta = pointwise_step(*l);
        let idx: Vec<usize> = (0..s.interior.len()).collect();
        let rows = par::try_map(&idx, |_, &i| {
            let p = &s.interior[i];
            let st = Stencil::new(s, &p.geom, delta)?;
            let fd = st.divergence(|q| q.geom.ambient(&q.p_xi(k)));
            let expected = c * (p.q * p.h(k) - p.support * p.h(k + 1));
            let size = c * ((p.q * p.h(k)).abs() + (p.support * p.h(k + 1)).abs());
            Ok((fd, expected, size))
        })?;
        let err = rows.iter().map(|(a, b, _)| (a - b).abs()).fold(0.0, f64::max);
        let size = rows.iter().map(|r| r.2).fold(0.0, f64::max);
        ladder.push(LadderRow {
            level: *l,
            h: level_spacing(*l),
            lhs: rows.iter().map(|r| r.0.abs()).fold(0.0, f64::max),
            rhs: rows.iter().map(|r| r.1.abs()).fold(0.0, f64::max),
            residual: err / size,
        });
    }
    let interior = cs.integrate_with(|p| c * (p.q * p.h(k) - p.support * p.h(k + 1)))?;
    let scale = cs.integrate_with(|p| c * ((p.q * p.h(k)).abs() + (p.support * p.h(k + 1)).abs()))?;
    let flux = if cs.is_closed() {
        0.0
    } else {
        cs.boundary_integrate_with(|p, mu| p.p_xi(k).dot(&p.geom.coords(mu)))?
    };
    let mut r = header("divergence-identity", scn, cs).sides(interior, flux, scale);
    r.k = Some(k);
    let rel = r.rel_residual;
    r = r.criterion(Criterion::at_most("integrated-residual", rel, policy.floor));
    let top = ladder.last().expect("nonempty").residual;
    r = r.metric("pointwise-residual", top);
    if ladder.len() >= 3 {
        let errors: Vec<f64> = ladder.iter().map(|row| row.residual).collect();
        let fit = fit_errors(&errors, &spacings(&levels), FD_FLOOR)?;
        r = r.criterion(Criterion::order("fitted-order", &fit, policy.fd_order));
        r.fitted_order = Some(fit);
    }
    r.ladder = ladder;
    Ok(r.finish())
}

/// Analytic `∇ū = q⁻² dν(ξ)` against central differences of `ū`.
pub fn gradient_identity(scn: &Scenario, levels: &[u32], policy: &TolerancePolicy) -> Result<CheckReport> {
    let levels = sorted_levels(levels)?;
    let surfaces = build_all(scn, &levels)?;
    let mut ladder = Vec::new();
    for (l, s) in levels.iter().zip(&surfaces) {
        let idx: Vec<usize> = (0..s.interior.len()).collect();
        let err = gradient_error(s, &idx, pointwise_step(*l))?;
        ladder.push(LadderRow {
            level: *l,
            h: level_spacing(*l),
            lhs: err * gradient_scale(s),
            rhs: gradient_scale(s),
            residual: err,
        });
    }
    let cs = surfaces.last().expect("nonempty");
    let top = *ladder.last().expect("nonempty");
    let mut r = header("gradient-identity", scn, cs).sides(top.lhs, 0.0, top.rhs);
    if ladder.len() >= 3 {
        let errors: Vec<f64> = ladder.iter().map(|row| row.residual).collect();
        let fit = fit_errors(&errors, &spacings(&levels), FD_FLOOR)?;
        r = r.criterion(Criterion::order("fitted-order", &fit, policy.fd_order));
        r.fitted_order = Some(fit);
    } else {
        r = r.criterion(Criterion::at_most("pointwise-residual", top.residual, 1e-2));
    }
    r.ladder = ladder;
    Ok(r.finish())
}

/// `(n+1)|Ω|` in closed form for Euclidean caps.
fn cap_volume_closed_form(scn: &Scenario, n: usize) -> Option<f64> {
    match scn.surface {
        SurfaceSpec::SphereCap { r, theta } => Some(match n {
            2 => {
                let h = r * (1.0 - theta.cos());
                3.0 * PI * h * h * (3.0 * r - h) / 3.0
            }
            _ => 2.0 * r * r * (theta - theta.sin() * theta.cos()),
        }),
        SurfaceSpec::ClosedSphere { r } if scn.is_isotropic() => Some(match n {
            2 => 4.0 * PI * r.powi(3),
            _ => 2.0 * PI * r * r,
        }),
        _ => None,
    }
}

/// Heintze–Karcher: `∫ q/H₁ ≥ ∫⟨X,ν⟩ = (n+1)|Ω|`.
pub fn heintze_karcher(scn: &Scenario, levels: &[u32], policy: &TolerancePolicy) -> Result<CheckReport> {
    let requested = sorted_levels(levels)?;
    let eval = evaluation_levels(levels)?;
    let surfaces = build_all(scn, &eval)?;
    let sides = |cs: &CapillarySurface| -> Result<(f64, f64, f64)> {
        let h1 = cs.interior.iter().map(|s| s.h(1)).fold(f64::INFINITY, f64::min);
        if !(h1 > 0.0) {
            return Err(Error::Convexity(format!(
                "min H₁ = {h1:.3e}; the surface is not mean convex"
            )));
        }
        let d = cs.surface.dim();
        let oracle = d as f64 * cs.integrate_with(|s| s.geom.x[d - 1] * s.geom.nu[d - 1])?;
        Ok((
            cs.integrate_with(|s| s.q / s.h(1))?,
            cs.integrate_with(|s| s.support)?,
            oracle,
        ))
    };
    let values = surfaces.iter().map(sides).collect::<Result<Vec<_>>>()?;
    let (lhs, rhs, oracle) = *values.last().expect("nonempty");
    let gap = (lhs - rhs) / rhs;
    let oracle_gap = (oracle - rhs) / rhs;
    // Both the gap and the oracle discrepancy carry their own quadrature error.
    let (estimate, oracle_estimate) = match values.len() {
        1 => (0.0, 0.0),
        m => {
            let (a, b, o) = values[m - 2];
            (((a - b) / b - gap).abs(), ((o - b) / b - oracle_gap).abs())
        }
    };
    let tol = policy.identity_tolerance(estimate);
    let oracle_tol = policy.identity_tolerance(oracle_estimate);
    let cs = surfaces.last().expect("nonempty");
    let mut r = header("heintze-karcher", scn, cs).sides(lhs, rhs, rhs.abs());
    r = r
        .criterion(Criterion::at_least("gap", gap, -tol))
        .criterion(Criterion::at_most("volume-oracle", oracle_gap.abs(), oracle_tol))
        .metric("gap", gap)
        .metric("volume-oracle", oracle)
        .metric("estimate", estimate)
        .metric("tolerance", tol);
    if scn.is_wulff() {
        r = r.criterion(Criterion::at_most("equality", gap.abs(), policy.equality));
    } else if matches!(scn.surface, SurfaceSpec::PerturbedCapillary { .. }) {
        r = r.criterion(Criterion::at_least("strict-gap", gap, STRICT_GAP));
    }
    // The gap has no closed form off Wulff shapes, so the ladder measures
    // each level against the finest one.
    for (l, &(a, b, _)) in eval.iter().zip(&values) {
        if requested.contains(l) {
            r.ladder.push(LadderRow {
                level: *l,
                h: level_spacing(*l),
                lhs: a,
                rhs: b,
                residual: ((a - b) / b - gap).abs(),
            });
        }
    }
    if r.ladder.len() >= 4 {
        let coarse = &r.ladder[..r.ladder.len() - 1];
        let errors: Vec<f64> = coarse.iter().map(|row| row.residual).collect();
        let fit = fit_errors(&errors, &spacings(&requested[..coarse.len()]), scn.ladder_floor())?;
        r = r.criterion(Criterion::order("fitted-order", &fit, policy.quadrature_order));
        r.fitted_order = Some(fit);
    }
    if let Some(exact) = cap_volume_closed_form(scn, cs.n()) {
        r = r
            .criterion(Criterion::at_most(
                "closed-form-lhs",
                (lhs - exact).abs() / exact,
                policy.equality,
            ))
            .criterion(Criterion::at_most(
                "closed-form-rhs",
                (rhs - exact).abs() / exact,
                policy.equality,
            ))
            .metric("closed-form", exact);
    }
    Ok(r.finish())
}

/// `ū` is constant exactly on capillary Wulff shapes.
pub fn support_constancy(scn: &Scenario, level: u32) -> Result<CheckReport> {
    let cs = scn.build(level)?;
    let stats = cs.support_stats();
    let spread = stats.relative_spread();
    let mut r = header("support-constancy", scn, &cs).sides(stats.stdev, 0.0, stats.mean.abs());
    r = r
        .criterion(Criterion::at_least("positive-support", stats.min, 0.0))
        .metric("mean", stats.mean)
        .metric("min", stats.min)
        .metric("max", stats.max);
    if scn.has_constant_support() {
        r = r.criterion(Criterion::at_most("relative-spread", spread, 1e-8));
        if let Some(r0) = scn.radius() {
            r = r.criterion(Criterion::at_most("mean-radius", (stats.mean - r0).abs() / r0, 1e-8));
        }
    } else if let SurfaceSpec::PerturbedCapillary { eps, .. } = scn.surface {
        if eps.abs() >= 0.02 {
            r = r.criterion(Criterion::at_least("relative-spread", spread, SPREAD_WITNESS));
        }
    }
    Ok(r.finish())
}

/// The capillary boundary condition `⟨Φ(ν), −E_{n+1}⟩ = ω₀` and `X_{n+1} = 0`.
pub fn boundary_condition(scn: &Scenario, level: u32) -> Result<CheckReport> {
    if scn.is_closed() {
        return domain("boundary condition needs a surface with boundary");
    }
    let cs = scn.build(level)?;
    let angle = cs.boundary_condition_residual();
    let height = cs.boundary_height_residual();
    Ok(header("boundary-condition", scn, &cs)
        .sides(angle, 0.0, 1.0)
        .criterion(Criterion::at_most("contact-angle", angle, 1e-9))
        .criterion(Criterion::at_most("boundary-height", height, 1e-9))
        .finish())
}

/// Area of the unit `π/3` cap and of its boundary, and of the closed unit
/// sphere, against closed forms.
pub fn quadrature_area(dim: usize, levels: &[u32], policy: &TolerancePolicy) -> Result<CheckReport> {
    let levels = sorted_levels(levels)?;
    let theta = PI / 3.0;
    let (area, length, sphere) = match dim {
        3 => (2.0 * PI * (1.0 - theta.cos()), 2.0 * PI * theta.sin(), 4.0 * PI),
        2 => (2.0 * theta, 2.0, 2.0 * PI),
        d => return domain(format!("quadrature check needs ambient dimension 2 or 3, got {d}")),
    };
    let mut rows = Vec::new();
    for &l in &levels {
        let cap = Hypersurface::build(std::sync::Arc::new(cut_sphere(dim, theta)?), l)?;
        let closed = Hypersurface::build(std::sync::Arc::new(SupportSurface::sphere(dim, 1.0)?), l)?;
        rows.push((l, cap.area(), cap.boundary_measure(), closed.area()));
    }
    let h = spacings(&levels);
    let top = *rows.last().expect("nonempty");
    let mut r = CheckReport::new("quadrature-area").sides(top.1, area, area);
    r.scenario = Some("unit-cap-60".into());
    r.level = Some(top.0);
    r.ladder = rows
        .iter()
        .map(|&(l, a, _, _)| LadderRow {
            level: l,
            h: level_spacing(l),
            lhs: a,
            rhs: area,
            residual: (a - area).abs() / area,
        })
        .collect();
    r = r
        .criterion(Criterion::at_most("area", (top.1 - area).abs() / area, policy.floor))
        .criterion(Criterion::at_most(
            "boundary-length",
            (top.2 - length).abs() / length,
            policy.floor,
        ))
        .criterion(Criterion::at_most(
            "sphere-area",
            (top.3 - sphere).abs() / sphere,
            policy.floor,
        ));
    if levels.len() >= 3 {
        let fa = convergence_fit(&rows.iter().map(|x| x.1).collect::<Vec<_>>(), area, &h, ANALYTIC_FLOOR)?;
        let fb = convergence_fit(
            &rows.iter().map(|x| x.2).collect::<Vec<_>>(),
            length,
            &h,
            ANALYTIC_FLOOR,
        )?;
        let fs = convergence_fit(
            &rows.iter().map(|x| x.3).collect::<Vec<_>>(),
            sphere,
            &h,
            ANALYTIC_FLOOR,
        )?;
        r = r
            .criterion(Criterion::order("area-order", &fa, policy.quadrature_order))
            .criterion(Criterion::order("boundary-order", &fb, policy.quadrature_order))
            .criterion(Criterion::order("sphere-order", &fs, policy.quadrature_order));
        r.fitted_order = Some(fa);
    }
    Ok(r.finish())
}

/// Unit sphere cut at contact angle `theta`: centre `−cos θ E`.
fn cut_sphere(dim: usize, theta: f64) -> Result<SupportSurface> {
    let center = vertical(dim) * (-theta.cos());
    SupportSurface::new(MinkowskiNorm::isotropic(dim, 1.0)?, 1.0, center, true)
}

/// Finite-difference principal curvatures of a radial-graph ellipsoid against
/// the exact ones at the same normal.
pub fn curvature_convergence(dim: usize, levels: &[u32], policy: &TolerancePolicy) -> Result<CheckReport> {
    let levels = sorted_levels(levels)?;
    let semi_axes: Vec<f64> = match dim {
        3 => vec![1.2, 1.0, 0.8],
        2 => vec![1.3, 0.9],
        d => return domain(format!("curvature check needs ambient dimension 2 or 3, got {d}")),
    };
    let exact = SupportSurface::ellipsoid(&semi_axes, Vector::zeros(dim))?;
    let mut ladder = Vec::new();
    let mut position = 0.0f64;
    for &l in &levels {
        let step = 0.1 * level_spacing(l);
        let model = RadialGraph::new(
            dim,
            RadialProfile::Ellipsoid {
                semi_axes: semi_axes.clone(),
            },
            step,
        )?;
        let mesh = Hypersurface::build(std::sync::Arc::new(model), l)?;
        let rows = par::try_map(&mesh.interior, |_, node| {
            let g = &node.geom;
            let e = exact.geometry(&g.nu)?;
            let mut a: Vec<f64> = g.dnu.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
            let mut b: Vec<f64> = e.dnu.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            let err = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            let size = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
            Ok((err, size, (&g.x - &e.x).norm()))
        })?;
        let err = rows.iter().map(|r| r.0).fold(0.0, f64::max);
        let size = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        position = position.max(rows.iter().map(|r| r.2).fold(0.0, f64::max));
        ladder.push(LadderRow {
            level: l,
            h: level_spacing(l),
            lhs: err,
            rhs: size,
            residual: err / size,
        });
    }
    let top = *ladder.last().expect("nonempty");
    let mut r = CheckReport::new("curvature-convergence").sides(top.lhs, 0.0, top.rhs);
    r.scenario = Some("radial-ellipsoid".into());
    r.level = Some(top.level);
    r = r.criterion(Criterion::at_most("position", position, 1e-9));
    if ladder.len() >= 3 {
        let errors: Vec<f64> = ladder.iter().map(|x| x.residual).collect();
        let fit = fit_errors(&errors, &spacings(&levels), FD_FLOOR)?;
        r = r.criterion(Criterion::order("fitted-order", &fit, policy.fd_order));
        r.fitted_order = Some(fit);
    } else {
        r = r.criterion(Criterion::at_most("relative-error", top.residual, 1e-3));
    }
    r.ladder = ladder;
    Ok(r.finish())
}

/// `F⁰(Φ(z)) = 1` and `⟨Φ(z), z⟩ = F(z)`: the Cahn–Hoffman map lands on the
/// unit Wulff shape.
pub fn wulff_duality(scn: &Scenario, count: usize) -> Result<CheckReport> {
    let norm = scn.norm()?;
    let wulff = WulffShapeSpec::new(norm.clone(), 1.0, Vector::zeros(norm.dim()))?;
    let zs = quasi_uniform(norm.dim(), count);
    let rows = par::try_map(&zs, |_, z| {
        let phi = norm.cahn_hoffman(z)?;
        let dual = (norm.dual_norm(&phi)? - 1.0).abs();
        let euler = (phi.dot(z) - norm.eval(z)).abs();
        let level = wulff.level_defect(&phi)?;
        Ok((dual, euler, level))
    })?;
    let dual = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let euler = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let level = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let mut r = CheckReport::new("wulff-duality").sides(dual, 0.0, 1.0);
    r.scenario = Some(scn.name.clone());
    r.norm = Some(norm.describe());
    Ok(r.criterion(Criterion::at_most("dual-norm", dual, 1e-9))
        .criterion(Criterion::at_most("euler", euler, 1e-12))
        .criterion(Criterion::at_most("level-set", level, 1e-9))
        .metric("samples", count as f64)
        .finish())
}

/// A random admissible norm in dimension 3: a random ellipsoid or a small
/// harmonic perturbation of the round norm.
fn random_norm(rng: &mut ChaCha8Rng, i: usize) -> Result<MinkowskiNorm> {
    if i % 2 == 0 {
        let a = Matrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
        MinkowskiNorm::ellipsoid(a.transpose() * a + Matrix::identity(3, 3) * 0.3)
    } else {
        let mode = HARMONIC_MODES_3D[rng.random_range(0..HARMONIC_MODES_3D.len())];
        let mut eps = rng.random_range(0.02..0.2);
        loop {
            match MinkowskiNorm::harmonic(3, eps, mode) {
                Ok(n) => return Ok(n),
                Err(Error::NonAdmissibleNorm(_)) if eps > 1e-3 => eps *= 0.5,
                Err(e) => return Err(e),
            }
        }
    }
}

/// `F(z) + ω₀⟨z, E^F⟩ > 0` for random norms, admissible `ω₀` and directions.
pub fn positivity(seed: u64, pairs: usize, samples: usize) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut worst_ratio = f64::INFINITY;
    for i in 0..pairs {
        let norm = random_norm(&mut rng, i)?;
        let (lo, hi) = crate::capillary::admissible_interval(&norm);
        let omega0 = lo + (hi - lo) * rng.random_range(0.01..0.99);
        let ctx = CapillaryContext::new(norm, omega0)?;
        for _ in 0..samples {
            let z = random_unit(&mut rng, 3);
            let q = ctx.denominator(&z);
            worst = worst.min(q);
            worst_ratio = worst_ratio.min(q / ctx.norm.eval(&z));
        }
    }
    let mut r = CheckReport::new("positivity").sides(worst, 0.0, 1.0);
    r.scenario = Some(format!("random-{pairs}x{samples}"));
    Ok(
        r.criterion(Criterion::at_least("min-denominator", worst, f64::MIN_POSITIVE))
            .metric("min-ratio", worst_ratio)
            .metric("seed", seed as f64)
            .finish(),
    )
}
