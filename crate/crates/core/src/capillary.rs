//! Capillary data in the half-space `x_{n+1} > 0`: the vector `E^F`, the
//! capillary support function `ū`, the field `ξ`, and the capillary Wulff
//! and perturbed test surfaces.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::norm::MinkowskiNorm;
use crate::par;
use crate::sphere::{quasi_uniform, vertical, Vector};
use crate::surface::{
    curvature_at, CurvaturePoint, Geometry, Hypersurface, PerturbedSurface, PsiMode, SupportSurface, SurfaceModel,
};

/// Open interval `(−F(E_{n+1}), F(−E_{n+1}))` of admissible `ω₀`.
pub fn admissible_interval(norm: &MinkowskiNorm) -> (f64, f64) {
    let e = vertical(norm.dim());
    (-norm.eval(&e), norm.eval(&(-&e)))
}

/// `E^F`: `Φ(E)/F(E)` for `ω₀ < 0`, `−Φ(−E)/F(−E)` for `ω₀ > 0`, and `E`
/// itself for `ω₀ = 0`. In every case `⟨E^F, E⟩ = 1`, so `E^F − E` is horizontal;
/// a claim that the inner product vanishes is incompatible with this definition.
pub fn e_f_vector(norm: &MinkowskiNorm, omega0: f64) -> Result<Vector> {
    let (lo, hi) = admissible_interval(norm);
    if !(omega0 > lo && omega0 < hi) {
        return domain(format!("ω₀ = {omega0} outside the admissible interval ({lo}, {hi})"));
    }
    let e = vertical(norm.dim());
    if omega0 < 0.0 {
        Ok(norm.cahn_hoffman(&e)? / norm.eval(&e))
    } else if omega0 > 0.0 {
        let m = -&e;
        Ok(-norm.cahn_hoffman(&m)? / norm.eval(&m))
    } else {
        Ok(e)
    }
}

#[derive(Debug, Clone)]
pub struct CapillaryContext {
    pub norm: MinkowskiNorm,
    pub omega0: f64,
    pub e_f: Vector,
}

impl CapillaryContext {
    pub fn new(norm: MinkowskiNorm, omega0: f64) -> Result<Self> {
        let e_f = e_f_vector(&norm, omega0)?;
        Ok(Self { norm, omega0, e_f })
    }

    /// Context for closed surfaces: every `ω₀` term vanishes.
    pub fn closed(norm: MinkowskiNorm) -> Self {
        let e_f = vertical(norm.dim());
        Self { norm, omega0: 0.0, e_f }
    }

    /// `F(z) + ω₀⟨z, E^F⟩`.
    pub fn denominator(&self, z: &Vector) -> f64 {
        self.norm.eval(z) + self.omega0 * z.dot(&self.e_f)
    }

    /// Smallest sampled value of `F(z) + ω₀⟨z, E^F⟩` over `count` quasi-uniform unit vectors.
    pub fn min_denominator(&self, count: usize) -> f64 {
        quasi_uniform(self.norm.dim(), count)
            .iter()
            .map(|z| self.denominator(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn describe(&self) -> String {
        format!("omega0={}", self.omega0)
    }
}

/// Everything the identity checks need at one point of a surface.
#[derive(Debug, Clone)]
pub struct PointState {
    pub geom: Geometry,
    pub curv: CurvaturePoint,
    pub f_nu: f64,
    /// `ν_F = Φ(ν)`.
    pub nu_f: Vector,
    /// `F(ν) + ω₀⟨ν, E^F⟩`.
    pub q: f64,
    /// `⟨X, ν⟩`.
    pub support: f64,
    /// `ū = ⟨X,ν⟩ / q`.
    pub u_bar: f64,
    /// `ξ` in frame coordinates.
    pub xi: Vector,
    /// `∇ū = q⁻² dν(ξ)` in frame coordinates.
    pub grad_u: Vector,
}

impl PointState {
    pub fn evaluate(ctx: &CapillaryContext, geom: Geometry) -> Result<Self> {
        let curv = curvature_at(&ctx.norm, &geom)?;
        let nu = &geom.nu;
        let f_nu = ctx.norm.eval(nu);
        let nu_f = ctx.norm.gradient(nu);
        let q = f_nu + ctx.omega0 * nu.dot(&ctx.e_f);
        if !(q > 0.0) {
            return Err(Error::InvariantViolation(format!(
                "F(ν) + ω₀⟨ν,E^F⟩ = {q:.3e} is not positive"
            )));
        }
        let x = &geom.x;
        let support = x.dot(nu);
        let xt = geom.tangential(x);
        let et = geom.tangential(&ctx.e_f);
        let xi_amb = x * f_nu - &nu_f * support + xt * (ctx.omega0 * ctx.e_f.dot(nu)) - et * (ctx.omega0 * support);
        let scale = x.norm() * f_nu + 1.0;
        let normal_part = xi_amb.dot(nu);
        if normal_part.abs() > 1e-10 * scale {
            return Err(Error::Assembly(format!("ξ has normal component {normal_part:.3e}")));
        }
        let xi = geom.coords(&xi_amb);
        let grad_u = &geom.dnu * &xi / (q * q);
        Ok(Self {
            u_bar: support / q,
            geom,
            curv,
            f_nu,
            nu_f,
            q,
            support,
            xi,
            grad_u,
        })
    }

    pub fn xi_ambient(&self) -> Vector {
        self.geom.ambient(&self.xi)
    }

    pub fn h(&self, k: usize) -> f64 {
        self.curv.sym.h(k)
    }

    /// `P_k(ξ)` in frame coordinates.
    pub fn p_xi(&self, k: usize) -> Vector {
        &self.curv.p[k] * &self.xi
    }
}

/// Summary statistics of `ū` over the interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportStats {
    pub min: f64,
    pub max: f64,
    /// Area-weighted mean.
    pub mean: f64,
    /// Area-weighted standard deviation.
    pub stdev: f64,
}

impl SupportStats {
    pub fn relative_spread(&self) -> f64 {
        self.stdev / self.mean.abs()
    }
}

/// A surface with its capillary context and evaluated node states.
#[derive(Debug, Clone)]
pub struct CapillarySurface {
    pub surface: Hypersurface,
    pub context: CapillaryContext,
    pub interior: Vec<PointState>,
    pub boundary: Vec<PointState>,
}

impl CapillarySurface {
    pub fn new(surface: Hypersurface, context: CapillaryContext) -> Result<Self> {
        if surface.dim() != context.norm.dim() {
            return domain("surface and norm dimensions differ");
        }
        let interior = par::try_map(&surface.interior, |_, n| PointState::evaluate(&context, n.geom.clone()))?;
        let boundary = par::try_map(&surface.boundary, |_, n| PointState::evaluate(&context, n.geom.clone()))?;
        Ok(Self {
            surface,
            context,
            interior,
            boundary,
        })
    }

    /// Full point state at an arbitrary parameter point, for finite differences.
    pub fn state_at(&self, z: &Vector) -> Result<PointState> {
        PointState::evaluate(&self.context, self.surface.model.geometry(z)?)
    }

    pub fn n(&self) -> usize {
        self.surface.n()
    }

    pub fn is_closed(&self) -> bool {
        self.surface.is_closed()
    }

    pub fn level(&self) -> u32 {
        self.surface.level
    }

    pub fn model(&self) -> &Arc<dyn SurfaceModel> {
        &self.surface.model
    }

    pub fn describe(&self) -> String {
        self.surface.describe()
    }

    pub fn integrate_with(&self, f: impl Fn(&PointState) -> f64 + Sync + Send) -> Result<f64> {
        let values = par::map(&self.interior, f);
        self.surface.integrate(&values)
    }

    pub fn boundary_integrate_with(&self, f: impl Fn(&PointState, &Vector) -> f64 + Sync + Send) -> Result<f64> {
        let pairs: Vec<(&PointState, &Vector)> = self
            .boundary
            .iter()
            .zip(self.surface.boundary.iter().map(|b| &b.mu))
            .collect();
        let values = par::map(&pairs, |(s, mu)| f(s, mu));
        self.surface.boundary_integrate(&values)
    }

    /// Per-node `ū`.
    pub fn capillary_support(&self) -> Vec<f64> {
        self.interior.iter().map(|s| s.u_bar).collect()
    }

    pub fn support_stats(&self) -> SupportStats {
        let w = self.surface.weights();
        let area = par::sum(w.iter().copied());
        let u = self.capillary_support();
        let mean = par::sum(w.iter().zip(&u).map(|(w, u)| w * u)) / area;
        let var = par::sum(w.iter().zip(&u).map(|(w, u)| w * (u - mean).powi(2))) / area;
        SupportStats {
            min: u.iter().copied().fold(f64::INFINITY, f64::min),
            max: u.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean,
            stdev: var.max(0.0).sqrt(),
        }
    }

    /// `max |⟨Φ(ν), −E_{n+1}⟩ − ω₀|` over the boundary nodes.
    pub fn boundary_condition_residual(&self) -> f64 {
        let e = vertical(self.surface.dim());
        self.boundary
            .iter()
            .map(|s| (-s.nu_f.dot(&e) - self.context.omega0).abs())
            .fold(0.0, f64::max)
    }

    /// `max |X_{n+1}|` over the boundary nodes.
    pub fn boundary_height_residual(&self) -> f64 {
        let d = self.surface.dim();
        self.boundary.iter().map(|s| s.geom.x[d - 1].abs()).fold(0.0, f64::max)
    }

    /// Smallest anisotropic principal curvature over all nodes.
    pub fn min_kappa(&self) -> f64 {
        self.interior
            .iter()
            .chain(&self.boundary)
            .flat_map(|s| s.curv.kappa.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `|ξ|` over the interior nodes.
    pub fn max_xi(&self) -> f64 {
        self.interior.iter().map(|s| s.xi.norm()).fold(0.0, f64::max)
    }
}

/// The capillary Wulff shape `X(z) = r₀Φ(z) + r₀ω₀E^F` cut by the hyperplane.
pub fn capillary_wulff_model(norm: &MinkowskiNorm, r0: f64, omega0: f64) -> Result<SupportSurface> {
    let e_f = e_f_vector(norm, omega0)?;
    SupportSurface::new(norm.clone(), r0, e_f * (r0 * omega0), true)
}

pub fn capillary_wulff(norm: &MinkowskiNorm, r0: f64, omega0: f64, level: u32) -> Result<CapillarySurface> {
    let model = capillary_wulff_model(norm, r0, omega0)?;
    let surface = Hypersurface::build(Arc::new(model), level)?;
    CapillarySurface::new(surface, CapillaryContext::new(norm.clone(), omega0)?)
}

/// Euclidean spherical cap of radius `r` meeting the plane at contact angle `theta`.
pub fn sphere_cap(dim: usize, r: f64, theta: f64, level: u32) -> Result<CapillarySurface> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return domain("contact angle must lie in (0, π)");
    }
    capillary_wulff(&MinkowskiNorm::isotropic(dim, 1.0)?, r, -theta.cos(), level)
}

/// The capillary Wulff shape pushed along `ν_F` by `ε ψ`; rejects `ε` that
/// destroys strict convexity.
pub fn perturbed_capillary(
    norm: &MinkowskiNorm,
    r0: f64,
    omega0: f64,
    eps: f64,
    mode: PsiMode,
    level: u32,
) -> Result<CapillarySurface> {
    let base = capillary_wulff_model(norm, r0, omega0)?;
    let model = PerturbedSurface::new(base, norm.clone(), eps, mode)?;
    let surface = Hypersurface::build(Arc::new(model), level)?;
    let cap = CapillarySurface::new(surface, CapillaryContext::new(norm.clone(), omega0)?)?;
    let kmin = cap.min_kappa();
    if !(kmin > 0.0) {
        return Err(Error::Convexity(format!(
            "perturbation ε = {eps} leaves min κ^F = {kmin:.3e}; the surface is not strictly convex"
        )));
    }
    Ok(cap)
}

/// A closed surface with the closed-surface context for `norm`.
pub fn closed_surface(model: Arc<dyn SurfaceModel>, norm: &MinkowskiNorm, level: u32) -> Result<CapillarySurface> {
    let surface = Hypersurface::build(model, level)?;
    if !surface.is_closed() {
        return domain("closed_surface needs a model without boundary");
    }
    CapillarySurface::new(surface, CapillaryContext::closed(norm.clone()))
}
