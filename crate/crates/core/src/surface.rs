//! Parametrized hypersurfaces over (part of) the sphere, their quadrature
//! meshes, and per-node anisotropic curvature.
//!
//! Every model is parametrized by a point `z ∈ S^n`. Gauss-map patches have
//! `ν = z` and an exact shape operator; the other models differentiate their
//! analytic first derivatives by central differences in a gnomonic chart.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::norm::MinkowskiNorm;
use crate::par;
use crate::quadrature::{composite_gauss_legendre, gauss_legendre_on, periodic_trapezoid, weighted_sum};
use crate::sphere::{
    circle_dt, circle_point, polar_dphi, polar_dt, polar_point, tangent_basis, vertical, GnomonicChart, Matrix, Vector,
};
use crate::symmetric::{check_newton_symmetry, newton_operators, SymmetricFunctions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamKind {
    GaussMapPatch,
    RadialGraph,
    PerturbedCapillary,
}

/// Largest tolerated asymmetry of the finite-difference second fundamental form.
pub const MAX_ASYMMETRY: f64 = 1e-4;
/// Default inner step for finite-difference second derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Local geometry at one parameter point.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub z: Vector,
    pub x: Vector,
    pub nu: Vector,
    /// Orthonormal basis of the tangent space `TΣ = ν^⊥`.
    pub frame: Vec<Vector>,
    /// Matrix of `dν` in `frame`, symmetrized.
    pub dnu: Matrix,
    /// Relative asymmetry of `dν` before symmetrization.
    pub asymmetry: f64,
    /// Orthonormal basis of `T_z S^n` used for the parameter.
    pub sphere_basis: Vec<Vector>,
    /// `dX(t_i)` for the vectors `t_i` of `sphere_basis`.
    pub tangents: Vec<Vector>,
}

impl Geometry {
    /// Area element relative to the round metric of the parameter sphere.
    pub fn area_factor(&self) -> f64 {
        let n = self.tangents.len();
        let g = Matrix::from_fn(n, n, |i, j| self.tangents[i].dot(&self.tangents[j]));
        g.determinant().abs().sqrt()
    }

    /// `dX(v)` for a vector `v` tangent to the sphere at `z`.
    pub fn push_forward(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.x.len());
        for (t, xt) in self.sphere_basis.iter().zip(&self.tangents) {
            out += xt * t.dot(v);
        }
        out
    }

    /// Coordinates of an ambient vector in `frame`.
    pub fn coords(&self, v: &Vector) -> Vector {
        Vector::from_iterator(self.frame.len(), self.frame.iter().map(|e| e.dot(v)))
    }

    /// Ambient vector from `frame` coordinates.
    pub fn ambient(&self, c: &Vector) -> Vector {
        let mut out = Vector::zeros(self.x.len());
        for (e, ci) in self.frame.iter().zip(c.iter()) {
            out += e * *ci;
        }
        out
    }

    /// Tangential part `v − ⟨v,ν⟩ν`.
    pub fn tangential(&self, v: &Vector) -> Vector {
        v - &self.nu * v.dot(&self.nu)
    }
}

pub trait SurfaceModel: Send + Sync + fmt::Debug {
    /// Ambient dimension `n + 1`.
    fn dim(&self) -> usize;
    fn kind(&self) -> ParamKind;
    fn describe(&self) -> String;
    fn position(&self, z: &Vector) -> Vector;
    /// `dX_z(v)` for `v` tangent to the sphere at `z`.
    fn differential(&self, z: &Vector, v: &Vector) -> Vector;
    /// Height `⟨X(z), E_{n+1}⟩` and its sphere gradient when the parameter
    /// domain is the part of the sphere where it is nonnegative; `None` for
    /// closed surfaces.
    fn domain_height(&self, z: &Vector) -> Option<(f64, Vector)>;
    /// Step for finite-difference second derivatives.
    fn fd_step(&self) -> f64 {
        DEFAULT_FD_STEP
    }

    fn geometry(&self, z: &Vector) -> Result<Geometry> {
        fd_geometry(self, z)
    }
}

/// Geometry from analytic first derivatives and central differences of them.
fn fd_geometry<M: SurfaceModel + ?Sized>(model: &M, z: &Vector) -> Result<Geometry> {
    let basis = tangent_basis(z);
    let n = basis.len();
    let chart = GnomonicChart::with_basis(z, basis.clone());
    let tangents_at = |y: &[f64]| -> Vec<Vector> {
        let w = chart.point(y);
        chart.partials(y).iter().map(|v| model.differential(&w, v)).collect()
    };
    let zero = vec![0.0; n];
    let tangents = tangents_at(&zero);
    let x = model.position(z);

    let g = Matrix::from_fn(n, n, |i, j| tangents[i].dot(&tangents[j]));
    let chol = g.clone().cholesky().ok_or_else(|| Error::MeshQuality {
        node: 0,
        asymmetry: f64::NAN,
    })?;
    let c = chol.l().transpose().try_inverse().ok_or_else(|| Error::MeshQuality {
        node: 0,
        asymmetry: f64::NAN,
    })?;
    let mut frame = Vec::with_capacity(n);
    for a in 0..n {
        let mut e = Vector::zeros(x.len());
        for i in 0..n {
            e += &tangents[i] * c[(i, a)];
        }
        frame.push(e);
    }
    let mut nu = z.clone();
    for e in &frame {
        nu -= e * e.dot(&nu);
    }
    // One more pass for orthogonality at machine precision.
    for e in &frame {
        nu -= e * e.dot(&nu);
    }
    nu /= nu.norm();

    let h = model.fd_step();
    let mut second = Matrix::zeros(n, n);
    for j in 0..n {
        let mut yp = zero.clone();
        let mut ym = zero.clone();
        yp[j] = h;
        ym[j] = -h;
        let tp = tangents_at(&yp);
        let tm = tangents_at(&ym);
        for i in 0..n {
            // II_ij = −⟨ν, ∂_j X_i⟩
            second[(i, j)] = -nu.dot(&(&tp[i] - &tm[i])) / (2.0 * h);
        }
    }
    let scale = second.abs().max().max(1e-300);
    let asymmetry = (&second - second.transpose()).abs().max() / scale;
    let second = (&second + second.transpose()) * 0.5;
    let dnu = c.transpose() * second * &c;
    let dnu = (&dnu + dnu.transpose()) * 0.5;
    Ok(Geometry {
        z: z.clone(),
        x,
        nu,
        frame,
        dnu,
        asymmetry,
        sphere_basis: basis,
        tangents,
    })
}

/// The hypersurface with support function `u(z) = r·F_Q(z) + ⟨c, z⟩`,
/// parametrized by its Gauss map: `X(z) = r Φ_Q(z) + c`, `ν = z`.
///
/// With `cut` the surface is restricted to `⟨X, E_{n+1}⟩ ≥ 0`.
#[derive(Debug, Clone)]
pub struct SupportSurface {
    pub shape: MinkowskiNorm,
    pub radius: f64,
    pub center: Vector,
    pub cut: bool,
}

impl SupportSurface {
    pub fn new(shape: MinkowskiNorm, radius: f64, center: Vector, cut: bool) -> Result<Self> {
        if !(radius > 0.0) {
            return domain("support surface radius must be positive");
        }
        if center.len() != shape.dim() {
            return domain("center dimension mismatch");
        }
        Ok(Self {
            shape,
            radius,
            center,
            cut,
        })
    }

    /// Closed origin-centred Euclidean sphere of radius `r`.
    pub fn sphere(dim: usize, r: f64) -> Result<Self> {
        Self::new(MinkowskiNorm::isotropic(dim, 1.0)?, r, Vector::zeros(dim), false)
    }

    /// Closed ellipsoid with the given semi-axes, centred at `center`.
    pub fn ellipsoid(semi_axes: &[f64], center: Vector) -> Result<Self> {
        let diag: Vec<f64> = semi_axes.iter().map(|a| a * a).collect();
        Self::new(MinkowskiNorm::ellipsoid_diag(&diag)?, 1.0, center, false)
    }
}

impl SurfaceModel for SupportSurface {
    fn dim(&self) -> usize {
        self.shape.dim()
    }

    fn kind(&self) -> ParamKind {
        ParamKind::GaussMapPatch
    }

    fn describe(&self) -> String {
        let c: Vec<String> = self.center.iter().map(|v| format!("{v}")).collect();
        format!(
            "support({}, r={}, c=[{}]{})",
            self.shape.describe(),
            self.radius,
            c.join(","),
            if self.cut { ", cut" } else { "" }
        )
    }

    fn position(&self, z: &Vector) -> Vector {
        self.shape.gradient(z) * self.radius + &self.center
    }

    fn differential(&self, z: &Vector, v: &Vector) -> Vector {
        self.shape.hessian(z) * v * self.radius
    }

    fn domain_height(&self, z: &Vector) -> Option<(f64, Vector)> {
        if !self.cut {
            return None;
        }
        let e = vertical(self.dim());
        let h = self.position(z).dot(&e);
        let grad = self.shape.hessian(z) * e * self.radius;
        Some((h, grad))
    }

    fn geometry(&self, z: &Vector) -> Result<Geometry> {
        let basis = tangent_basis(z);
        let a = self.shape.a_f_in_frame(z, &basis) * self.radius;
        let a = (&a + a.transpose()) * 0.5;
        let dnu = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Curvature("singular support Hessian".into()))?;
        let dnu = (&dnu + dnu.transpose()) * 0.5;
        let tangents = basis.iter().map(|t| self.differential(z, t)).collect();
        Ok(Geometry {
            z: z.clone(),
            x: self.position(z),
            nu: z.clone(),
            frame: basis.clone(),
            dnu,
            asymmetry: 0.0,
            sphere_basis: basis,
            tangents,
        })
    }
}

/// Radial profile `ρ` of a star-shaped closed surface `X = ρ(z) z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum RadialProfile {
    Constant {
        r: f64,
    },
    /// `ρ(z) = (zᵀ B z)^{-1/2}` with `B = diag(1/a_i²)`: the ellipsoid with semi-axes `a`.
    Ellipsoid {
        semi_axes: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct RadialGraph {
    pub dim: usize,
    pub profile: RadialProfile,
    pub step: f64,
}

impl RadialGraph {
    pub fn new(dim: usize, profile: RadialProfile, step: f64) -> Result<Self> {
        match &profile {
            RadialProfile::Constant { r } if !(*r > 0.0) => return domain("radius must be positive"),
            RadialProfile::Ellipsoid { semi_axes }
                if semi_axes.len() != dim || semi_axes.iter().any(|a| !(*a > 0.0)) =>
            {
                return domain("ellipsoid semi-axes must be positive, one per coordinate")
            }
            _ => {}
        }
        if !(step > 0.0) {
            return domain("finite-difference step must be positive");
        }
        Ok(Self { dim, profile, step })
    }

    fn rho_and_grad(&self, z: &Vector) -> (f64, Vector) {
        match &self.profile {
            RadialProfile::Constant { r } => (*r, Vector::zeros(self.dim)),
            RadialProfile::Ellipsoid { semi_axes } => {
                let bz = Vector::from_fn(self.dim, |i, _| z[i] / (semi_axes[i] * semi_axes[i]));
                let q = z.dot(&bz);
                (q.powf(-0.5), -bz * q.powf(-1.5))
            }
        }
    }
}

impl SurfaceModel for RadialGraph {
    fn dim(&self) -> usize {
        self.dim
    }

    fn kind(&self) -> ParamKind {
        ParamKind::RadialGraph
    }

    fn describe(&self) -> String {
        match &self.profile {
            RadialProfile::Constant { r } => format!("radial-sphere(r={r})"),
            RadialProfile::Ellipsoid { semi_axes } => format!("radial-ellipsoid(axes={semi_axes:?})"),
        }
    }

    fn position(&self, z: &Vector) -> Vector {
        z * self.rho_and_grad(z).0
    }

    fn differential(&self, z: &Vector, v: &Vector) -> Vector {
        let (rho, grad) = self.rho_and_grad(z);
        z * grad.dot(v) + v * rho
    }

    fn domain_height(&self, _z: &Vector) -> Option<(f64, Vector)> {
        None
    }

    fn fd_step(&self) -> f64 {
        self.step
    }
}

/// Profile of a boundary-preserving bump on a cut support surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiMode {
    /// `ψ = (h/h_max)² z_1`: quadratic in the height, modulated by the azimuth.
    CosAzimuth,
    /// `ψ = (h/h_max)²`.
    Radial,
}

impl PsiMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cos-azimuth" => Ok(PsiMode::CosAzimuth),
            "radial" => Ok(PsiMode::Radial),
            other => domain(format!("unknown psi mode '{other}' (valid: cos-azimuth, radial)")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PsiMode::CosAzimuth => "cos-azimuth",
            PsiMode::Radial => "radial",
        }
    }
}

/// `X_ε(z) = X(z) + ε ψ(z) Φ_F(z)` over a cut support surface. Since `ψ`
/// and `dψ` vanish where the height vanishes, the boundary and the normal
/// along it are those of the base.
#[derive(Debug, Clone)]
pub struct PerturbedSurface {
    pub base: SupportSurface,
    pub norm: MinkowskiNorm,
    pub eps: f64,
    pub mode: PsiMode,
    pub h_max: f64,
    pub step: f64,
}

impl PerturbedSurface {
    pub fn new(base: SupportSurface, norm: MinkowskiNorm, eps: f64, mode: PsiMode) -> Result<Self> {
        if !base.cut {
            return domain("perturbations need a cut base surface");
        }
        let e = vertical(base.dim());
        let h_max = base.position(&e).dot(&e);
        if !(h_max > 0.0) {
            return Err(Error::Construction(
                "base surface does not rise above the support plane".into(),
            ));
        }
        Ok(Self {
            base,
            norm,
            eps,
            mode,
            h_max,
            step: DEFAULT_FD_STEP,
        })
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    fn psi(&self, z: &Vector) -> (f64, Vector) {
        let (h, dh) = self.base.domain_height(z).expect("cut base");
        let s = h / self.h_max;
        let ds = dh / self.h_max;
        match self.mode {
            PsiMode::Radial => (s * s, ds * (2.0 * s)),
            PsiMode::CosAzimuth => {
                let mut e1 = Vector::zeros(z.len());
                e1[0] = 1.0;
                (s * s * z[0], ds * (2.0 * s * z[0]) + e1 * (s * s))
            }
        }
    }
}

impl SurfaceModel for PerturbedSurface {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn kind(&self) -> ParamKind {
        ParamKind::PerturbedCapillary
    }

    fn describe(&self) -> String {
        format!(
            "perturbed({}, eps={}, psi={})",
            self.base.describe(),
            self.eps,
            self.mode.name()
        )
    }

    fn position(&self, z: &Vector) -> Vector {
        let (psi, _) = self.psi(z);
        self.base.position(z) + self.norm.gradient(z) * (self.eps * psi)
    }

    fn differential(&self, z: &Vector, v: &Vector) -> Vector {
        let (psi, dpsi) = self.psi(z);
        self.base.differential(z, v) + (self.norm.gradient(z) * dpsi.dot(v) + self.norm.hessian(z) * v * psi) * self.eps
    }

    fn domain_height(&self, z: &Vector) -> Option<(f64, Vector)> {
        self.base.domain_height(z)
    }

    fn fd_step(&self) -> f64 {
        self.step
    }

    fn geometry(&self, z: &Vector) -> Result<Geometry> {
        if self.eps == 0.0 {
            return self.base.geometry(z);
        }
        fd_geometry(self, z)
    }
}

/// A quadrature node: geometry plus its weight.
#[derive(Debug, Clone)]
pub struct Node {
    pub geom: Geometry,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct BoundaryNode {
    pub geom: Geometry,
    /// Weight of the boundary line integral (1 for the point boundary at n = 1).
    pub weight: f64,
    /// Outward unit co-normal in `TΣ`.
    pub mu: Vector,
    /// Unit tangent of `∂Σ` (n = 2 only).
    pub tangent: Option<Vector>,
}

/// Boundary root finding tolerance on the meridian angle.
pub const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Hypersurface {
    pub model: Arc<dyn SurfaceModel>,
    pub level: u32,
    pub interior: Vec<Node>,
    pub boundary: Vec<BoundaryNode>,
}

/// Meridian root of the height: bisection to `ROOT_TOL`, then Newton polish.
fn meridian_root(g: impl Fn(f64) -> (f64, f64), lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (g(a).0, g(b).0);
    if !(ga > 0.0 && gb < 0.0) {
        return Err(Error::Construction(format!(
            "height does not change sign along a meridian (h = {ga:.3e} .. {gb:.3e})"
        )));
    }
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        if g(m).0 > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let mut t = 0.5 * (a + b);
    let (h, dh) = g(t);
    if dh != 0.0 {
        let next = t - h / dh;
        if (next - t).abs() <= 2.0 * ROOT_TOL {
            t = next;
        }
    }
    Ok(t)
}

impl Hypersurface {
    /// Builds the quadrature mesh of `model` at refinement level `level`.
    pub fn build(model: Arc<dyn SurfaceModel>, level: u32) -> Result<Self> {
        if !(1..=9).contains(&level) {
            return domain(format!("refinement level {level} outside 1..=9"));
        }
        let closed = model.domain_height(&vertical(model.dim())).is_none();
        match (model.dim(), closed) {
            (3, true) => Self::build_closed_2(model, level),
            (3, false) => Self::build_cap_2(model, level),
            (2, true) => Self::build_closed_1(model, level),
            (2, false) => Self::build_cap_1(model, level),
            (d, _) => domain(format!("surface integrals need ambient dimension 2 or 3, got {d}")),
        }
    }

    fn evaluate_nodes(model: &Arc<dyn SurfaceModel>, params: Vec<(Vector, f64)>) -> Result<Vec<Node>> {
        par::try_map(&params, |i, (z, w)| {
            let geom = model.geometry(z).map_err(|e| node_error(e, i))?;
            if geom.asymmetry > MAX_ASYMMETRY {
                return Err(Error::MeshQuality {
                    node: i,
                    asymmetry: geom.asymmetry,
                });
            }
            let weight = w * geom.area_factor();
            Ok(Node { geom, weight })
        })
    }

    fn build_closed_2(model: Arc<dyn SurfaceModel>, level: u32) -> Result<Self> {
        let nt = 1usize << level;
        let np = 1usize << (level + 1);
        let (ts, wt) = gauss_legendre_on(nt, 0.0, std::f64::consts::PI);
        let (ps, wp) = periodic_trapezoid(np);
        let mut params = Vec::with_capacity(nt * np);
        for (t, w1) in ts.iter().zip(&wt) {
            for (p, w2) in ps.iter().zip(&wp) {
                params.push((polar_point(*t, *p), w1 * w2 * t.sin()));
            }
        }
        let interior = Self::evaluate_nodes(&model, params)?;
        Ok(Self {
            model,
            level,
            interior,
            boundary: vec![],
        })
    }

    fn build_closed_1(model: Arc<dyn SurfaceModel>, level: u32) -> Result<Self> {
        let (ts, ws) = periodic_trapezoid(4usize << level);
        let params = ts.iter().zip(&ws).map(|(t, w)| (circle_point(*t), *w)).collect();
        let interior = Self::evaluate_nodes(&model, params)?;
        Ok(Self {
            model,
            level,
            interior,
            boundary: vec![],
        })
    }

    fn build_cap_2(model: Arc<dyn SurfaceModel>, level: u32) -> Result<Self> {
        let ns = 1usize << level;
        let np = 1usize << (level + 1);
        let (ss, ws) = gauss_legendre_on(ns, 0.0, 1.0);
        let (ps, wp) = periodic_trapezoid(np);
        let height = |t: f64, p: f64| -> (f64, f64, f64) {
            let z = polar_point(t, p);
            let (h, grad) = model.domain_height(&z).expect("cut surface");
            (h, grad.dot(&polar_dt(t, p)), grad.dot(&polar_dphi(t, p)))
        };
        if !(height(0.0, 0.0).0 > 0.0) {
            return Err(Error::Construction(
                "the pole E_{n+1} is not inside the surface domain".into(),
            ));
        }
        let roots: Vec<(f64, f64)> = par::try_map(&ps, |_, &p| {
            let tb = meridian_root(
                |t| {
                    let (h, ht, _) = height(t, p);
                    (h, ht)
                },
                0.0,
                std::f64::consts::PI,
            )?;
            let (_, ht, hp) = height(tb, p);
            Ok((tb, -hp / ht))
        })?;

        let mut params = Vec::with_capacity(ns * np);
        for ((p, w2), (tb, _)) in ps.iter().zip(&wp).zip(&roots) {
            for (s, w1) in ss.iter().zip(&ws) {
                let t = s * tb;
                params.push((polar_point(t, *p), w1 * w2 * tb * t.sin()));
            }
        }
        let interior = Self::evaluate_nodes(&model, params)?;

        let bparams: Vec<(f64, f64, f64, f64)> = ps
            .iter()
            .zip(&wp)
            .zip(&roots)
            .map(|((p, w), (tb, dtb))| (*p, *w, *tb, *dtb))
            .collect();
        let boundary = par::try_map(&bparams, |i, &(p, w, tb, dtb)| {
            let z = polar_point(tb, p);
            let geom = model.geometry(&z).map_err(|e| node_error(e, i))?;
            let along = polar_dt(tb, p) * dtb + polar_dphi(tb, p);
            let d = geom.push_forward(&along);
            let len = d.norm();
            let tangent = d / len;
            let xt = geom.push_forward(&polar_dt(tb, p));
            let mu = &xt - &tangent * xt.dot(&tangent) - &geom.nu * xt.dot(&geom.nu);
            let mu = &mu / mu.norm();
            Ok(BoundaryNode {
                geom,
                weight: w * len,
                mu,
                tangent: Some(tangent),
            })
        })?;
        Ok(Self {
            model,
            level,
            interior,
            boundary,
        })
    }

    fn build_cap_1(model: Arc<dyn SurfaceModel>, level: u32) -> Result<Self> {
        let pi = std::f64::consts::PI;
        let height = |t: f64| -> (f64, f64) {
            let (h, grad) = model.domain_height(&circle_point(t)).expect("cut surface");
            (h, grad.dot(&circle_dt(t)))
        };
        if !(height(0.0).0 > 0.0) {
            return Err(Error::Construction(
                "the pole E_{n+1} is not inside the surface domain".into(),
            ));
        }
        let tr = meridian_root(&height, 0.0, pi)?;
        let tl = -meridian_root(
            |t| {
                let (h, d) = height(-t);
                (h, -d)
            },
            0.0,
            pi,
        )?;
        let panels = 1usize << (level.max(1) - 1);
        let (ts, ws) = composite_gauss_legendre(tl, tr, panels, 4);
        let params = ts.iter().zip(&ws).map(|(t, w)| (circle_point(*t), *w)).collect();
        let interior = Self::evaluate_nodes(&model, params)?;
        let mut boundary = Vec::with_capacity(2);
        for (t, sign) in [(tl, -1.0), (tr, 1.0)] {
            let z = circle_point(t);
            let geom = model.geometry(&z)?;
            let xt = geom.push_forward(&circle_dt(t));
            let mu = &xt * (sign / xt.norm());
            boundary.push(BoundaryNode {
                geom,
                weight: 1.0,
                mu,
                tangent: None,
            });
        }
        Ok(Self {
            model,
            level,
            interior,
            boundary,
        })
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn n(&self) -> usize {
        self.model.dim() - 1
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.interior.iter().map(|n| n.weight).collect()
    }

    pub fn boundary_weights(&self) -> Vec<f64> {
        self.boundary.iter().map(|n| n.weight).collect()
    }

    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        weighted_sum(&self.weights(), values)
    }

    pub fn boundary_integrate(&self, values: &[f64]) -> Result<f64> {
        weighted_sum(&self.boundary_weights(), values)
    }

    pub fn area(&self) -> f64 {
        par::sum(self.interior.iter().map(|n| n.weight))
    }

    pub fn boundary_measure(&self) -> f64 {
        par::sum(self.boundary.iter().map(|n| n.weight))
    }

    pub fn max_asymmetry(&self) -> f64 {
        self.interior
            .iter()
            .map(|n| n.geom.asymmetry)
            .chain(self.boundary.iter().map(|n| n.geom.asymmetry))
            .fold(0.0, f64::max)
    }

    pub fn describe(&self) -> String {
        self.model.describe()
    }
}

fn node_error(e: Error, node: usize) -> Error {
    match e {
        Error::MeshQuality { asymmetry, .. } => Error::MeshQuality { node, asymmetry },
        other => other,
    }
}

/// Anisotropic curvature data at one node.
#[derive(Debug, Clone)]
pub struct CurvaturePoint {
    /// `A_F(ν)` in the node frame.
    pub a_f: Matrix,
    /// `S_F = A_F · dν` in the node frame.
    pub s_f: Matrix,
    /// Anisotropic principal curvatures, ascending.
    pub kappa: Vec<f64>,
    pub sym: SymmetricFunctions,
    /// Newton operators `P_0..P_n` acting on frame coordinates.
    pub p: Vec<Matrix>,
}

/// Residual tolerance on the eigenpairs of `S_F`.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;
/// Tolerance on the symmetry of `dν ∘ P_k`.
pub const NEWTON_SYMMETRY_TOL: f64 = 1e-8;

/// `S_F = A_F(ν) · dν` and its real spectrum via `A_F^{1/2} dν A_F^{1/2}`.
pub fn anisotropic_shape_operator(a_f: &Matrix, dnu: &Matrix) -> Result<(Matrix, Vec<f64>)> {
    let n = a_f.nrows();
    let s = a_f * dnu;
    let eig = SymmetricEigen::new(a_f.clone());
    if eig.eigenvalues.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::NonAdmissibleNorm("A_F is not positive definite".into()));
    }
    let sqrt_d = Matrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_d * eig.eigenvectors.transpose();
    let b = &root * dnu * &root;
    let b = (&b + b.transpose()) * 0.5;
    let beig = SymmetricEigen::new(b);
    let mut pairs: Vec<(f64, Vector)> = (0..n)
        .map(|i| (beig.eigenvalues[i], beig.eigenvectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = s.abs().max().max(1e-300);
    for (k, w) in &pairs {
        let v = &root * w;
        let res = (&s * &v - &v * *k).norm() / (scale * v.norm());
        if !(res <= EIGEN_RESIDUAL_TOL) {
            return Err(Error::Curvature(format!(
                "eigenpair residual {res:.3e} of S_F exceeds {EIGEN_RESIDUAL_TOL:.0e}"
            )));
        }
    }
    Ok((s, pairs.into_iter().map(|p| p.0).collect()))
}

/// Full curvature record at a node for the anisotropy `norm`.
pub fn curvature_at(norm: &MinkowskiNorm, geom: &Geometry) -> Result<CurvaturePoint> {
    let a = norm.a_f_in_frame(&geom.nu, &geom.frame);
    let a_f = (&a + a.transpose()) * 0.5;
    let (s_f, kappa) = anisotropic_shape_operator(&a_f, &geom.dnu)?;
    let sym = SymmetricFunctions::of(&kappa);
    let p = newton_operators(&s_f, &sym.sigma);
    check_newton_symmetry(&geom.dnu, &p, NEWTON_SYMMETRY_TOL)?;
    Ok(CurvaturePoint {
        a_f,
        s_f,
        kappa,
        sym,
        p,
    })
}

/// Curvature at every interior node.
pub fn curvature_field(norm: &MinkowskiNorm, surface: &Hypersurface) -> Result<Vec<CurvaturePoint>> {
    par::try_map(&surface.interior, |_, node| curvature_at(norm, &node.geom))
}

/// Writes one CSV row per interior node: position, normal, `κ^F`, weight.
pub fn write_node_csv<W: Write>(out: &mut W, surface: &Hypersurface, curvature: &[CurvaturePoint]) -> Result<()> {
    let d = surface.dim();
    let n = d - 1;
    let mut header: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
    header.extend((0..d).map(|i| format!("nu{i}")));
    header.extend((0..n).map(|i| format!("kappa{i}")));
    header.push("w".into());
    writeln!(out, "{}", header.join(","))?;
    for (node, c) in surface.interior.iter().zip(curvature) {
        let mut row: Vec<String> = node.geom.x.iter().map(|v| format!("{v:.17e}")).collect();
        row.extend(node.geom.nu.iter().map(|v| format!("{v:.17e}")));
        row.extend(c.kappa.iter().map(|v| format!("{v:.17e}")));
        row.push(format!("{:.17e}", node.weight));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
