//! Minkowski norms given by their support function on the sphere, with the
//! Cahn–Hoffman map, the matrix `A_F`, the dual norm and Wulff shapes.

use std::fmt;
use std::sync::Arc;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::poly::{harmonic_mode, HomogeneousPoly, Monomial};
use crate::sphere::{quasi_uniform, tangent_basis, GnomonicChart, Matrix, Vector};

/// How sphere derivatives of `F` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum DerivativeMode {
    Analytic,
    /// Central differences in a gnomonic chart with step `h`.
    Numeric {
        h: f64,
    },
}

impl Default for DerivativeMode {
    fn default() -> Self {
        DerivativeMode::Analytic
    }
}

pub const DEFAULT_NUMERIC_STEP: f64 = 1e-4;

pub type SphereFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum NormFamily {
    /// `F ≡ c`.
    Isotropic { c: f64 },
    /// `F(x) = sqrt(xᵀ M x)` with `M` symmetric positive definite.
    Ellipsoid { m: Matrix, m_inv: Matrix },
    /// `F = 1 + ε Y` on the sphere, `Y` the restriction of a homogeneous polynomial.
    Harmonic {
        eps: f64,
        mode: HomogeneousPoly,
        label: String,
    },
    /// Arbitrary positive function on the sphere; derivatives are always numeric.
    Custom { label: String, f: SphereFn },
}

impl fmt::Debug for NormFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormFamily::Isotropic { c } => write!(f, "Isotropic({c})"),
            NormFamily::Ellipsoid { m, .. } => write!(f, "Ellipsoid({m:?})"),
            NormFamily::Harmonic { eps, label, .. } => write!(f, "Harmonic({label}, {eps})"),
            NormFamily::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

/// Serializable description of a builtin norm family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum NormSpec {
    Isotropic {
        dim: usize,
        #[serde(default = "one")]
        c: f64,
    },
    Ellipsoid {
        #[serde(rename = "M")]
        m: Vec<Vec<f64>>,
    },
    Harmonic {
        dim: usize,
        eps: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        terms: Option<Vec<Monomial>>,
    },
}

fn one() -> f64 {
    1.0
}

/// A norm document as read from JSON: the family plus an optional
/// derivative mode, e.g. `{"family": "ellipsoid", "M": [[4,0],[0,1]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormDocument {
    #[serde(flatten)]
    pub spec: NormSpec,
    #[serde(default)]
    pub derivatives: DerivativeMode,
}

/// A smooth Minkowski norm on `R^{n+1}`, immutable after construction.
#[derive(Debug, Clone)]
pub struct MinkowskiNorm {
    dim: usize,
    family: NormFamily,
    derivatives: DerivativeMode,
    spec: Option<NormSpec>,
}

/// A symmetric matrix written in an orthonormal basis of a tangent space.
#[derive(Debug, Clone)]
pub struct TangentMatrix {
    pub basis: Vec<Vector>,
    pub matrix: Matrix,
}

const UNIT_TOL: f64 = 1e-12;

fn check_unit(x: &Vector) -> Result<()> {
    if (x.norm() - 1.0).abs() > UNIT_TOL {
        return domain(format!("expected a unit vector, |x| = {}", x.norm()));
    }
    Ok(())
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)];
    }
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

impl MinkowskiNorm {
    pub fn isotropic(dim: usize, c: f64) -> Result<Self> {
        if c <= 0.0 {
            return Err(Error::NonAdmissibleNorm(format!("isotropic constant {c} ≤ 0")));
        }
        Self::build(dim, NormFamily::Isotropic { c }, Some(NormSpec::Isotropic { dim, c }))
    }

    pub fn ellipsoid(m: Matrix) -> Result<Self> {
        let dim = m.nrows();
        if m.ncols() != dim || (&m - m.transpose()).abs().max() > 1e-14 * m.abs().max() {
            return Err(Error::NonAdmissibleNorm(
                "ellipsoid matrix must be square and symmetric".into(),
            ));
        }
        let m_inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NonAdmissibleNorm("singular ellipsoid matrix".into()))?;
        let rows = (0..dim).map(|i| m.row(i).iter().copied().collect()).collect();
        Self::build(
            dim,
            NormFamily::Ellipsoid { m, m_inv },
            Some(NormSpec::Ellipsoid { m: rows }),
        )
    }

    pub fn ellipsoid_diag(diag: &[f64]) -> Result<Self> {
        Self::ellipsoid(Matrix::from_diagonal(&Vector::from_row_slice(diag)))
    }

    /// `F = 1 + ε Y` for a named harmonic mode.
    pub fn harmonic(dim: usize, eps: f64, mode: &str) -> Result<Self> {
        let poly = harmonic_mode(mode, dim)
            .ok_or_else(|| Error::Domain(format!("unknown harmonic mode '{mode}' in dimension {dim}")))?;
        Self::build(
            dim,
            NormFamily::Harmonic {
                eps,
                mode: poly,
                label: mode.to_string(),
            },
            Some(NormSpec::Harmonic {
                dim,
                eps,
                mode: Some(mode.to_string()),
                terms: None,
            }),
        )
    }

    pub fn harmonic_poly(eps: f64, poly: HomogeneousPoly) -> Result<Self> {
        let dim = poly.dim();
        if dim < 2 || !poly.is_homogeneous() {
            return domain("perturbation must be a homogeneous polynomial in at least two variables");
        }
        let spec = NormSpec::Harmonic {
            dim,
            eps,
            mode: None,
            terms: Some(poly.terms.clone()),
        };
        Self::build(
            dim,
            NormFamily::Harmonic {
                eps,
                mode: poly,
                label: "custom-poly".into(),
            },
            Some(spec),
        )
    }

    /// Norm from an arbitrary callable on the sphere; uses numeric derivatives.
    pub fn custom(dim: usize, label: &str, f: SphereFn, h: f64) -> Result<Self> {
        let mut n = Self {
            dim,
            family: NormFamily::Custom {
                label: label.to_string(),
                f,
            },
            derivatives: DerivativeMode::Numeric { h },
            spec: None,
        };
        n.admissibility()?;
        n.derivatives = DerivativeMode::Numeric { h };
        Ok(n)
    }

    pub fn from_spec(spec: &NormSpec) -> Result<Self> {
        match spec {
            NormSpec::Isotropic { dim, c } => Self::isotropic(*dim, *c),
            NormSpec::Ellipsoid { m } => {
                let dim = m.len();
                if m.iter().any(|r| r.len() != dim) {
                    return Err(Error::Parse("ellipsoid matrix must be square".into()));
                }
                Self::ellipsoid(Matrix::from_fn(dim, dim, |i, j| m[i][j]))
            }
            NormSpec::Harmonic { dim, eps, mode, terms } => match (mode, terms) {
                (Some(mode), _) => Self::harmonic(*dim, *eps, mode),
                (None, Some(terms)) => {
                    let poly = HomogeneousPoly::new(terms.clone());
                    if poly.dim() != *dim {
                        return Err(Error::Parse("harmonic terms do not match dim".into()));
                    }
                    Self::harmonic_poly(*eps, poly)
                }
                (None, None) => Err(Error::Parse("harmonic norm needs `mode` or `terms`".into())),
            },
        }
    }

    pub fn from_document(doc: &NormDocument) -> Result<Self> {
        Self::from_spec(&doc.spec)?.with_derivatives(doc.derivatives)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NormDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    fn build(dim: usize, family: NormFamily, spec: Option<NormSpec>) -> Result<Self> {
        if dim < 2 {
            return domain("ambient dimension must be at least 2");
        }
        let n = Self {
            dim,
            family,
            derivatives: DerivativeMode::Analytic,
            spec,
        };
        n.admissibility()?;
        Ok(n)
    }

    /// Switches the derivative mode. Re-runs the admissibility check.
    pub fn with_derivatives(mut self, mode: DerivativeMode) -> Result<Self> {
        if matches!(self.family, NormFamily::Custom { .. }) && mode == DerivativeMode::Analytic {
            return domain("custom norms only support numeric derivatives");
        }
        if let DerivativeMode::Numeric { h } = mode {
            if !(h > 0.0 && h < 0.1) {
                return domain(format!("numeric derivative step {h} out of range"));
            }
        }
        self.derivatives = mode;
        self.admissibility()?;
        Ok(self)
    }

    /// Positivity of `F` and of `A_F` on a fixed quasi-uniform node set.
    fn admissibility(&self) -> Result<()> {
        let count = match self.dim {
            2 => 256,
            3 => 512,
            _ => 256,
        };
        for x in quasi_uniform(self.dim, count) {
            let f = self.eval(&x);
            if !(f > 0.0) || !f.is_finite() {
                return Err(Error::NonAdmissibleNorm(format!("F = {f} at {:?}", x.as_slice())));
            }
            let a = self.a_f_raw(&x);
            let lmin = min_eigenvalue(&a.matrix);
            if !(lmin > 0.0) {
                return Err(Error::NonAdmissibleNorm(format!(
                    "A_F has eigenvalue {lmin:.3e} ≤ 0 at {:?}; the Wulff shape is not strictly convex",
                    x.as_slice()
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        self.derivatives
    }

    pub fn spec(&self) -> Option<&NormSpec> {
        self.spec.as_ref()
    }

    pub fn is_isotropic(&self) -> bool {
        matches!(self.family, NormFamily::Isotropic { .. })
    }

    /// Short human-readable descriptor used in reports.
    pub fn describe(&self) -> String {
        let base = match &self.family {
            NormFamily::Isotropic { c } => format!("isotropic(c={c})"),
            NormFamily::Ellipsoid { m, .. } => {
                let rows: Vec<String> = (0..m.nrows())
                    .map(|i| {
                        let r: Vec<String> = m.row(i).iter().map(|v| format!("{v}")).collect();
                        format!("[{}]", r.join(","))
                    })
                    .collect();
                format!("ellipsoid(M=[{}])", rows.join(","))
            }
            NormFamily::Harmonic { eps, label, .. } => format!("harmonic({label},eps={eps})"),
            NormFamily::Custom { label, .. } => format!("custom({label})"),
        };
        match self.derivatives {
            DerivativeMode::Analytic => base,
            DerivativeMode::Numeric { h } => format!("{base}[numeric h={h}]"),
        }
    }

    /// The 1-homogeneous extension `F(x) = |x| F(x/|x|)`, with `F(0) = 0`.
    pub fn eval(&self, x: &Vector) -> f64 {
        let r = x.norm();
        if r == 0.0 {
            return 0.0;
        }
        match &self.family {
            NormFamily::Isotropic { c } => c * r,
            NormFamily::Ellipsoid { m, .. } => x.dot(&(m * x)).sqrt(),
            NormFamily::Harmonic { eps, mode, .. } => {
                let d = mode.degree() as i32;
                r + eps * mode.value(x) * r.powi(1 - d)
            }
            NormFamily::Custom { f, .. } => r * f(&(x / r)),
        }
    }

    fn analytic_gradient(&self, x: &Vector) -> Vector {
        let r = x.norm();
        match &self.family {
            NormFamily::Isotropic { c } => x * (*c / r),
            NormFamily::Ellipsoid { m, .. } => {
                let mx = m * x;
                let f = x.dot(&mx).sqrt();
                mx / f
            }
            NormFamily::Harmonic { eps, mode, .. } => {
                let d = mode.degree() as i32;
                let p = mode.value(x);
                let gp = mode.gradient(x);
                x / r + (gp * r.powi(1 - d) + x * ((1 - d) as f64 * p * r.powi(-d - 1))) * *eps
            }
            NormFamily::Custom { .. } => unreachable!("custom norms use numeric derivatives"),
        }
    }

    fn analytic_hessian(&self, x: &Vector) -> Matrix {
        let n = x.len();
        let r = x.norm();
        let id = Matrix::identity(n, n);
        let xxt = x * x.transpose();
        match &self.family {
            NormFamily::Isotropic { c } => (id / r - xxt / (r * r * r)) * *c,
            NormFamily::Ellipsoid { m, .. } => {
                let mx = m * x;
                let f = x.dot(&mx).sqrt();
                m / f - (&mx * mx.transpose()) / (f * f * f)
            }
            NormFamily::Harmonic { eps, mode, .. } => {
                let d = mode.degree() as i32;
                let df = (1 - d) as f64;
                let p = mode.value(x);
                let gp = mode.gradient(x);
                let hp = mode.hessian(x);
                let iso = &id / r - &xxt / (r * r * r);
                let cross = &gp * x.transpose() + x * gp.transpose();
                let pert = hp * r.powi(1 - d)
                    + cross * (df * r.powi(-d - 1))
                    + (&id * r.powi(-d - 1) + &xxt * ((-d - 1) as f64 * r.powi(-d - 3))) * (df * p);
                iso + pert * *eps
            }
            NormFamily::Custom { .. } => unreachable!("custom norms use numeric derivatives"),
        }
    }

    /// Chart gradient and Hessian of `F` on the sphere at the unit vector `x`.
    fn chart_derivatives(&self, x: &Vector, h: f64) -> (Vec<Vector>, Vector, Matrix) {
        let chart = GnomonicChart::new(x);
        let n = self.dim - 1;
        let f = |y: &[f64]| self.eval(&chart.point(y));
        let f0 = f(&vec![0.0; n]);
        let mut g = Vector::zeros(n);
        let mut hs = Matrix::zeros(n, n);
        let unit = |i: usize, s: f64| {
            let mut y = vec![0.0; n];
            y[i] = s;
            y
        };
        for i in 0..n {
            let fp = f(&unit(i, h));
            let fm = f(&unit(i, -h));
            g[i] = (fp - fm) / (2.0 * h);
            hs[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
            for j in 0..i {
                let mut y = vec![0.0; n];
                let mut corner = |si: f64, sj: f64| {
                    y[i] = si * h;
                    y[j] = sj * h;
                    f(&y)
                };
                let v = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0) + corner(-1.0, -1.0)) / (4.0 * h * h);
                hs[(i, j)] = v;
                hs[(j, i)] = v;
            }
        }
        (chart.basis, g, hs)
    }

    /// `DF(x)`; for unit `x` this is the Cahn–Hoffman map `Φ(x) = F(x)x + ∇^S F(x)`.
    pub fn gradient(&self, x: &Vector) -> Vector {
        match self.derivatives {
            DerivativeMode::Analytic => self.analytic_gradient(x),
            DerivativeMode::Numeric { h } => {
                let u = x / x.norm();
                let (basis, g, _) = self.chart_derivatives(&u, h);
                let mut phi = &u * self.eval(&u);
                for (t, gi) in basis.iter().zip(g.iter()) {
                    phi += t * *gi;
                }
                phi
            }
        }
    }

    /// `D²F(x)` of the homogeneous extension. At unit `x` it annihilates `x`
    /// and equals `A_F(x)` on the tangent space.
    pub fn hessian(&self, x: &Vector) -> Matrix {
        match self.derivatives {
            DerivativeMode::Analytic => self.analytic_hessian(x),
            DerivativeMode::Numeric { h } => {
                let r = x.norm();
                let u = x / r;
                let (basis, _, hs) = self.chart_derivatives(&u, h);
                let f = self.eval(&u);
                let n = basis.len();
                let mut out = Matrix::zeros(self.dim, self.dim);
                for i in 0..n {
                    for j in 0..n {
                        let a = hs[(i, j)] + if i == j { f } else { 0.0 };
                        out += &basis[i] * basis[j].transpose() * a;
                    }
                }
                out / r
            }
        }
    }

    /// The Cahn–Hoffman map at a unit vector.
    pub fn cahn_hoffman(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        check_unit(x)?;
        let phi = self.gradient(x);
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation {
                message: "non-finite Cahn–Hoffman value".into(),
                best_lower_bound: f64::NAN,
            });
        }
        Ok(phi)
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return domain(format!("vector of length {} for a norm on R^{}", x.len(), self.dim));
        }
        Ok(())
    }

    fn a_f_raw(&self, x: &Vector) -> TangentMatrix {
        let basis = tangent_basis(x);
        let matrix = self.a_f_in_frame(x, &basis);
        TangentMatrix { basis, matrix }
    }

    /// `A_F(x)` written in the given orthonormal basis of `x^⊥`.
    pub fn a_f_in_frame(&self, x: &Vector, frame: &[Vector]) -> Matrix {
        let hs = self.hessian(x);
        let n = frame.len();
        Matrix::from_fn(n, n, |i, j| frame[i].dot(&(&hs * &frame[j])))
    }

    /// `A_F(x) = ∇^S∇^S F + F g` in an orthonormal tangent basis at `x`.
    pub fn a_f_matrix(&self, x: &Vector) -> Result<TangentMatrix> {
        self.check_dim(x)?;
        check_unit(x)?;
        let mut a = self.a_f_raw(x);
        let sym = (&a.matrix + a.matrix.transpose()) * 0.5;
        a.matrix = sym;
        let lmin = min_eigenvalue(&a.matrix);
        if !(lmin > 0.0) {
            return Err(Error::NonAdmissibleNorm(format!(
                "A_F smallest eigenvalue {lmin:.3e} at {:?}",
                x.as_slice()
            )));
        }
        Ok(a)
    }

    /// The dual norm `F⁰(ξ) = sup_{x≠0} ⟨x,ξ⟩ / F(x)`.
    pub fn dual_norm(&self, xi: &Vector) -> Result<f64> {
        self.check_dim(xi)?;
        let r = xi.norm();
        if r == 0.0 {
            return Ok(0.0);
        }
        match (&self.family, self.derivatives) {
            (NormFamily::Isotropic { c }, _) => Ok(r / c),
            (NormFamily::Ellipsoid { m_inv, .. }, _) => Ok(xi.dot(&(m_inv * xi)).sqrt()),
            _ => self.dual_norm_search(xi).map(|(v, _)| v),
        }
    }

    /// The maximiser of `⟨x,ξ⟩/F(x)` on the sphere, i.e. the unit `x` with `Φ(x) ∥ ξ`.
    pub fn dual_maximizer(&self, xi: &Vector) -> Result<Vector> {
        self.check_dim(xi)?;
        if xi.norm() == 0.0 {
            return domain("dual maximiser of the zero vector is undefined");
        }
        self.dual_norm_search(xi).map(|(_, x)| x)
    }

    fn dual_objective(&self, x: &Vector, xi: &Vector) -> f64 {
        x.dot(xi) / self.eval(x)
    }

    /// Projected Newton ascent on the sphere. Returns the point and whether
    /// the gradient tolerance was met.
    fn dual_newton(&self, start: &Vector, xi: &Vector) -> (Vector, bool) {
        let mut x = start.clone();
        let scale = xi.norm();
        for _ in 0..DUAL_MAX_ITER {
            let f = self.eval(&x);
            let df = self.gradient(&x);
            let d2f = self.hessian(&x);
            let xx = x.dot(xi);
            let dg = xi / f - &df * (xx / (f * f));
            let basis = tangent_basis(&x);
            let n = basis.len();
            let grad = Vector::from_fn(n, |i, _| basis[i].dot(&dg));
            if grad.norm() * f / scale <= DUAL_GRAD_TOL {
                return (x, true);
            }
            let d2g = -(xi * df.transpose() + &df * xi.transpose()) / (f * f)
                + (&df * df.transpose()) * (2.0 * xx / (f * f * f))
                - &d2f * (xx / (f * f));
            let hm = Matrix::from_fn(n, n, |i, j| basis[i].dot(&(&d2g * &basis[j])));
            let step = match (-&hm).cholesky() {
                Some(ch) => ch.solve(&grad),
                None => &grad * (1.0 / (hm.abs().max() + 1.0)),
            };
            let len = step.norm();
            let step = if len > 0.5 { step * (0.5 / len) } else { step };
            let g0 = self.dual_objective(&x, xi);
            let mut alpha = 1.0;
            let mut next = x.clone();
            for _ in 0..30 {
                let mut cand = x.clone();
                for (t, s) in basis.iter().zip(step.iter()) {
                    cand += t * (alpha * s);
                }
                cand /= cand.norm();
                if self.dual_objective(&cand, xi) >= g0 - 1e-15 * g0.abs() {
                    next = cand;
                    break;
                }
                alpha *= 0.5;
            }
            if (&next - &x).norm() == 0.0 {
                // No ascent possible at working precision.
                let f = self.eval(&x);
                let dg = xi / f - self.gradient(&x) * (x.dot(xi) / (f * f));
                let g = basis.iter().map(|t| t.dot(&dg).powi(2)).sum::<f64>().sqrt();
                return (x, g * f / scale <= 1e3 * DUAL_GRAD_TOL);
            }
            x = next;
        }
        (x, false)
    }

    /// Numerical maximisation behind `dual_norm`, usable even when a closed form exists.
    pub fn dual_norm_search(&self, xi: &Vector) -> Result<(f64, Vector)> {
        let grid_size = if self.dim == 2 { 32 } else { 64 };
        let mut grid: Vec<(f64, Vector)> = quasi_uniform(self.dim, grid_size)
            .into_iter()
            .map(|x| (self.dual_objective(&x, xi), x))
            .collect();
        grid.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut starts: Vec<Vector> = vec![xi / xi.norm()];
        starts.extend(grid.iter().take(DUAL_STARTS - 1).map(|(_, x)| x.clone()));

        let mut best: Option<(f64, Vector)> = None;
        let mut lower = f64::NEG_INFINITY;
        for s in &starts {
            let (x, ok) = self.dual_newton(s, xi);
            let v = self.dual_objective(&x, xi);
            lower = lower.max(v);
            if ok && best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, x));
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        // Brute-grid fallback.
        let dense = quasi_uniform(self.dim, if self.dim == 2 { 4096 } else { 20000 });
        let seed = dense
            .into_iter()
            .max_by(|a, b| self.dual_objective(a, xi).total_cmp(&self.dual_objective(b, xi)))
            .expect("non-empty grid");
        let (x, ok) = self.dual_newton(&seed, xi);
        let v = self.dual_objective(&x, xi);
        lower = lower.max(v);
        if ok {
            Ok((v, x))
        } else {
            Err(Error::Evaluation {
                message: "dual-norm maximisation did not converge".into(),
                best_lower_bound: lower,
            })
        }
    }
}

pub const DUAL_STARTS: usize = 8;
pub const DUAL_MAX_ITER: usize = 50;
pub const DUAL_GRAD_TOL: f64 = 1e-12;

/// A Wulff shape `W_{r0}(x0) = {x : F⁰(x − x0) = r0}`.
#[derive(Debug, Clone)]
pub struct WulffShapeSpec {
    pub norm: MinkowskiNorm,
    pub radius: f64,
    pub center: Vector,
}

impl WulffShapeSpec {
    pub fn new(norm: MinkowskiNorm, radius: f64, center: Vector) -> Result<Self> {
        if !(radius > 0.0) {
            return domain("Wulff radius must be positive");
        }
        if center.len() != norm.dim() {
            return domain("center dimension mismatch");
        }
        Ok(Self { norm, radius, center })
    }

    /// The point of the shape with outer unit normal `z`: `x0 + r0 Φ(z)`.
    pub fn point(&self, z: &Vector) -> Result<Vector> {
        Ok(&self.center + self.norm.cahn_hoffman(z)? * self.radius)
    }

    /// Sample points on a quasi-uniform set of normals.
    pub fn sample(&self, count: usize) -> Result<Vec<Vector>> {
        quasi_uniform(self.norm.dim(), count)
            .iter()
            .map(|z| self.point(z))
            .collect()
    }

    /// `F⁰(x − x0) − r0`.
    pub fn level_defect(&self, x: &Vector) -> Result<f64> {
        Ok(self.norm.dual_norm(&(x - &self.center))? - self.radius)
    }
}
