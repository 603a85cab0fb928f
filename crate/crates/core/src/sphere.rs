//! Helpers on the unit sphere `S^n ⊂ R^{n+1}`: tangent bases, gnomonic
//! charts, meridian coordinates and quasi-uniform node sets.
//!
//! The distinguished vertical direction `E_{n+1}` is always the last
//! coordinate axis.

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// The last coordinate axis of `R^{dim}`.
pub fn vertical(dim: usize) -> Vector {
    let mut e = Vector::zeros(dim);
    e[dim - 1] = 1.0;
    e
}

/// Orthonormal basis of the tangent space `x^⊥`, obtained by Gram–Schmidt on
/// the coordinate axes ordered from least to most aligned with `x`.
pub fn tangent_basis(x: &Vector) -> Vec<Vector> {
    let dim = x.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()));
    let mut basis: Vec<Vector> = Vec::with_capacity(dim - 1);
    for &axis in &order {
        if basis.len() == dim - 1 {
            break;
        }
        let mut v = Vector::zeros(dim);
        v[axis] = 1.0;
        v -= x * x.dot(&v);
        for b in &basis {
            let c = b.dot(&v);
            v -= b * c;
        }
        let n = v.norm();
        if n > 1e-8 {
            basis.push(v / n);
        }
    }
    basis
}

/// Gnomonic chart centred at a unit vector: `y ↦ (x + Σ y_i t_i) / |·|`.
///
/// At `y = 0` the chart is an isometry to first order and its second
/// derivatives are normal to the sphere, so plain partial derivatives of a
/// function in this chart give the Riemannian gradient and Hessian at the
/// centre.
#[derive(Debug, Clone)]
pub struct GnomonicChart {
    pub center: Vector,
    pub basis: Vec<Vector>,
}

impl GnomonicChart {
    pub fn new(center: &Vector) -> Self {
        Self {
            center: center.clone(),
            basis: tangent_basis(center),
        }
    }

    pub fn with_basis(center: &Vector, basis: Vec<Vector>) -> Self {
        Self {
            center: center.clone(),
            basis,
        }
    }

    fn raw(&self, y: &[f64]) -> Vector {
        let mut p = self.center.clone();
        for (t, yi) in self.basis.iter().zip(y) {
            p += t * *yi;
        }
        p
    }

    /// Point of the sphere with chart coordinates `y`.
    pub fn point(&self, y: &[f64]) -> Vector {
        let p = self.raw(y);
        let n = p.norm();
        p / n
    }

    /// Partial derivatives `∂p/∂y_i` of the chart map at `y`.
    pub fn partials(&self, y: &[f64]) -> Vec<Vector> {
        let p = self.raw(y);
        let s2 = p.norm_squared();
        let s = s2.sqrt();
        self.basis
            .iter()
            .zip(y)
            .map(|(t, yi)| t / s - &p * (*yi / (s2 * s)))
            .collect()
    }
}

/// Point on `S^2` at polar angle `t` from `E_3` and azimuth `phi`.
pub fn polar_point(t: f64, phi: f64) -> Vector {
    let (st, ct) = t.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector::from_vec(vec![st * cp, st * sp, ct])
}

/// `∂z/∂t` for [`polar_point`].
pub fn polar_dt(t: f64, phi: f64) -> Vector {
    let (st, ct) = t.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector::from_vec(vec![ct * cp, ct * sp, -st])
}

/// `∂z/∂phi` for [`polar_point`].
pub fn polar_dphi(t: f64, phi: f64) -> Vector {
    let st = t.sin();
    let (sp, cp) = phi.sin_cos();
    Vector::from_vec(vec![-st * sp, st * cp, 0.0])
}

/// Point on `S^1` at signed angle `t` from `E_2`.
pub fn circle_point(t: f64) -> Vector {
    let (s, c) = t.sin_cos();
    Vector::from_vec(vec![s, c])
}

pub fn circle_dt(t: f64) -> Vector {
    let (s, c) = t.sin_cos();
    Vector::from_vec(vec![c, -s])
}

/// Quasi-uniform node set on `S^n`: a Fibonacci lattice for `n = 2`,
/// equally spaced angles for `n = 1`.
pub fn quasi_uniform(dim: usize, count: usize) -> Vec<Vector> {
    match dim {
        2 => (0..count)
            .map(|i| circle_point(2.0 * std::f64::consts::PI * (i as f64 + 0.5) / count as f64))
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let zc = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - zc * zc).sqrt();
                    let a = golden * i as f64;
                    Vector::from_vec(vec![r * a.cos(), r * a.sin(), zc])
                })
                .collect()
        }
        _ => {
            // Generic fallback: normalised deterministic pseudo-random points.
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            (0..count)
                .map(|_| {
                    let v = Vector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
                    let n = v.norm();
                    v / n
                })
                .collect()
        }
    }
}

/// Uniform random unit vector (Gaussian direction).
pub fn random_unit<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let v = Vector::from_fn(dim, |_, _| normal(rng));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Box–Muller standard normal sample.
fn normal<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
