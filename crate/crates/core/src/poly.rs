//! Homogeneous polynomials in `R^{n+1}` with closed-form gradient and Hessian.

use serde::{Deserialize, Serialize};

use crate::sphere::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coef: f64,
    pub powers: Vec<u32>,
}

/// A homogeneous polynomial stored as a list of monomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousPoly {
    pub terms: Vec<Monomial>,
}

fn powi(x: f64, p: u32) -> f64 {
    x.powi(p as i32)
}

impl HomogeneousPoly {
    pub fn new(terms: Vec<Monomial>) -> Self {
        Self { terms }
    }

    pub fn degree(&self) -> u32 {
        self.terms.first().map(|m| m.powers.iter().sum()).unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.terms.first().map(|m| m.powers.len()).unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        let n = self.dim();
        self.terms
            .iter()
            .all(|m| m.powers.len() == n && m.powers.iter().sum::<u32>() == d)
    }

    pub fn value(&self, x: &Vector) -> f64 {
        self.terms
            .iter()
            .map(|m| {
                m.coef
                    * m.powers
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| powi(x[i], p))
                        .product::<f64>()
            })
            .sum()
    }

    pub fn gradient(&self, x: &Vector) -> Vector {
        let n = x.len();
        let mut g = Vector::zeros(n);
        for m in &self.terms {
            for k in 0..n {
                let pk = m.powers[k];
                if pk == 0 {
                    continue;
                }
                let mut v = m.coef * pk as f64 * powi(x[k], pk - 1);
                for (i, &p) in m.powers.iter().enumerate() {
                    if i != k {
                        v *= powi(x[i], p);
                    }
                }
                g[k] += v;
            }
        }
        g
    }

    pub fn hessian(&self, x: &Vector) -> Matrix {
        let n = x.len();
        let mut h = Matrix::zeros(n, n);
        for m in &self.terms {
            for a in 0..n {
                for b in a..n {
                    let mut pw = m.powers.clone();
                    let mut c = m.coef;
                    if pw[a] == 0 {
                        continue;
                    }
                    c *= pw[a] as f64;
                    pw[a] -= 1;
                    if pw[b] == 0 {
                        continue;
                    }
                    c *= pw[b] as f64;
                    pw[b] -= 1;
                    let v = c * pw.iter().enumerate().map(|(i, &p)| powi(x[i], p)).product::<f64>();
                    h[(a, b)] += v;
                    if a != b {
                        h[(b, a)] += v;
                    }
                }
            }
        }
        h
    }

    /// Sum of the pure second derivatives.
    pub fn laplacian(&self, x: &Vector) -> f64 {
        self.hessian(x).trace()
    }
}

fn mono(coef: f64, powers: &[u32]) -> Monomial {
    Monomial {
        coef,
        powers: powers.to_vec(),
    }
}

/// Named low-order harmonic modes. All are harmonic in the ambient space, so
/// their restrictions are spherical harmonics.
pub fn harmonic_mode(name: &str, dim: usize) -> Option<HomogeneousPoly> {
    let terms = match (dim, name) {
        (3, "zonal2") => vec![mono(-0.5, &[2, 0, 0]), mono(-0.5, &[0, 2, 0]), mono(1.0, &[0, 0, 2])],
        (3, "xz") => vec![mono(1.0, &[1, 0, 1])],
        (3, "xy") => vec![mono(1.0, &[1, 1, 0])],
        (3, "zonal3") => vec![mono(1.0, &[0, 0, 3]), mono(-1.5, &[2, 0, 1]), mono(-1.5, &[0, 2, 1])],
        (2, "cos2") => vec![mono(1.0, &[0, 2]), mono(-1.0, &[2, 0])],
        (2, "sin2") => vec![mono(2.0, &[1, 1])],
        (2, "cos3") => vec![mono(1.0, &[0, 3]), mono(-3.0, &[2, 1])],
        _ => return None,
    };
    Some(HomogeneousPoly::new(terms))
}

pub const HARMONIC_MODES_3D: &[&str] = &["zonal2", "xz", "xy", "zonal3"];
pub const HARMONIC_MODES_2D: &[&str] = &["cos2", "sin2", "cos3"];
