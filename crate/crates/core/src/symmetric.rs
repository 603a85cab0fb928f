//! Elementary symmetric functions, normalized curvatures and Newton operators.

use crate::error::{Error, Result};
use crate::sphere::Matrix;

/// Binomial coefficient as a float; exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c.round()
}

/// `σ_0..σ_n` of `κ`, from the coefficients of `Π(1 + κ_i t)`.
pub fn elementary_symmetric(kappa: &[f64]) -> Vec<f64> {
    let n = kappa.len();
    let mut s = vec![0.0; n + 1];
    s[0] = 1.0;
    for (i, &k) in kappa.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            s[j] += k * s[j - 1];
        }
    }
    s
}

/// Normalized `H_k = σ_k / C(n,k)` for `k = 0..n`.
pub fn normalized(sigma: &[f64]) -> Vec<f64> {
    let n = sigma.len() - 1;
    sigma.iter().enumerate().map(|(k, s)| s / binomial(n, k)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricFunctions {
    pub sigma: Vec<f64>,
    pub h: Vec<f64>,
}

impl SymmetricFunctions {
    pub fn of(kappa: &[f64]) -> Self {
        let sigma = elementary_symmetric(kappa);
        let h = normalized(&sigma);
        Self { sigma, h }
    }

    pub fn n(&self) -> usize {
        self.sigma.len() - 1
    }

    /// `H_k`, with `H_k = 0` for `k > n`.
    pub fn h(&self, k: usize) -> f64 {
        self.h.get(k).copied().unwrap_or(0.0)
    }

    pub fn sigma(&self, k: usize) -> f64 {
        self.sigma.get(k).copied().unwrap_or(0.0)
    }
}

/// `P_0 = I`, `P_k = σ_k I − P_{k−1} S`. Returns `P_0..P_n`.
pub fn newton_operators(s: &Matrix, sigma: &[f64]) -> Vec<Matrix> {
    let n = s.nrows();
    let id = Matrix::identity(n, n);
    let mut out = Vec::with_capacity(n + 1);
    out.push(id.clone());
    for k in 1..=n {
        let prev = &out[k - 1];
        let next = &id * sigma[k] - prev * s;
        out.push(next);
    }
    out
}

/// Checks that `dν ∘ P_k` is symmetric for every `k`.
pub fn check_newton_symmetry(dnu: &Matrix, p: &[Matrix], tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let scale = dnu.abs().max().max(1e-300);
    for pk in p {
        let m = dnu * pk;
        let asym = (&m - m.transpose()).abs().max() / (scale * pk.abs().max().max(1.0));
        worst = worst.max(asym);
    }
    if worst > tol {
        return Err(Error::Consistency(format!(
            "dν∘P_k asymmetry {worst:.3e} exceeds {tol:.1e}"
        )));
    }
    Ok(worst)
}

/// Truth of `(H_k/H_l)^{1/(k−l)} ≤ (H_r/H_s)^{1/(r−s)}` and the two sides.
pub fn newton_maclaurin_sides(h: &[f64], k: usize, l: usize, r: usize, s: usize) -> (f64, f64) {
    let lhs = (h[k] / h[l]).powf(1.0 / (k - l) as f64);
    let rhs = (h[r] / h[s]).powf(1.0 / (r - s) as f64);
    (lhs, rhs)
}
