//! Gauss–Legendre rules, compensated weighted sums and convergence fitting.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::par;

/// `P_n(z)` and `P_n'(z)` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, 0.0);
    for j in 0..n {
        let p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
    }
    (p0, n as f64 * (z * p0 - p1) / (z * z - 1.0))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss–Legendre rule needs at least one node");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| half * v).collect(),
    )
}

/// Composite rule: `panels` equal panels on `[a, b]`, `points` GL nodes each.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, points: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(panels * points);
    let mut ws = Vec::with_capacity(panels * points);
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let (x, w) = gauss_legendre_on(points, lo, lo + width);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

/// Periodic trapezoid rule on `[0, 2π)`.
pub fn periodic_trapezoid(n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    ((0..n).map(|i| i as f64 * h).collect(), vec![h; n])
}

/// `Σ w_i f_i` in a fixed order with compensated summation.
pub fn weighted_sum(weights: &[f64], values: &[f64]) -> Result<f64> {
    if weights.len() != values.len() {
        return domain(format!("{} weights for {} values", weights.len(), values.len()));
    }
    if let Some(node) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Propagation { node });
    }
    Ok(par::sum(weights.iter().zip(values).map(|(w, f)| w * f)))
}

/// Nominal node spacing `h_L = 2^{-L}` of refinement level `L`.
pub fn level_spacing(level: u32) -> f64 {
    0.5f64.powi(level as i32)
}

/// Result of fitting `log|error| ≈ p log h + c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FittedOrder {
    /// Every error is at or below the floating-point floor.
    Exact,
    Order {
        order: f64,
    },
}

impl FittedOrder {
    /// Whether the fit meets `min_order`; an exact ladder always does.
    pub fn at_least(&self, min_order: f64) -> bool {
        match self {
            FittedOrder::Exact => true,
            FittedOrder::Order { order } => *order >= min_order,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            FittedOrder::Exact => None,
            FittedOrder::Order { order } => Some(*order),
        }
    }
}

impl std::fmt::Display for FittedOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FittedOrder::Exact => write!(f, "exact"),
            FittedOrder::Order { order } => write!(f, "{order:.3}"),
        }
    }
}

/// Least-squares slope of `log max(|e|, floor)` against `log h`, truncated
/// after the first error that reaches the floor.
pub fn fit_errors(errors: &[f64], spacings: &[f64], floor: f64) -> Result<FittedOrder> {
    if errors.len() < 3 || errors.len() != spacings.len() {
        return domain("convergence fit needs at least three levels with matching spacings");
    }
    if errors.iter().any(|e| !e.is_finite()) {
        return Err(Error::Propagation {
            node: errors.iter().position(|e| !e.is_finite()).unwrap_or(0),
        });
    }
    if errors.iter().all(|e| e.abs() <= floor) {
        return Ok(FittedOrder::Exact);
    }
    // Points past the first one at the floor carry no rate information.
    let keep = errors
        .iter()
        .position(|e| e.abs() <= floor)
        .map_or(errors.len(), |i| i + 1);
    let keep = if keep < 2 { errors.len() } else { keep };
    let xs: Vec<f64> = spacings[..keep].iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors[..keep].iter().map(|e| e.abs().max(floor).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(FittedOrder::Order { order: sxy / sxx })
}

/// Fit against a known reference value: errors are `|value − reference|`.
pub fn convergence_fit(values: &[f64], reference: f64, spacings: &[f64], floor: f64) -> Result<FittedOrder> {
    let errors: Vec<f64> = values.iter().map(|v| (v - reference).abs()).collect();
    fit_errors(&errors, spacings, floor)
}

/// Floor for ladders on closed-form geometry.
pub const ANALYTIC_FLOOR: f64 = 1e-12;
/// Floor for ladders whose geometry carries finite-difference curvature.
pub const FD_FLOOR: f64 = 1e-9;
