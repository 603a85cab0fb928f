//! The capillary `L_p`-Minkowski problem at `n = 1`:
//! `u^{1−p}(u″ + u) = φ` on the arc `[−θ, θ]` with the Robin conditions
//! `u′(θ) = cot θ·u(θ)` and `−u′(−θ) = cot θ·u(−θ)`.
//!
//! `t` is the angle from `E₂`, so the arc is the sphere cap `⟨z, E₂⟩ ≥ cos θ`.
//! For `p = 1` the problem is linear and horizontal translations
//! (`u ↦ u + a sin t`) are in its kernel; the solver fixes them with the gauge
//! `⟨sin, u⟩ = 0`. For `p = 2` it is homogeneous and solutions form a ray; the
//! solver pins the scale to the initial guess at `t = 0` and absorbs the
//! discrete compatibility defect in a constant shift of `φ`.
//!
//! Newton steps use the divided form above; convergence is measured on the
//! undivided form `u″ + u − φ u^{p−1}`, whose rounding floor does not grow
//! with `u^{1−p}`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lab::report::{CheckReport, Criterion, LadderRow, Verdict};
use crate::quadrature::{fit_errors, FD_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverControls {
    pub max_iterations: usize,
    /// Convergence threshold on the max-norm residual.
    pub tolerance: f64,
    /// Smallest Armijo step.
    pub min_step: f64,
}

impl Default for SolverControls {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            tolerance: 1e-10,
            min_step: 1.0 / 1024.0,
        }
    }
}

/// Right-hand side families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PhiSpec {
    /// `φ` manufactured from the closed-form `u*` (see [`manufactured_solution`]).
    Manufactured,
    Constant {
        c: f64,
    },
    /// `1 + amplitude·cos(π t / (2θ))`.
    Bump {
        amplitude: f64,
    },
    /// Values on the grid, `N + 1` of them.
    Values {
        values: Vec<f64>,
    },
}

impl PhiSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "manufactured" => Ok(PhiSpec::Manufactured),
            "const" => Ok(PhiSpec::Constant { c: 1.0 }),
            "bump" => Ok(PhiSpec::Bump { amplitude: 0.3 }),
            other => domain(format!(
                "unknown φ '{other}' (valid: manufactured, const, bump, or a JSON file of grid values)"
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PhiSpec::Manufactured => "manufactured",
            PhiSpec::Constant { .. } => "const",
            PhiSpec::Bump { .. } => "bump",
            PhiSpec::Values { .. } => "values",
        }
    }

    /// Grid values for the given problem.
    pub fn sample(&self, theta: f64, p: f64, n: usize) -> Result<Vec<f64>> {
        let t = nodes(theta, n);
        match self {
            PhiSpec::Manufactured => Ok(manufactured_rhs(theta, p, n)?.0),
            PhiSpec::Constant { c } => Ok(vec![*c; n + 1]),
            PhiSpec::Bump { amplitude } => Ok(t
                .iter()
                .map(|t| 1.0 + amplitude * (std::f64::consts::FRAC_PI_2 * t / theta).cos())
                .collect()),
            PhiSpec::Values { values } => {
                if values.len() != n + 1 {
                    return domain(format!("φ has {} values, the grid has {}", values.len(), n + 1));
                }
                Ok(values.clone())
            }
        }
    }
}

/// The grid `t_i = −θ + 2θ i / N`.
pub fn nodes(theta: f64, n: usize) -> Vec<f64> {
    let h = 2.0 * theta / n as f64;
    (0..=n).map(|i| -theta + h * i as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapillaryBVP {
    pub theta: f64,
    pub p: f64,
    pub phi: Vec<f64>,
    /// Number of grid intervals `N`.
    pub n: usize,
    pub controls: SolverControls,
}

impl CapillaryBVP {
    pub fn new(theta: f64, p: f64, phi: Vec<f64>, controls: SolverControls) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return domain(format!("contact angle θ = {theta} outside (0, π)"));
        }
        if !(p >= 1.0) {
            return domain(format!("exponent p = {p} must be at least 1"));
        }
        let n = phi.len().saturating_sub(1);
        if n < 8 || n % 2 != 0 {
            return domain("the grid needs an even number N ≥ 8 of intervals");
        }
        if let Some(i) = phi.iter().position(|v| !(*v > 0.0)) {
            return domain(format!("φ must be positive; φ[{i}] = {}", phi[i]));
        }
        Ok(Self {
            theta,
            p,
            phi,
            n,
            controls,
        })
    }

    pub fn from_spec(theta: f64, p: f64, phi: &PhiSpec, n: usize) -> Result<Self> {
        Self::new(theta, p, phi.sample(theta, p, n)?, SolverControls::default())
    }

    pub fn h(&self) -> f64 {
        2.0 * self.theta / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        nodes(self.theta, self.n)
    }

    fn mode(&self) -> Mode {
        if self.p == 1.0 {
            Mode::Translation
        } else if self.p == 2.0 {
            Mode::Scaling
        } else {
            Mode::Plain
        }
    }

    /// `1 − cos θ cos t`: positive, satisfies both Robin conditions, `g″ + g = 1`.
    pub fn base_profile(&self) -> Vec<f64> {
        let c = self.theta.cos();
        self.nodes().iter().map(|t| 1.0 - c * t.cos()).collect()
    }

    /// `c₀ g` with `c₀^{2−p} = mean(φ g^{p−1})`, and `c₀ = 1` for `p = 2`.
    pub fn default_guess(&self) -> Vec<f64> {
        let g = self.base_profile();
        let c0 = if self.p == 2.0 {
            1.0
        } else {
            let m = g
                .iter()
                .zip(&self.phi)
                .map(|(g, f)| f * g.powf(self.p - 1.0))
                .sum::<f64>()
                / g.len() as f64;
            m.powf(1.0 / (2.0 - self.p))
        };
        g.into_iter().map(|g| c0 * g).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    Plain,
    /// `p = 1`: gauge `⟨w sin, u⟩ = 0`, multiplier on `sin t`.
    Translation,
    /// `p = 2`: `u(0)` pinned, constant shift of `φ`.
    Scaling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub u: Vec<f64>,
    /// Max-norm of `u″ + u − φ u^{p−1}` and the boundary rows, relative to `max(1, max|u|)`.
    pub residual: f64,
    pub iterations: usize,
    /// `min (u″ + u)` over interior nodes.
    pub min_convexity: f64,
    pub converged: bool,
    /// Extra unknown of the bordered system: the multiplier of `sin t` for
    /// `p = 1`, the shift of `φ` for `p = 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub border: Option<f64>,
}

struct System<'a> {
    bvp: &'a CapillaryBVP,
    mode: Mode,
    sin: Vec<f64>,
    weights: Vec<f64>,
    mid: usize,
    pin: f64,
}

impl<'a> System<'a> {
    fn new(bvp: &'a CapillaryBVP, guess: &[f64]) -> Self {
        let t = bvp.nodes();
        let h = bvp.h();
        let mut weights = vec![h; bvp.n + 1];
        weights[0] *= 0.5;
        weights[bvp.n] *= 0.5;
        Self {
            bvp,
            mode: bvp.mode(),
            sin: t.iter().map(|t| t.sin()).collect(),
            weights,
            mid: bvp.n / 2,
            pin: guess[bvp.n / 2],
        }
    }

    fn unknowns(&self) -> usize {
        self.bvp.n + 1 + usize::from(self.mode != Mode::Plain)
    }

    fn convexity(&self, u: &[f64]) -> Vec<f64> {
        let h2 = self.bvp.h().powi(2);
        (1..self.bvp.n)
            .map(|i| (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2 + u[i])
            .collect()
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let n = self.bvp.n;
        let h = self.bvp.h();
        let cot = 1.0 / self.bvp.theta.tan();
        let p = self.bvp.p;
        let u = &x[..=n];
        let extra = if self.mode == Mode::Plain { 0.0 } else { x[n + 1] };
        let mut r = Vec::with_capacity(self.unknowns());
        r.push(-(-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h) - cot * u[0]);
        for (i, l) in (1..n).zip(self.convexity(u)) {
            let mut ri = u[i].powf(1.0 - p) * l - self.bvp.phi[i];
            match self.mode {
                Mode::Plain => {}
                Mode::Translation => ri += extra * self.sin[i],
                Mode::Scaling => ri -= extra,
            }
            r.push(ri);
        }
        r.push((3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h) - cot * u[n]);
        match self.mode {
            Mode::Plain => {}
            Mode::Translation => r.push((0..=n).map(|i| self.weights[i] * self.sin[i] * u[i]).sum()),
            Mode::Scaling => r.push(u[self.mid] - self.pin),
        }
        r
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.bvp.n;
        let m = self.unknowns();
        let h = self.bvp.h();
        let h2 = h * h;
        let cot = 1.0 / self.bvp.theta.tan();
        let p = self.bvp.p;
        let u = &x[..=n];
        let mut j = DMatrix::zeros(m, m);
        j[(0, 0)] = 3.0 / (2.0 * h) - cot;
        j[(0, 1)] = -4.0 / (2.0 * h);
        j[(0, 2)] = 1.0 / (2.0 * h);
        for i in 1..n {
            let w = u[i].powf(1.0 - p);
            let l = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2 + u[i];
            j[(i, i - 1)] = w / h2;
            j[(i, i + 1)] = w / h2;
            j[(i, i)] = w * (1.0 - 2.0 / h2) + (1.0 - p) * u[i].powf(-p) * l;
            match self.mode {
                Mode::Plain => {}
                Mode::Translation => j[(i, n + 1)] = self.sin[i],
                Mode::Scaling => j[(i, n + 1)] = -1.0,
            }
        }
        j[(n, n)] = 3.0 / (2.0 * h) - cot;
        j[(n, n - 1)] = -4.0 / (2.0 * h);
        j[(n, n - 2)] = 1.0 / (2.0 * h);
        match self.mode {
            Mode::Plain => {}
            Mode::Translation => {
                for i in 0..=n {
                    j[(n + 1, i)] = self.weights[i] * self.sin[i];
                }
            }
            Mode::Scaling => j[(n + 1, self.mid)] = 1.0,
        }
        j
    }

    fn admissible(&self, x: &[f64]) -> bool {
        let u = &x[..=self.bvp.n];
        u.iter().all(|v| *v > 0.0) && self.convexity(u).iter().all(|v| *v > 0.0)
    }
}

/// Norm of the undivided rows `u″ + u − (φ + shift) u^{p−1}`, relative to
/// `max(1, max|u|)`: rounding in the second difference alone leaves
/// `~ε·max|u|/h²`, and the divided rows would amplify it by `u^{1−p}`.
fn equation_norm(r: &[f64], x: &[f64], p: f64, n: usize) -> f64 {
    let u = &x[..=n];
    let worst = r
        .iter()
        .enumerate()
        .map(|(i, ri)| {
            if (1..n).contains(&i) {
                ri * u[i].powf(p - 1.0)
            } else {
                *ri
            }
        })
        .map(f64::abs)
        .fold(0.0, f64::max);
    worst / max_norm(u).max(1.0)
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Damped Newton from `initial` (the default guess when `None`).
pub fn solve(bvp: &CapillaryBVP, initial: Option<&[f64]>) -> Result<SolveResult> {
    let guess = match initial {
        Some(u) if u.len() == bvp.n + 1 => u.to_vec(),
        Some(u) => {
            return domain(format!(
                "initial guess has {} values, the grid has {}",
                u.len(),
                bvp.n + 1
            ))
        }
        None => bvp.default_guess(),
    };
    let sys = System::new(bvp, &guess);
    let mut x = guess;
    if sys.mode != Mode::Plain {
        x.push(0.0);
    }
    if !sys.admissible(&x) {
        return Err(Error::Convexity(
            "initial guess is not positive and strictly convex".into(),
        ));
    }
    let ctl = bvp.controls;
    let mut r = sys.residual(&x);
    let p = bvp.p;
    // Newton works on the divided rows, which have the wider basin; the
    // merit is their max-norm, convergence is judged on the undivided rows.
    let mut merit = max_norm(&r);
    let mut norm = equation_norm(&r, &x, p, bvp.n);
    let mut iterations = 0;
    let mut polish = 2;
    while iterations < ctl.max_iterations {
        if norm <= ctl.tolerance {
            if polish == 0 {
                break;
            }
            polish -= 1;
        }
        iterations += 1;
        let j = sys.jacobian(&x);
        let rhs = -DVector::from_vec(r.clone());
        let dx = j.lu().solve(&rhs).ok_or_else(|| Error::NonConvergence {
            iterations,
            residual: norm,
        })?;
        let mut alpha = 1.0;
        let mut accepted = None;
        let mut stalled = false;
        while alpha >= ctl.min_step {
            let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, d)| a + alpha * d).collect();
            if sys.admissible(&trial) {
                stalled = true;
                let rt = sys.residual(&trial);
                let mt = max_norm(&rt);
                let nt = equation_norm(&rt, &trial, p, bvp.n);
                let decrease = 1.0 - 1e-4 * alpha;
                if mt <= decrease * merit || nt <= decrease * norm || (norm <= ctl.tolerance && nt <= norm) {
                    accepted = Some((trial, rt, mt, nt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((t, rt, mt, nt)) => {
                x = t;
                r = rt;
                merit = mt;
                norm = nt;
            }
            None if norm <= ctl.tolerance => break,
            // Admissible steps exist but none reduces the residual: rounding floor.
            None if stalled => {
                return Err(Error::NonConvergence {
                    iterations,
                    residual: norm,
                })
            }
            None => {
                return Err(Error::Convexity(format!(
                    "no admissible Newton step down to damping {} (residual {norm:.3e})",
                    ctl.min_step
                )))
            }
        }
    }
    if norm > ctl.tolerance {
        return Err(Error::NonConvergence {
            iterations,
            residual: norm,
        });
    }
    let n = bvp.n;
    let u = x[..=n].to_vec();
    let min_convexity = sys.convexity(&u).into_iter().fold(f64::INFINITY, f64::min);
    Ok(SolveResult {
        border: (sys.mode != Mode::Plain).then(|| x[n + 1]),
        u,
        residual: norm,
        iterations,
        min_convexity,
        converged: true,
    })
}

/// Amplitudes `(a, c)` of the manufactured solution. Scaling with `sin θ`
/// and `θ²` keeps `u* > 0` and `u*″ + u* > 0.75` for every `θ ∈ (0, π)`.
fn manufactured_amplitudes(theta: f64) -> (f64, f64) {
    (0.1 * theta.sin(), 0.05 * theta * theta)
}

/// Closed-form test solution
/// `u*(t) = g(t) + a sin t + c·b(t)(1 + t/(2θ))`, `b = ((t² − θ²)/θ²)²`,
/// with `(u*, u*″)` returned. Both Robin conditions hold exactly.
pub fn manufactured_solution(theta: f64, t: f64) -> (f64, f64) {
    let (a, c) = manufactured_amplitudes(theta);
    let ct = theta.cos();
    let s = t / theta;
    let b = (s * s - 1.0).powi(2);
    let db = 4.0 * s * (s * s - 1.0) / theta;
    let d2b = (12.0 * s * s - 4.0) / (theta * theta);
    let m = 1.0 + 0.5 * s;
    let dm = 0.5 / theta;
    let u = 1.0 - ct * t.cos() + a * t.sin() + c * b * m;
    let d2u = ct * t.cos() - a * t.sin() + c * (d2b * m + 2.0 * db * dm);
    (u, d2u)
}

pub fn manufactured_derivative(theta: f64, t: f64) -> f64 {
    let (a, c) = manufactured_amplitudes(theta);
    let s = t / theta;
    let b = (s * s - 1.0).powi(2);
    let db = 4.0 * s * (s * s - 1.0) / theta;
    theta.cos() * t.sin() + a * t.cos() + c * (db * (1.0 + 0.5 * s) + b * 0.5 / theta)
}

/// `φ = (u*″ + u*)·u*^{1−p}` on the grid, and `u*` itself.
pub fn manufactured_rhs(theta: f64, p: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let cot = 1.0 / theta.tan();
    for (t, sign) in [(theta, 1.0), (-theta, -1.0)] {
        let (u, _) = manufactured_solution(theta, t);
        let robin = sign * manufactured_derivative(theta, t) - cot * u;
        if robin.abs() > 1e-10 {
            return domain(format!(
                "manufactured solution violates the Robin condition by {robin:.3e}"
            ));
        }
    }
    let mut phi = Vec::with_capacity(n + 1);
    let mut ustar = Vec::with_capacity(n + 1);
    for t in nodes(theta, n) {
        let (u, d2u) = manufactured_solution(theta, t);
        if !(u > 0.0 && d2u + u > 0.0) {
            return domain(format!(
                "manufactured solution is not positive and convex at t = {t:.4} for θ = {theta}"
            ));
        }
        phi.push((d2u + u) * u.powf(1.0 - p));
        ustar.push(u);
    }
    Ok((phi, ustar))
}

/// Brings a solution into the comparison class of its mode: unchanged for
/// generic `p`, gauge-projected for `p = 1`, normalized to `u(0) = 1` for `p = 2`.
pub fn normalize(bvp: &CapillaryBVP, u: &[f64]) -> Vec<f64> {
    match bvp.mode() {
        Mode::Plain => u.to_vec(),
        Mode::Scaling => {
            let m = u[bvp.n / 2];
            u.iter().map(|v| v / m).collect()
        }
        Mode::Translation => {
            let sys = System::new(bvp, u);
            let ss: f64 = (0..=bvp.n).map(|i| sys.weights[i] * sys.sin[i] * sys.sin[i]).sum();
            let su: f64 = (0..=bvp.n).map(|i| sys.weights[i] * sys.sin[i] * u[i]).sum();
            u.iter().zip(&sys.sin).map(|(v, s)| v - su / ss * s).collect()
        }
    }
}

pub const DEFAULT_SIZES: [usize; 3] = [64, 128, 256];

/// Max-node error against the manufactured solution over a grid ladder.
pub fn manufactured_convergence(theta: f64, p: f64, sizes: &[usize]) -> Result<CheckReport> {
    let mut ladder = Vec::new();
    let mut worst_residual = 0.0f64;
    let mut min_convexity = f64::INFINITY;
    for &n in sizes {
        let (phi, ustar) = manufactured_rhs(theta, p, n)?;
        let bvp = CapillaryBVP::new(theta, p, phi, SolverControls::default())?;
        let sol = solve(&bvp, None)?;
        worst_residual = worst_residual.max(sol.residual);
        min_convexity = min_convexity.min(sol.min_convexity);
        let a = normalize(&bvp, &sol.u);
        let b = normalize(&bvp, &ustar);
        let err = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        ladder.push(LadderRow {
            level: n as u32,
            h: bvp.h(),
            lhs: err,
            rhs: 0.0,
            residual: err,
        });
    }
    let mut r = CheckReport::new("minkowski-manufactured");
    r.scenario = Some(format!("p={p},theta={theta}"));
    let last = *ladder.last().ok_or_else(|| Error::Domain("no grid sizes".into()))?;
    r = r
        .sides(last.lhs, 0.0, 1.0)
        .criterion(Criterion::at_most("solve-residual", worst_residual, 1e-10))
        .criterion(Criterion::at_least("convexity", min_convexity, f64::MIN_POSITIVE));
    if ladder.len() >= 3 {
        let errors: Vec<f64> = ladder.iter().map(|x| x.residual).collect();
        let h: Vec<f64> = ladder.iter().map(|x| x.h).collect();
        let fit = fit_errors(&errors, &h, FD_FLOOR)?;
        r = r.criterion(Criterion::order("fitted-order", &fit, 1.8));
        r.fitted_order = Some(fit);
    }
    r.ladder = ladder;
    Ok(r.finish())
}

/// Differences between successive grids at shared nodes, `N` against `2N`.
pub fn self_convergence(theta: f64, p: f64, phi: &PhiSpec, sizes: &[usize]) -> Result<CheckReport> {
    let mut sols = Vec::new();
    let mut all = sizes.to_vec();
    if let Some(&last) = sizes.last() {
        all.push(2 * last);
    }
    for &n in &all {
        let bvp = CapillaryBVP::from_spec(theta, p, phi, n)?;
        let sol = solve(&bvp, None)?;
        sols.push((bvp.h(), normalize(&bvp, &sol.u)));
    }
    let mut ladder = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let (h, coarse) = &sols[i];
        let fine = &sols[i + 1].1;
        let d = coarse
            .iter()
            .enumerate()
            .map(|(j, v)| (v - fine[2 * j]).abs())
            .fold(0.0, f64::max);
        ladder.push(LadderRow {
            level: n as u32,
            h: *h,
            lhs: d,
            rhs: 0.0,
            residual: d,
        });
    }
    let mut r = CheckReport::new("minkowski-self-convergence");
    r.scenario = Some(format!("p={p},theta={theta},phi={}", phi.name()));
    let last = *ladder.last().ok_or_else(|| Error::Domain("no grid sizes".into()))?;
    r = r.sides(last.lhs, 0.0, 1.0);
    if ladder.len() >= 3 {
        let errors: Vec<f64> = ladder.iter().map(|x| x.residual).collect();
        let h: Vec<f64> = ladder.iter().map(|x| x.h).collect();
        let fit = fit_errors(&errors, &h, FD_FLOOR)?;
        r = r.criterion(Criterion::order("fitted-order", &fit, 1.8));
        r.fitted_order = Some(fit);
    } else {
        r = r.criterion(Criterion::at_most("difference", last.lhs, 1e-3));
    }
    r.ladder = ladder;
    Ok(r.finish())
}

/// Tolerance on the cluster diameter of the multi-start experiment.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Random positive convex start `A c₀ (g + β sin θ sin t)`.
fn random_start(bvp: &CapillaryBVP, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let amp = rng.random_range(0.1f64.ln()..10.0f64.ln()).exp();
    let beta = rng.random_range(-0.3..0.3);
    let base = bvp.default_guess();
    let g = bvp.base_profile();
    let c0 = base[bvp.n / 2] / g[bvp.n / 2];
    let st = bvp.theta.sin();
    bvp.nodes()
        .iter()
        .zip(&g)
        .map(|(t, g)| amp * c0 * (g + beta * st * t.sin()))
        .collect()
}

/// Multi-start uniqueness experiment. All converged solutions must agree
/// (after normalization for `p = 2`, in the translation gauge for `p = 1`);
/// for `p = 2` the starts must also land on visibly different members of
/// the scaling family. Fewer than two convergent starts is inconclusive.
pub fn uniqueness_experiment(bvp: &CapillaryBVP, starts: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inits: Vec<Vec<f64>> = (0..starts).map(|_| random_start(bvp, &mut rng)).collect();
    let outcomes = crate::par::map(&inits, |u0| solve(bvp, Some(u0)));
    let solutions: Vec<&SolveResult> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let normalized: Vec<Vec<f64>> = solutions.iter().map(|s| normalize(bvp, &s.u)).collect();
    let mut diameter = 0.0f64;
    for a in 0..normalized.len() {
        for b in a + 1..normalized.len() {
            let d = normalized[a]
                .iter()
                .zip(&normalized[b])
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            diameter = diameter.max(d);
        }
    }
    let mut r = CheckReport::new("minkowski-uniqueness");
    r.scenario = Some(format!("p={},theta={},N={}", bvp.p, bvp.theta, bvp.n));
    r = r
        .sides(diameter, 0.0, 1.0)
        .metric("starts", starts as f64)
        .metric("converged", solutions.len() as f64)
        .metric("seed", seed as f64);
    if solutions.len() < 2 {
        r.verdict = Verdict::Inconclusive;
        return Ok(r);
    }
    let worst = solutions.iter().map(|s| s.residual).fold(0.0, f64::max);
    r = r
        .criterion(Criterion::at_most("cluster-diameter", diameter, CLUSTER_TOL))
        .criterion(Criterion::at_most("solve-residual", worst, bvp.controls.tolerance));
    if bvp.mode() == Mode::Scaling {
        let mids: Vec<f64> = solutions.iter().map(|s| s.u[bvp.n / 2]).collect();
        let spread = mids.iter().copied().fold(0.0, f64::max) / mids.iter().copied().fold(f64::INFINITY, f64::min);
        let shift = solutions
            .iter()
            .filter_map(|s| s.border)
            .map(f64::abs)
            .fold(0.0, f64::max);
        r = r
            .criterion(Criterion::at_least("scale-spread", spread, 2.0))
            .metric("compatibility-shift", shift);
        r.f = Some("scaling-family".into());
    }
    Ok(r.finish())
}

/// For `p = 2`: if `u` solves then so does `c u`. Solves once from the
/// default guess and once from `c` times that solution.
pub fn scaling_family_check(bvp: &CapillaryBVP, c: f64) -> Result<CheckReport> {
    if bvp.mode() != Mode::Scaling {
        return domain("the scaling family exists only for p = 2");
    }
    let base = solve(bvp, None)?;
    let scaled: Vec<f64> = base.u.iter().map(|v| c * v).collect();
    let again = solve(bvp, Some(&scaled))?;
    let diff = again
        .u
        .iter()
        .zip(&scaled)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / max_norm(&scaled);
    let mut r = CheckReport::new("minkowski-scaling-family");
    r.scenario = Some(format!("p=2,theta={},N={},c={c}", bvp.theta, bvp.n));
    Ok(r.sides(diff, 0.0, 1.0)
        .criterion(Criterion::at_most("rescaled-solution", diff, CLUSTER_TOL))
        .criterion(Criterion::at_most("iterations", again.iterations as f64, 3.0))
        .finish())
}
