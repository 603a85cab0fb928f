//! Seeded property sweeps of the algebraic inequalities between normalized
//! elementary symmetric functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lab::report::{CheckReport, Criterion};
use crate::symmetric::{newton_maclaurin_sides, SymmetricFunctions};

/// Relative slack for violations and equality detection.
pub const SWEEP_TOL: f64 = 1e-12;
/// Every `EQUAL_EVERY`-th instance has equal entries.
const EQUAL_EVERY: usize = 10;

/// Admissible `(k, l, r, s)`: `k > l ≥ 0`, `r > s ≥ 0`, `k ≥ r`, `l ≥ s`, `k ≤ n`.
pub fn admissible_tuples(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=n {
        for l in 0..k {
            for r in 1..=k {
                for s in 0..r.min(l + 1) {
                    out.push((k, l, r, s));
                }
            }
        }
    }
    out
}

fn random_kappa(rng: &mut ChaCha8Rng, n: usize, equal: bool) -> Vec<f64> {
    if equal {
        vec![rng.random_range(-2.0f64..2.0).exp(); n]
    } else {
        (0..n).map(|_| rng.random_range(-2.0f64..2.0).exp()).collect()
    }
}

/// Tallies of a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepCounts {
    pub instances: usize,
    pub comparisons: usize,
    pub violations: usize,
    pub equal_instances: usize,
    /// Equal-entry comparisons that were not detected as equalities.
    pub missed_equalities: usize,
    /// Non-degenerate comparisons on unequal entries that looked like equalities.
    pub spurious_equalities: usize,
}

impl SweepCounts {
    fn into_report(self, id: &str, seed: u64) -> CheckReport {
        let mut r = CheckReport::new(id).sides(self.violations as f64, 0.0, 1.0);
        r.scenario = Some(format!("seed-{seed}"));
        r.criterion(Criterion::at_most("violations", self.violations as f64, 0.0))
            .criterion(Criterion::at_most(
                "missed-equalities",
                self.missed_equalities as f64,
                0.0,
            ))
            .criterion(Criterion::at_most(
                "spurious-equalities",
                self.spurious_equalities as f64,
                0.0,
            ))
            .criterion(Criterion::at_least("equal-instances", self.equal_instances as f64, 1.0))
            .metric("instances", self.instances as f64)
            .metric("comparisons", self.comparisons as f64)
            .finish()
    }
}

/// `(H_k/H_l)^{1/(k−l)} ≤ (H_r/H_s)^{1/(r−s)}` over random positive `κ`
/// with `n` cycling through `1..=4` and every admissible index tuple.
pub fn newton_maclaurin_sweep(seed: u64, count: usize) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = SweepCounts::default();
    for i in 0..count {
        let n = 1 + i % 4;
        let equal = i % EQUAL_EVERY == 0;
        let kappa = random_kappa(&mut rng, n, equal);
        let h = SymmetricFunctions::of(&kappa).h;
        c.instances += 1;
        c.equal_instances += usize::from(equal);
        for (k, l, r, s) in admissible_tuples(n) {
            let (lhs, rhs) = newton_maclaurin_sides(&h, k, l, r, s);
            c.comparisons += 1;
            let slack = SWEEP_TOL * rhs.abs().max(lhs.abs());
            if lhs > rhs + slack {
                c.violations += 1;
            }
            let is_equal = (lhs - rhs).abs() <= slack;
            let trivial = (k, l) == (r, s) || n == 1;
            if equal && !is_equal {
                c.missed_equalities += 1;
            }
            if !equal && !trivial && is_equal {
                c.spurious_equalities += 1;
            }
        }
    }
    c.into_report("newton-maclaurin", seed)
}

/// Both sides of the mixed-curvature inequality
/// `Σ_{j=l}^r a_j H_{j−1} ≥ b₀/H₁ + Σ_{i=1}^{l−1} b_i H_{i−1}`.
pub fn mixed_curvature_sides(h: &[f64], a: &[f64], b: &[f64], l: usize) -> (f64, f64) {
    let lhs: f64 = a.iter().enumerate().map(|(i, aj)| aj * h[l + i - 1]).sum();
    let rhs = b[0] / h[1] + b.iter().enumerate().skip(1).map(|(i, bi)| bi * h[i - 1]).sum::<f64>();
    (lhs, rhs)
}

/// Residual of the constraint `Σ a_j H_j = Σ b_i H_i`.
pub fn mixed_curvature_constraint(h: &[f64], a: &[f64], b: &[f64], l: usize) -> f64 {
    let left: f64 = a.iter().enumerate().map(|(i, aj)| aj * h[l + i]).sum();
    let right: f64 = b.iter().enumerate().map(|(i, bi)| bi * h[i]).sum();
    left - right
}

/// The mixed-curvature inequality over random `κ ∈ Γ_r` and random
/// nonnegative coefficients, with `b` rescaled to satisfy the constraint.
/// Instances cycle through three coefficient patterns: `b₀ = 0`, only `b₀`,
/// and all `b_i` random.
pub fn mixed_curvature_sweep(seed: u64, count: usize) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = SweepCounts::default();
    for i in 0..count {
        let n = 1 + i % 4;
        let equal = i % EQUAL_EVERY == 0;
        let kappa = random_kappa(&mut rng, n, equal);
        let h = SymmetricFunctions::of(&kappa).h;
        let r = rng.random_range(1..=n);
        let l = rng.random_range(1..=r);
        let mut a: Vec<f64> = (l..=r)
            .map(|_| {
                if rng.random_bool(0.25) {
                    0.0
                } else {
                    rng.random_range(0.0..1.0)
                }
            })
            .collect();
        if a.iter().all(|x| *x == 0.0) {
            let j = rng.random_range(0..a.len());
            a[j] = 1.0;
        }
        let pattern = if l == 1 { 1 } else { (i / EQUAL_EVERY) % 3 };
        let mut b: Vec<f64> = (0..l)
            .map(|idx| match (pattern, idx) {
                (0, 0) => 0.0,
                (1, 0) => 1.0,
                (1, _) => 0.0,
                _ => rng.random_range(0.0..1.0),
            })
            .collect();
        if b.iter().all(|x| *x == 0.0) {
            b[l - 1] = 1.0;
        }
        let target: f64 = a.iter().enumerate().map(|(i, aj)| aj * h[l + i]).sum();
        let current: f64 = b.iter().enumerate().map(|(i, bi)| bi * h[i]).sum();
        for bi in &mut b {
            *bi *= target / current;
        }
        let (lhs, rhs) = mixed_curvature_sides(&h, &a, &b, l);
        c.instances += 1;
        c.comparisons += 1;
        c.equal_instances += usize::from(equal);
        let slack = SWEEP_TOL * lhs.abs().max(rhs.abs());
        if lhs < rhs - slack {
            c.violations += 1;
        }
        let is_equal = (lhs - rhs).abs() <= slack * 100.0;
        // Only a_j with j ≥ 2 make the inequality strict on unequal entries.
        let degenerate = n == 1 || a.iter().enumerate().all(|(i, aj)| l + i < 2 || *aj == 0.0);
        if equal && !is_equal {
            c.missed_equalities += 1;
        }
        if !equal && !degenerate && is_equal {
            c.spurious_equalities += 1;
        }
    }
    c.into_report("mixed-curvature-inequality", seed)
}
