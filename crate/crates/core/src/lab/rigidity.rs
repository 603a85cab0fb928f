//! Pointwise curvature relations whose only solutions are capillary Wulff
//! shapes. Checked forward (the relation holds with explicit constants on
//! Wulff shapes) and as witnesses (it fails on perturbed surfaces).

use serde::{Deserialize, Serialize};

use crate::capillary::{CapillarySurface, PointState};
use crate::error::{domain, Result};
use crate::lab::catalog::Scenario;
use crate::lab::report::{CheckReport, Criterion};
use crate::lab::weights::{Monotonicity, WeightFunction, WeightKind};
use crate::symmetric::{binomial, elementary_symmetric};

/// Largest relative residual of a relation on a Wulff shape.
pub const FORWARD_TOL: f64 = 1e-8;
/// Smallest violation that counts as a witness on a non-Wulff surface.
pub const WITNESS_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// `Σ a_ij (H_i/H_j)^{1/(j−i)} = β ū` with uniform `a_ij`.
    Soliton,
    /// `Σ a_j(ū) H_j = Σ b_i(ū) H_i`.
    LinearCombination,
    /// `H_{s−1}^{1/(s−1)} ≥ c(ū) ≥ H_s^{1/s}`.
    CurvatureBounds,
    /// `H_{s−1}/H_s ≥ c(ū) ≥ H_{s−2}/H_{s−1}`.
    RatioBounds,
    /// `Σ_j (b_j(ū) H_j + c_j(ū) H_1 H_{j−1}) = η(ū)`.
    MixedCombination,
    /// `σ_k(1/κ) = C f(ū)`.
    ChristoffelMinkowski,
}

pub const RELATIONS: &[RelationKind] = &[
    RelationKind::Soliton,
    RelationKind::LinearCombination,
    RelationKind::CurvatureBounds,
    RelationKind::RatioBounds,
    RelationKind::MixedCombination,
    RelationKind::ChristoffelMinkowski,
];

impl RelationKind {
    pub fn name(&self) -> &'static str {
        match self {
            RelationKind::Soliton => "soliton",
            RelationKind::LinearCombination => "linear-combination",
            RelationKind::CurvatureBounds => "curvature-bounds",
            RelationKind::RatioBounds => "ratio-bounds",
            RelationKind::MixedCombination => "mixed-combination",
            RelationKind::ChristoffelMinkowski => "christoffel-minkowski",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        RELATIONS.iter().copied().find(|r| r.name() == s).map_or_else(
            || {
                let names: Vec<&str> = RELATIONS.iter().map(|r| r.name()).collect();
                domain(format!("unknown relation '{s}' (valid: {})", names.join(", ")))
            },
            Ok,
        )
    }

    /// Smallest `n` for which the relation is defined.
    pub fn min_n(&self) -> usize {
        match self {
            RelationKind::CurvatureBounds | RelationKind::RatioBounds => 2,
            _ => 1,
        }
    }
}

/// Coefficients of `Σ_{j=l}^r a_j(ū) H_j = Σ_{i=0}^{l−1} b_i(ū) H_i`, with
/// tags checked: `a_j` non-decreasing, `b_i` non-increasing, `b₀` constant.
#[derive(Debug, Clone)]
pub struct LinearRelation {
    pub l: usize,
    pub a: Vec<WeightFunction>,
    pub b: Vec<WeightFunction>,
}

impl LinearRelation {
    pub fn new(l: usize, a: Vec<WeightFunction>, b: Vec<WeightFunction>) -> Result<Self> {
        use Monotonicity::*;
        if l == 0 || b.len() != l || a.is_empty() {
            return domain("need 1 ≤ l, one b_i for each i < l and at least one a_j");
        }
        for w in &a {
            if !matches!(w.tag, NonDecreasing | Constant) {
                return domain(format!("coefficient '{}' must be tagged non-decreasing", w.name));
            }
        }
        for (i, w) in b.iter().enumerate() {
            let ok = if i == 0 {
                w.tag == Constant
            } else {
                matches!(w.tag, NonIncreasing | Constant)
            };
            if !ok {
                return domain(format!(
                    "coefficient '{}' of H_{i} must be tagged {}",
                    w.name,
                    if i == 0 { "constant" } else { "non-increasing" }
                ));
            }
        }
        Ok(Self { l, a, b })
    }

    pub fn r(&self) -> usize {
        self.l + self.a.len() - 1
    }

    pub fn verify_tags(&self, lo: f64, hi: f64) -> Result<()> {
        self.a.iter().chain(&self.b).try_for_each(|w| w.verify_tag(lo, hi))
    }

    fn sides(&self, s: &PointState) -> (f64, f64) {
        let lhs: f64 = self
            .a
            .iter()
            .enumerate()
            .map(|(i, w)| w.value(s.u_bar) * s.h(self.l + i))
            .sum();
        let rhs: f64 = self.b.iter().enumerate().map(|(i, w)| w.value(s.u_bar) * s.h(i)).sum();
        (lhs, rhs)
    }
}

/// The linear relation calibrated to hold on a Wulff shape of radius `r0`.
pub fn calibrated_linear_relation(n: usize, r0: f64) -> Result<LinearRelation> {
    use Monotonicity::*;
    let t = WeightFunction::new("t", WeightKind::Power { c: 1.0, p: 1.0 }, NonDecreasing);
    if n == 1 {
        // ū H₁ = 1
        let one = WeightFunction::new("1", WeightKind::Const { c: 1.0 }, Constant);
        return LinearRelation::new(1, vec![t], vec![one]);
    }
    // ū H₂ = ½ e^{−(ū−r₀)} H₁ + 1/(2r₀)
    let b1 = WeightFunction::new(
        "exp-decay",
        WeightKind::Exp {
            c: 0.5 * r0.exp(),
            rate: -1.0,
        },
        NonIncreasing,
    );
    let b0 = WeightFunction::new("b0", WeightKind::Const { c: 0.5 / r0 }, Constant);
    LinearRelation::new(2, vec![t], vec![b0, b1])
}

fn sigma_radii(kappa: &[f64], k: usize) -> f64 {
    let radii: Vec<f64> = kappa.iter().map(|x| 1.0 / x).collect();
    elementary_symmetric(&radii)[k]
}

/// Per-node relative residual of `kind` on `cs` with constants calibrated
/// from `r0`; for the bound relations, the relative bound violation.
fn node_residuals(kind: RelationKind, cs: &CapillarySurface, r0: f64) -> Result<Vec<f64>> {
    let n = cs.n();
    if n < kind.min_n() {
        return domain(format!("relation '{}' needs n ≥ {}", kind.name(), kind.min_n()));
    }
    let states = &cs.interior;
    Ok(match kind {
        RelationKind::Soliton => {
            let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
            let a = 1.0 / pairs.len() as f64;
            states
                .iter()
                .map(|s| {
                    let lhs: f64 = pairs
                        .iter()
                        .map(|&(i, j)| a * (s.h(i) / s.h(j)).powf(1.0 / (j - i) as f64))
                        .sum();
                    lhs / s.u_bar - 1.0
                })
                .collect()
        }
        RelationKind::LinearCombination => {
            let rel = calibrated_linear_relation(n, r0)?;
            let (lo, hi) = crate::lab::integral::u_range(cs);
            rel.verify_tags(lo, hi)?;
            states
                .iter()
                .map(|s| {
                    let (l, r) = rel.sides(s);
                    (l - r) / l.abs()
                })
                .collect()
        }
        RelationKind::CurvatureBounds => {
            let c = 1.0 / r0;
            states
                .iter()
                .map(|s| {
                    let upper = s.h(1);
                    let lower = s.h(2).sqrt();
                    signed_violation(upper, c, lower) / c
                })
                .collect()
        }
        RelationKind::RatioBounds => states
            .iter()
            .map(|s| {
                let c = s.u_bar;
                signed_violation(s.h(1) / s.h(2), c, 1.0 / s.h(1)) / c
            })
            .collect(),
        RelationKind::MixedCombination => states
            .iter()
            .map(|s| {
                let t = s.u_bar;
                let lhs: f64 = (1..=n).map(|j| t.powi(j as i32) * (s.h(j) + s.h(1) * s.h(j - 1))).sum();
                let eta = 2.0 * n as f64 * r0 / t;
                lhs / eta - 1.0
            })
            .collect(),
        RelationKind::ChristoffelMinkowski => states
            .iter()
            .map(|s| {
                (1..=n)
                    .map(|k| sigma_radii(&s.curv.kappa, k) / (binomial(n, k) * s.u_bar.powi(k as i32)) - 1.0)
                    .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m })
            })
            .collect(),
    })
}

/// For `upper ≥ c ≥ lower`: zero when both hold with equality, otherwise the
/// larger of `|upper − c|`, `|c − lower|`, signed negative when a bound fails.
pub fn signed_violation(upper: f64, c: f64, lower: f64) -> f64 {
    let fail = (c - upper).max(lower - c);
    if fail > 0.0 {
        -fail
    } else {
        (upper - c).abs().max((c - lower).abs())
    }
}

/// Forward check on Wulff shapes, violation witness elsewhere.
pub fn rigidity(scn: &Scenario, kind: RelationKind, level: u32) -> Result<CheckReport> {
    let r0 = scn
        .radius()
        .ok_or_else(|| crate::error::Error::Domain(format!("scenario '{}' has no Wulff radius", scn.name)))?;
    let cs = scn.build(level)?;
    let values = node_residuals(kind, &cs, r0)?;
    let worst = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut r = CheckReport::new("rigidity").sides(worst, 0.0, 1.0);
    r.scenario = Some(scn.name.clone());
    r.surface = Some(cs.describe());
    r.norm = Some(cs.context.norm.describe());
    r.omega0 = Some(cs.context.omega0);
    r.level = Some(level);
    r.f = Some(kind.name().to_string());
    let bounds = matches!(kind, RelationKind::CurvatureBounds | RelationKind::RatioBounds);
    let witness = if bounds {
        values.iter().map(|v| -v).fold(0.0, f64::max)
    } else if kind == RelationKind::Soliton {
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    } else {
        worst
    };
    r = r.metric("witness", witness).metric("r0", r0);
    r = if scn.has_constant_support() {
        r.criterion(Criterion::at_most("forward-residual", worst, FORWARD_TOL))
    } else {
        r.criterion(Criterion::at_least("violation", witness, WITNESS_MIN))
    };
    Ok(r.finish())
}
