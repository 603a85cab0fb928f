//! Check reports and the tolerance policy that decides their verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::quadrature::FittedOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// One quantitative requirement of a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub passed: bool,
}

impl Criterion {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtMost,
            bound,
            passed: value <= bound,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtLeast,
            bound,
            passed: value >= bound,
        }
    }

    /// A fitted-order requirement; an exact ladder passes.
    pub fn order(name: impl Into<String>, fit: &FittedOrder, min: f64) -> Self {
        Self {
            name: name.into(),
            value: fit.value().unwrap_or(f64::MAX),
            relation: Relation::AtLeast,
            bound: min,
            passed: fit.at_least(min),
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::at_least(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Not enough evidence either way (e.g. too few convergent solver starts).
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub level: u32,
    pub h: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub ladder: Vec<LadderRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_order: Option<FittedOrder>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub metrics: BTreeMap<String, f64>,
    pub criteria: Vec<Criterion>,
    pub verdict: Verdict,
    /// Set when the check could not be evaluated; the verdict is then `Fail`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            scenario: None,
            surface: None,
            norm: None,
            omega0: None,
            k: None,
            f: None,
            level: None,
            lhs: 0.0,
            rhs: 0.0,
            abs_residual: 0.0,
            rel_residual: 0.0,
            ladder: vec![],
            fitted_order: None,
            metrics: BTreeMap::new(),
            criteria: vec![],
            verdict: Verdict::Fail,
            error: None,
        }
    }

    /// A failed report for a check that raised an error.
    pub fn errored(id: impl Into<String>, scenario: Option<String>, error: impl std::fmt::Display) -> Self {
        let mut r = Self::new(id);
        r.scenario = scenario;
        r.error = Some(error.to_string());
        r
    }

    pub fn sides(mut self, lhs: f64, rhs: f64, scale: f64) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self.abs_residual = (lhs - rhs).abs();
        self.rel_residual = if scale > 0.0 {
            self.abs_residual / scale
        } else {
            self.abs_residual
        };
        self
    }

    pub fn metric(mut self, name: &str, value: f64) -> Self {
        self.metrics.insert(name.to_string(), value);
        self
    }

    pub fn criterion(mut self, c: Criterion) -> Self {
        self.criteria.push(c);
        self
    }

    /// Recomputes the verdict from the recorded criteria.
    pub fn finish(mut self) -> Self {
        self.verdict = verdict_of(&self.criteria);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Stable key used to order merged reports.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}",
            self.id,
            self.scenario.as_deref().unwrap_or(""),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            self.f.as_deref().unwrap_or(""),
            self.level.map(|l| l.to_string()).unwrap_or_default()
        )
    }
}

/// Pass iff every criterion passed and there is at least one.
pub fn verdict_of(criteria: &[Criterion]) -> Verdict {
    if !criteria.is_empty() && criteria.iter().all(|c| c.passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Tolerances shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TolerancePolicy {
    /// Lower bound on the identity tolerance.
    pub floor: f64,
    /// Multiplier on the ladder's quadrature-error estimate.
    pub estimate_factor: f64,
    /// Relative tolerance for equality cases.
    pub equality: f64,
    /// Bound on boundary-lemma residuals.
    pub boundary: f64,
    /// Minimal fitted order for quadrature-limited ladders.
    pub quadrature_order: f64,
    /// Minimal fitted order for finite-difference-limited ladders.
    pub fd_order: f64,
    /// Required strictness of inequality gaps, in multiples of the tolerance.
    pub strictness: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            floor: 1e-6,
            estimate_factor: 10.0,
            equality: 1e-6,
            boundary: 1e-8,
            quadrature_order: 1.8,
            fd_order: 0.9,
            strictness: 10.0,
        }
    }
}

impl TolerancePolicy {
    /// `max(floor, factor · estimate)`.
    pub fn identity_tolerance(&self, estimate: f64) -> f64 {
        self.floor.max(self.estimate_factor * estimate)
    }
}
