//! Weight functions `f(ū)` with a declared, sampled-and-verified monotonicity.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Constant,
    NonDecreasing,
    NonIncreasing,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightKind {
    /// `c`
    Const { c: f64 },
    /// `c tᵖ`
    Power { c: f64, p: f64 },
    /// `c e^{rate·t}`
    Exp { c: f64, rate: f64 },
    /// `s · ln(1 + e^{(t − c)/s})`, a smoothed `(t − c)₊`.
    Softplus { c: f64, s: f64 },
    /// `(t − c)²`
    Quadratic { c: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub name: String,
    pub kind: WeightKind,
    pub tag: Monotonicity,
}

pub const CATALOG: &[&str] = &["const", "u", "u2", "exp-neg-u", "softplus", "sq-dist"];

impl WeightFunction {
    pub fn new(name: &str, kind: WeightKind, tag: Monotonicity) -> Self {
        Self {
            name: name.to_string(),
            kind,
            tag,
        }
    }

    pub fn named(name: &str) -> Result<Self> {
        use Monotonicity::*;
        use WeightKind::*;
        Ok(match name {
            "const" => Self::new(name, Const { c: 1.0 }, Constant),
            "u" => Self::new(name, Power { c: 1.0, p: 1.0 }, NonDecreasing),
            "u2" => Self::new(name, Power { c: 1.0, p: 2.0 }, NonDecreasing),
            "exp-neg-u" => Self::new(name, Exp { c: 1.0, rate: -1.0 }, NonIncreasing),
            "softplus" => Self::new(name, Softplus { c: 1.0, s: 0.1 }, NonDecreasing),
            "sq-dist" => Self::new(name, Quadratic { c: 1.0 }, Neither),
            other => {
                return domain(format!(
                    "unknown weight function '{other}' (valid: {})",
                    CATALOG.join(", ")
                ))
            }
        })
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Const { c } => c,
            WeightKind::Power { c, p } => c * t.powf(p),
            WeightKind::Exp { c, rate } => c * (rate * t).exp(),
            WeightKind::Softplus { c, s } => {
                let x = (t - c) / s;
                // ln(1 + e^x) without overflow
                s * (x.max(0.0) + (-x.abs()).exp().ln_1p())
            }
            WeightKind::Quadratic { c } => (t - c) * (t - c),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self.kind {
            WeightKind::Const { .. } => 0.0,
            WeightKind::Power { c, p } => {
                if p == 0.0 {
                    0.0
                } else {
                    c * p * t.powf(p - 1.0)
                }
            }
            WeightKind::Exp { c, rate } => c * rate * (rate * t).exp(),
            WeightKind::Softplus { c, s } => 1.0 / (1.0 + (-(t - c) / s).exp()),
            WeightKind::Quadratic { c } => 2.0 * (t - c),
        }
    }

    /// Monotonicity observed from 257 samples of `f′` on `[lo, hi]`.
    pub fn sampled_monotonicity(&self, lo: f64, hi: f64) -> Monotonicity {
        let tol = 1e-14;
        let (mut pos, mut neg) = (false, false);
        for i in 0..=256 {
            let t = if hi > lo { lo + (hi - lo) * i as f64 / 256.0 } else { lo };
            let d = self.derivative(t);
            pos |= d > tol;
            neg |= d < -tol;
        }
        match (pos, neg) {
            (false, false) => Monotonicity::Constant,
            (true, false) => Monotonicity::NonDecreasing,
            (false, true) => Monotonicity::NonIncreasing,
            (true, true) => Monotonicity::Neither,
        }
    }

    /// Verifies the declared tag on `[lo, hi]`: a declared monotonicity must
    /// be compatible with the sampled one.
    pub fn verify_tag(&self, lo: f64, hi: f64) -> Result<()> {
        use Monotonicity::*;
        let seen = self.sampled_monotonicity(lo, hi);
        let ok = match self.tag {
            Constant => seen == Constant,
            NonDecreasing => matches!(seen, Constant | NonDecreasing),
            NonIncreasing => matches!(seen, Constant | NonIncreasing),
            Neither => true,
        };
        if ok {
            Ok(())
        } else {
            domain(format!(
                "weight '{}' is tagged {:?} but f′ on [{lo:.4}, {hi:.4}] is {:?}",
                self.name, self.tag, seen
            ))
        }
    }
}
