//! Acceptance suite: one pass/fail line per criterion, at the stated
//! tolerances. Runs without the libtest harness so the lines always show.

use std::process::Command;
use std::time::Instant;

use anisocap_core::lab::algebraic::{mixed_curvature_sweep, newton_maclaurin_sweep};
use anisocap_core::lab::catalog::{named_scenarios, scenario, Scenario, SurfaceSpec};
use anisocap_core::lab::integral::*;
use anisocap_core::lab::rigidity::{rigidity, RelationKind};
use anisocap_core::lab::{CheckReport, TolerancePolicy, WeightFunction};
use anisocap_core::minkowski::*;
use anisocap_core::norm::NormSpec;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            detail: String::new(),
        }
    }

    fn note(&mut self, ok: bool, text: impl AsRef<str>) {
        self.pass &= ok;
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        if !ok {
            self.detail.push_str("FAILED ");
        }
        self.detail.push_str(text.as_ref());
    }

    fn report(&mut self, r: &anisocap_core::Result<CheckReport>, label: impl AsRef<str>) -> Option<CheckReport> {
        match r {
            Ok(r) => {
                if !r.passed() {
                    let bad: Vec<String> = r
                        .criteria
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| format!("{}={:.3e} vs {:.1e}", c.name, c.value, c.bound))
                        .collect();
                    self.note(false, format!("{} [{}]", label.as_ref(), bad.join(", ")));
                }
                Some(r.clone())
            }
            Err(e) => {
                self.note(false, format!("{}: {e}", label.as_ref()));
                None
            }
        }
    }
}

fn policy() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn f(name: &str) -> WeightFunction {
    WeightFunction::named(name).unwrap()
}

fn capillary() -> Vec<Scenario> {
    named_scenarios().into_iter().filter(|s| !s.is_closed()).collect()
}

fn wulff_caps() -> Vec<Scenario> {
    capillary().into_iter().filter(|s| s.has_constant_support()).collect()
}

fn perturbed() -> Vec<Scenario> {
    capillary()
        .into_iter()
        .filter(|s| matches!(s.surface, SurfaceSpec::PerturbedCapillary { .. }))
        .collect()
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let s = scenario("ellipsoid-wulff-cap").unwrap();
    let setup = matches!(&s.norm.spec, NormSpec::Ellipsoid { m } if *m == vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 4.0]])
        && s.surface == SurfaceSpec::CapillaryWulff { r0: 1.0, omega0: -0.3 }
        && s.dim() == 3;
    o.note(setup, "M=diag(1,1,4), r0=1, omega0=-0.3, n=2");
    for k in [0, 1] {
        let t = Instant::now();
        let r = hsiung_minkowski(&s, &f("const"), k, &[4], &policy());
        let secs = t.elapsed().as_secs_f64();
        if let Some(r) = o.report(&r, format!("k={k}")) {
            o.note(
                r.rel_residual <= 1e-6 && secs <= 10.0,
                format!("k={k} rel={:.2e} in {secs:.2}s", r.rel_residual),
            );
        }
    }
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let s = scenario("ellipsoid-perturbed-cap").unwrap();
    for name in ["u", "u2", "exp-neg-u"] {
        for k in [0, 1] {
            let r = hsiung_minkowski(&s, &f(name), k, &[3, 4, 5], &policy());
            if let Some(r) = o.report(&r, format!("f={name} k={k}")) {
                let fit = r.fitted_order.clone().unwrap();
                let ok = fit.at_least(1.8) && r.level == Some(5) && r.rel_residual <= 1e-5;
                o.note(ok, format!("f={name} k={k} order={fit} L5 rel={:.2e}", r.rel_residual));
            }
        }
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let s = scenario("closed-ellipsoid-harmonic").unwrap();
    o.note(
        matches!(s.norm.spec, NormSpec::Harmonic { .. }) && s.is_closed(),
        "closed ellipsoid, harmonic norm",
    );
    for k in [0, 1] {
        let r = hsiung_minkowski(&s, &f("const"), k, &[4], &policy());
        if let Some(r) = o.report(&r, format!("k={k}")) {
            o.note(r.rel_residual <= 1e-6, format!("k={k} rel={:.2e}", r.rel_residual));
        }
    }
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let mut worst = 0.0f64;
    let surfaces = capillary();
    for s in &surfaces {
        let r = boundary_lemmas(s, 4, &policy());
        if let Some(r) = o.report(&r, &s.name) {
            worst = worst.max(r.abs_residual);
        }
    }
    o.note(
        worst <= 1e-8,
        format!("{} surfaces, worst residual {worst:.2e}", surfaces.len()),
    );
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let mut min_order = f64::INFINITY;
    let mut worst = 0.0f64;
    let mut count = 0;
    for s in perturbed() {
        let n = s.dim() - 1;
        let mut reports = Vec::new();
        for k in 0..n {
            reports.push(divergence_identity(&s, k, &[2, 3, 4], &policy()));
        }
        reports.push(gradient_identity(&s, &[2, 3, 4], &policy()));
        for r in &reports {
            if let Some(r) = o.report(r, &s.name) {
                count += 1;
                let order = r.fitted_order.as_ref().and_then(|f| f.value()).unwrap_or(f64::INFINITY);
                min_order = min_order.min(order);
                if r.id == "divergence-identity" {
                    worst = worst.max(r.rel_residual);
                }
            }
        }
    }
    o.note(
        min_order >= 0.9 && worst <= 1e-6,
        format!("{count} ladders, min FD order {min_order:.2}, worst integrated residual {worst:.2e}"),
    );
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let mut worst_eq = 0.0f64;
    let wulff: Vec<Scenario> = named_scenarios().into_iter().filter(|s| s.is_wulff()).collect();
    for s in &wulff {
        if let Some(r) = o.report(&heintze_karcher(s, &[4], &policy()), &s.name) {
            worst_eq = worst_eq.max(r.metrics["gap"].abs());
        }
    }
    o.note(
        worst_eq <= 1e-6,
        format!("equality on {} Wulff shapes, worst gap {worst_eq:.2e}", wulff.len()),
    );
    for name in ["perturbed-cap", "ellipsoid-perturbed-cap"] {
        let s = scenario(name).unwrap();
        if let Some(r) = o.report(&heintze_karcher(&s, &[4], &policy()), name) {
            let gap = r.metrics["gap"];
            o.note(gap >= 1e-4, format!("{name} gap {gap:.2e}"));
        }
    }
    let h = scenario("hemisphere").unwrap();
    if let Some(r) = o.report(&heintze_karcher(&h, &[4], &policy()), "hemisphere") {
        let two_pi = 2.0 * std::f64::consts::PI;
        let err = (r.lhs - two_pi).abs().max((r.rhs - two_pi).abs());
        o.note(err <= 1e-6, format!("hemisphere |value - 2pi| = {err:.2e}"));
    }
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    for r in [
        newton_maclaurin_sweep(20240607, 10_000),
        mixed_curvature_sweep(20240607, 10_000),
    ] {
        let m = |k: &str| {
            r.criteria
                .iter()
                .find(|c| c.name == k)
                .map(|c| c.value)
                .unwrap_or(f64::NAN)
        };
        let ok = r.passed() && r.metrics["instances"] == 10_000.0;
        o.note(
            ok,
            format!(
                "{}: {} instances, {} violations, {} missed / {} spurious equalities over {} equal-entry instances",
                r.id,
                r.metrics["instances"],
                m("violations"),
                m("missed-equalities"),
                m("spurious-equalities"),
                m("equal-instances")
            ),
        );
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let mut strict = 0;
    let mut min_ratio = f64::INFINITY;
    for s in perturbed() {
        let n = s.dim() - 1;
        for name in ["u", "exp-neg-u"] {
            for k in 0..n {
                let r = minkowski_corollary(&s, &f(name), k, 4, &policy());
                if let Some(r) = o.report(&r, format!("{} f={name} k={k}", s.name)) {
                    let d = r.metrics["difference"];
                    let tol = r.metrics["tolerance"];
                    let right_sign = if name == "u" { d < 0.0 } else { d > 0.0 };
                    o.pass &= right_sign;
                    min_ratio = min_ratio.min(d.abs() / tol);
                    strict += 1;
                }
            }
        }
    }
    o.note(
        min_ratio >= 10.0,
        format!("{strict} strict sign tests, min |D|/tol = {min_ratio:.1}"),
    );
    let mut worst = 0.0f64;
    let caps = wulff_caps();
    for s in &caps {
        let r = minkowski_corollary(s, &f("u"), 0, 4, &policy());
        if let Some(r) = o.report(&r, &s.name) {
            worst = worst.max(r.metrics["difference"].abs());
        }
    }
    o.note(
        worst <= 1e-6,
        format!("equality on {} Wulff shapes, worst |D| {worst:.2e}", caps.len()),
    );
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let caps = wulff_caps();
    let mut worst = 0.0f64;
    let mut worst_spread = 0.0f64;
    for s in &caps {
        if let Some(r) = o.report(&rigidity(s, RelationKind::Soliton, 4), &s.name) {
            worst = worst.max(r.abs_residual);
        }
        if let Some(r) = o.report(&support_constancy(s, 4), &s.name) {
            worst_spread = worst_spread.max(r.rel_residual);
        }
    }
    o.note(
        worst <= 1e-8,
        format!("soliton beta=1 on {} Wulff shapes, worst {worst:.2e}", caps.len()),
    );
    o.note(
        worst_spread <= 1e-8,
        format!("u-bar stdev/mean on Wulff shapes <= {worst_spread:.2e}"),
    );
    let mut min_spread = f64::INFINITY;
    let mut count = 0;
    for s in perturbed() {
        if let SurfaceSpec::PerturbedCapillary { eps, .. } = s.surface {
            if eps >= 0.02 {
                if let Some(r) = o.report(&support_constancy(&s, 4), &s.name) {
                    min_spread = min_spread.min(r.rel_residual);
                    count += 1;
                }
            }
        }
    }
    o.note(
        min_spread >= 1e-3,
        format!("{count} perturbations, min stdev/mean {min_spread:.2e}"),
    );
    o
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let theta = 1.0472;
    for p in [1.0, 2.0, 3.0] {
        if let Some(r) = o.report(&manufactured_convergence(theta, p, &[64, 128, 256]), format!("p={p}")) {
            let fit = r.fitted_order.unwrap();
            o.note(fit.at_least(1.8), format!("manufactured p={p} order {fit}"));
        }
    }
    let p3 = CapillaryBVP::from_spec(theta, 3.0, &PhiSpec::Manufactured, 256).unwrap();
    if let Some(r) = o.report(&uniqueness_experiment(&p3, 20, 20240607), "p=3") {
        o.note(
            r.metrics["converged"] >= 2.0 && r.lhs <= 1e-8,
            format!("p=3 {}/20 converged, diameter {:.2e}", r.metrics["converged"], r.lhs),
        );
    }
    let p2 = CapillaryBVP::from_spec(theta, 2.0, &PhiSpec::Manufactured, 256).unwrap();
    if let Some(r) = o.report(&uniqueness_experiment(&p2, 20, 20240607), "p=2") {
        let spread = r
            .criteria
            .iter()
            .find(|c| c.name == "scale-spread")
            .map(|c| c.value)
            .unwrap_or(0.0);
        o.note(
            r.lhs <= 1e-8,
            format!("p=2 normalized diameter {:.2e}, u(0) spread x{spread:.1}", r.lhs),
        );
    }
    if let Some(r) = o.report(&scaling_family_check(&p2, 3.0), "scaling") {
        o.note(r.passed(), format!("3u from 3u: deviation {:.2e}", r.lhs));
    }
    let secs = t.elapsed().as_secs_f64();
    o.note(secs <= 60.0, format!("{secs:.1}s"));
    o
}

fn run_cli(args: &[&str]) -> (std::process::ExitStatus, f64) {
    let t = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_anisocap"))
        .args(args)
        .env_remove("CAPILLARY_REPORT_DIR")
        .stdout(std::process::Stdio::null())
        .status()
        .expect("binary runs");
    (status, t.elapsed().as_secs_f64())
}

fn criterion_11() -> Outcome {
    let mut o = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let c = dir.path().join("c.json");
    let (sa, ta) = run_cli(&["verify", "all", "--report", a.to_str().unwrap()]);
    let first = std::fs::read(&a).unwrap_or_default();
    let (sb, tb) = run_cli(&["verify", "all", "--report", a.to_str().unwrap()]);
    let second = std::fs::read(&a).unwrap_or_default();
    o.note(
        sa.success() && sb.success(),
        format!("exit {:?}/{:?}", sa.code(), sb.code()),
    );
    o.note(ta.max(tb) <= 600.0, format!("{ta:.1}s and {tb:.1}s"));
    o.note(
        !first.is_empty() && first == second,
        format!("byte-identical reports on rerun ({} bytes)", first.len()),
    );
    let (sc, _) = run_cli(&["verify", "all", "--jobs", "1", "--report", c.to_str().unwrap()]);
    let reports = |p: &std::path::Path| -> serde_json::Value {
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(p).unwrap_or_default()).unwrap_or_default();
        v["reports"].clone()
    };
    o.note(
        sc.success() && reports(&a) == reports(&c),
        "single-thread run matches the pooled run",
    );
    o
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        (
            "anisotropic capillary Minkowski identity on the ellipsoid Wulff cap",
            criterion_1,
        ),
        ("weighted identity ladders on the perturbed cap", criterion_2),
        ("closed ellipsoid with harmonic norm", criterion_3),
        ("boundary lemmas on capillary surfaces", criterion_4),
        ("divergence and gradient identities", criterion_5),
        ("Heintze-Karcher equality, strictness and hemisphere value", criterion_6),
        ("Newton-Maclaurin and mixed-curvature sweeps", criterion_7),
        ("Minkowski-defect sign tests", criterion_8),
        ("rigidity forward checks and witnesses", criterion_9),
        ("1-D Minkowski solver", criterion_10),
        ("full suite runtime and reproducibility", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({:.1}s): {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
