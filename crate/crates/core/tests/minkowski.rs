use anisocap_core::lab::Verdict;
use anisocap_core::minkowski::*;
use std::f64::consts::PI;

const THETA: f64 = 1.0472;

#[test]
fn manufactured_order_all_exponents() {
    for p in [1.0, 2.0, 3.0, 4.5] {
        let r = manufactured_convergence(THETA, p, &DEFAULT_SIZES).unwrap();
        let order = r.fitted_order.as_ref().unwrap().value();
        assert!(r.passed(), "p={p} order={order:?} {r:#?}");
    }
}

#[test]
fn unique_for_p3() {
    let bvp = CapillaryBVP::from_spec(THETA, 3.0, &PhiSpec::Manufactured, 128).unwrap();
    let r = uniqueness_experiment(&bvp, 20, 7).unwrap();
    assert!(r.passed(), "{r:#?}");
    assert_eq!(r.metrics["converged"], 20.0);
}

#[test]
fn scaling_family_for_p2() {
    let bvp = CapillaryBVP::from_spec(THETA, 2.0, &PhiSpec::Manufactured, 128).unwrap();
    let r = uniqueness_experiment(&bvp, 20, 7).unwrap();
    assert!(r.passed(), "{r:#?}");
    let s = scaling_family_check(&bvp, 3.0).unwrap();
    assert!(s.passed(), "{s:#?}");
}

#[test]
fn translation_gauge_for_p1() {
    let bvp = CapillaryBVP::from_spec(THETA, 1.0, &PhiSpec::Constant { c: 1.0 }, 128).unwrap();
    let r = uniqueness_experiment(&bvp, 10, 3).unwrap();
    assert!(r.passed(), "{r:#?}");
}

#[test]
fn self_convergence_without_closed_form() {
    for p in [1.0, 3.0] {
        let r = self_convergence(THETA, p, &PhiSpec::Bump { amplitude: 0.3 }, &DEFAULT_SIZES).unwrap();
        assert!(r.passed(), "p={p} {r:#?}");
    }
}

#[test]
fn obtuse_contact_angle() {
    let r = manufactured_convergence(2.0 * PI / 3.0, 3.0, &DEFAULT_SIZES).unwrap();
    assert!(r.passed(), "{r:#?}");
}

#[test]
fn no_convergent_start_is_inconclusive() {
    let mut bvp = CapillaryBVP::from_spec(THETA, 3.0, &PhiSpec::Manufactured, 64).unwrap();
    bvp.controls.max_iterations = 1;
    let r = uniqueness_experiment(&bvp, 4, 1).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn nonconvergence_reports_residual() {
    let mut bvp = CapillaryBVP::from_spec(THETA, 3.0, &PhiSpec::Manufactured, 64).unwrap();
    bvp.controls.max_iterations = 1;
    match solve(&bvp, None) {
        Err(anisocap_core::Error::NonConvergence { residual, .. }) => assert!(residual > 1e-10),
        other => panic!("{other:?}"),
    }
}

#[test]
fn seeded_experiment_is_reproducible() {
    let bvp = CapillaryBVP::from_spec(THETA, 3.0, &PhiSpec::Bump { amplitude: 0.2 }, 64).unwrap();
    let a = serde_json::to_string(&uniqueness_experiment(&bvp, 6, 11).unwrap()).unwrap();
    let b = serde_json::to_string(&uniqueness_experiment(&bvp, 6, 11).unwrap()).unwrap();
    assert_eq!(a, b);
}

// Unit-level checks.

#[test]
fn circular_arc_solves_p1_with_constant_data() {
    let theta = PI / 3.0;
    let r0 = 1.7;
    let err = |n: usize| {
        let bvp = CapillaryBVP::new(theta, 1.0, vec![r0; n + 1], SolverControls::default()).unwrap();
        // u = r₀(1 − cos θ cos t) satisfies u″ + u = r₀ exactly.
        let exact: Vec<f64> = bvp.base_profile().iter().map(|g| r0 * g).collect();
        let sol = solve(&bvp, None).unwrap();
        assert!(sol.residual <= 1e-10);
        sol.u.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(64), err(128));
    assert!(fine < 1e-4 && coarse / fine > 3.5, "{coarse} {fine}");
}

#[test]
fn manufactured_order_for_p3() {
    let r = manufactured_convergence(PI / 3.0, 3.0, &DEFAULT_SIZES).unwrap();
    assert!(r.passed(), "{r:#?}");
}

#[test]
fn rejects_bad_problems() {
    let ctl = SolverControls::default();
    assert!(CapillaryBVP::new(0.0, 2.0, vec![1.0; 65], ctl).is_err());
    assert!(CapillaryBVP::new(1.0, 0.5, vec![1.0; 65], ctl).is_err());
    assert!(CapillaryBVP::new(1.0, 2.0, vec![-1.0; 65], ctl).is_err());
    assert!(CapillaryBVP::new(1.0, 2.0, vec![1.0; 6], ctl).is_err());
}

#[test]
fn manufactured_solution_derivatives() {
    let theta = 1.1;
    for t in [-1.0, -0.3, 0.0, 0.6, 1.05] {
        let h = 1e-4;
        let (u0, d2) = manufactured_solution(theta, t);
        let up = manufactured_solution(theta, t + h).0;
        let um = manufactured_solution(theta, t - h).0;
        assert!(((up - 2.0 * u0 + um) / (h * h) - d2).abs() < 1e-5);
        assert!(((up - um) / (2.0 * h) - manufactured_derivative(theta, t)).abs() < 1e-7);
    }
}
