use anisocap_core::quadrature::*;
use anisocap_core::Error;

#[test]
fn gl_integrates_polynomials_exactly() {
    for n in 1..=12 {
        let (x, w) = gauss_legendre(n);
        for deg in 0..(2 * n) {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-13, "n={n} deg={deg} {q} {exact}");
        }
        assert!(w.iter().all(|w| *w > 0.0));
    }
}

#[test]
fn composite_rule_on_interval() {
    let (x, w) = composite_gauss_legendre(0.0, std::f64::consts::PI, 8, 4);
    let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.sin()).sum();
    assert!((q - 2.0).abs() < 1e-12);
}

#[test]
fn trapezoid_is_spectral_for_periodic() {
    let (x, w) = periodic_trapezoid(32);
    let q: f64 = x.iter().zip(&w).map(|(x, w)| w * (x.cos().exp())).sum();
    // 2π I_0(1)
    let i0 = 1.2660658777520082;
    assert!((q - 2.0 * std::f64::consts::PI * i0).abs() < 1e-13);
}

#[test]
fn nan_names_the_node() {
    let r = weighted_sum(&[1.0, 1.0, 1.0], &[0.0, f64::NAN, 1.0]);
    assert!(matches!(r, Err(Error::Propagation { node: 1 })));
}

#[test]
fn synthetic_second_order() {
    let fit = fit_errors(&[1e-2, 2.5e-3, 6.25e-4], &[1.0, 0.5, 0.25], ANALYTIC_FLOOR).unwrap();
    match fit {
        FittedOrder::Order { order } => assert!((order - 2.0).abs() < 1e-12),
        FittedOrder::Exact => panic!(),
    }
    assert_eq!(
        fit_errors(&[0.0, 0.0, 0.0], &[1.0, 0.5, 0.25], ANALYTIC_FLOOR).unwrap(),
        FittedOrder::Exact
    );
    assert!(fit_errors(&[1.0, 0.5], &[1.0, 0.5], ANALYTIC_FLOOR).is_err());
    // A ladder that hits the floor is judged on its last informative step.
    let fit = fit_errors(&[1e-8, 1e-13, 2e-13], &[1.0, 0.5, 0.25], 1e-9).unwrap();
    assert!(fit.at_least(3.0), "{fit}");
}

#[test]
fn reference_fit() {
    let fit = convergence_fit(&[1.1, 1.025, 1.00625], 1.0, &[1.0, 0.5, 0.25], 0.0).unwrap();
    assert!(fit.at_least(1.99));
}
