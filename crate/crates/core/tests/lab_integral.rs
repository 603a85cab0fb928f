use anisocap_core::lab::catalog::scenario;
use anisocap_core::lab::integral::*;
use anisocap_core::lab::{TolerancePolicy, WeightFunction};
use anisocap_core::Error;
use std::f64::consts::PI;

fn policy() -> TolerancePolicy {
    TolerancePolicy::default()
}

#[test]
fn weighted_formula_on_perturbed_cap() {
    let s = scenario("perturbed-cap").unwrap();
    let f = WeightFunction::named("u").unwrap();
    let r = hsiung_minkowski(&s, &f, 0, &[3], &policy()).unwrap();
    assert!(r.passed(), "{r:#?}");
    assert!(r.rhs.abs() > 1e-6, "the gradient term must be exercised");
}

#[test]
fn k_out_of_range_is_rejected() {
    let s = scenario("ellipsoid-wulff-cap").unwrap();
    let f = WeightFunction::named("const").unwrap();
    assert!(matches!(
        hsiung_minkowski(&s, &f, 2, &[2], &policy()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn sign_test_rejects_untagged_weight() {
    let s = scenario("perturbed-cap").unwrap();
    let f = WeightFunction::named("sq-dist").unwrap();
    assert!(matches!(
        minkowski_corollary(&s, &f, 0, 2, &policy()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn hemisphere_heintze_karcher_is_two_pi() {
    let s = scenario("hemisphere").unwrap();
    let r = heintze_karcher(&s, &[4], &policy()).unwrap();
    assert!(r.passed(), "{r:#?}");
    assert!((r.lhs - 2.0 * PI).abs() < 1e-6);
}

#[test]
fn closed_sphere_divergence_is_classical() {
    let s = scenario("closed-sphere").unwrap();
    let r = divergence_identity(&s, 1, &[2, 3, 4], &policy()).unwrap();
    assert!(r.passed(), "{r:#?}");
}

#[test]
fn positivity_sweep_is_reproducible() {
    let a = positivity(7, 4, 200).unwrap();
    let b = positivity(7, 4, 200).unwrap();
    assert_eq!(a, b);
    assert!(a.passed());
}
