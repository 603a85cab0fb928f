use anisocap_core::lab::report::*;
use anisocap_core::quadrature::FittedOrder;

#[test]
fn verdict_is_conjunction() {
    let ok = Criterion::at_most("a", 1.0, 2.0);
    let bad = Criterion::at_least("b", 1.0, 2.0);
    assert_eq!(verdict_of(&[ok.clone()]), Verdict::Pass);
    assert_eq!(verdict_of(&[ok, bad]), Verdict::Fail);
    assert_eq!(verdict_of(&[]), Verdict::Fail);
    assert!(Criterion::order("o", &FittedOrder::Exact, 1.8).passed);
}

#[test]
fn tolerance_tracks_estimate() {
    let p = TolerancePolicy::default();
    assert_eq!(p.identity_tolerance(0.0), 1e-6);
    assert_eq!(p.identity_tolerance(1e-5), 1e-4);
}
