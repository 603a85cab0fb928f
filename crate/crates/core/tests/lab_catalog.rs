use anisocap_core::lab::catalog::*;

#[test]
fn every_scenario_builds() {
    for s in named_scenarios() {
        let cs = s.build(3).unwrap_or_else(|e| panic!("{}: {e}", s.name));
        assert_eq!(cs.is_closed(), s.is_closed(), "{}", s.name);
        if !s.is_closed() {
            assert!(cs.boundary_condition_residual() <= 1e-10, "{}", s.name);
        }
    }
}

#[test]
fn sphere_cap_forces_isotropic_norm() {
    let s = Scenario::new(
        "x",
        builtin_norm("ellipsoid", 3).unwrap(),
        SurfaceSpec::SphereCap { r: 1.0, theta: 1.0 },
    );
    assert!(s.is_isotropic());
}

#[test]
fn unknown_names_list_the_catalog() {
    let e = builtin_norm("nope", 3).unwrap_err().to_string();
    assert!(e.contains("ellipsoid-tilted"));
    assert!(scenario("nope").unwrap_err().to_string().contains("hemisphere"));
}
