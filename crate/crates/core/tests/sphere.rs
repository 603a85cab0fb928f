use anisocap_core::sphere::*;

#[test]
fn tangent_basis_is_orthonormal() {
    for x in quasi_uniform(3, 64).into_iter().chain(quasi_uniform(2, 16)) {
        let b = tangent_basis(&x);
        assert_eq!(b.len(), x.len() - 1);
        for (i, bi) in b.iter().enumerate() {
            assert!(bi.dot(&x).abs() < 1e-14);
            for (j, bj) in b.iter().enumerate() {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((bi.dot(bj) - d).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn gnomonic_partials_match_differences() {
    let c = polar_point(0.7, 1.1);
    let chart = GnomonicChart::new(&c);
    let y = [0.03, -0.02];
    let p = chart.partials(&y);
    let h = 1e-6;
    for i in 0..2 {
        let mut yp = y;
        let mut ym = y;
        yp[i] += h;
        ym[i] -= h;
        let fd = (chart.point(&yp) - chart.point(&ym)) / (2.0 * h);
        assert!((fd - &p[i]).norm() < 1e-8);
    }
    let p0 = chart.partials(&[0.0, 0.0]);
    assert!((&p0[0] - &chart.basis[0]).norm() < 1e-15);
}

#[test]
fn polar_derivatives() {
    let h = 1e-6;
    let (t, phi) = (0.9, 2.3);
    let fd_t = (polar_point(t + h, phi) - polar_point(t - h, phi)) / (2.0 * h);
    let fd_p = (polar_point(t, phi + h) - polar_point(t, phi - h)) / (2.0 * h);
    assert!((fd_t - polar_dt(t, phi)).norm() < 1e-9);
    assert!((fd_p - polar_dphi(t, phi)).norm() < 1e-9);
}
