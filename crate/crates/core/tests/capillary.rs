use anisocap_core::capillary::*;
use anisocap_core::sphere::vertical;
use anisocap_core::surface::PsiMode;
use anisocap_core::{Error, MinkowskiNorm, Vector};

fn v(xs: &[f64]) -> Vector {
    Vector::from_row_slice(xs)
}

#[test]
fn e_f_examples() {
    let iso = MinkowskiNorm::isotropic(3, 1.0).unwrap();
    for w in [-0.5, 0.0, 0.5] {
        assert!((e_f_vector(&iso, w).unwrap() - v(&[0.0, 0.0, 1.0])).norm() < 1e-15);
    }
    let ell = MinkowskiNorm::ellipsoid_diag(&[1.0, 1.0, 4.0]).unwrap();
    // Oracle: M e₃ / (e₃ᵀ M e₃).
    let e = e_f_vector(&ell, -0.3).unwrap();
    assert!((e - v(&[0.0, 0.0, 1.0])).norm() < 1e-15);
    let tilted = MinkowskiNorm::ellipsoid(anisocap_core::Matrix::from_row_slice(
        3,
        3,
        &[2.0, 0.0, 0.5, 0.0, 1.0, 0.0, 0.5, 0.0, 3.0],
    ))
    .unwrap();
    for w in [-0.4, 0.4] {
        let e = e_f_vector(&tilted, w).unwrap();
        assert!((e[2] - 1.0).abs() < 1e-12);
    }
    assert!(matches!(e_f_vector(&ell, -2.0), Err(Error::Domain(_))));
    assert!(matches!(e_f_vector(&ell, 2.0), Err(Error::Domain(_))));
}

#[test]
fn capillary_wulff_support_is_constant() {
    let ell = MinkowskiNorm::ellipsoid_diag(&[1.0, 1.0, 4.0]).unwrap();
    let cap = capillary_wulff(&ell, 2.0, -0.3, 3).unwrap();
    for s in &cap.interior {
        assert!((s.u_bar - 2.0).abs() < 1e-12);
        assert!(s.xi.norm() < 1e-12);
        let d = ell.dual_norm(&(&s.geom.x - &cap.context.e_f * (2.0 * -0.3))).unwrap();
        assert!((d - 2.0).abs() < 1e-10 * 2.0);
    }
    assert!(cap.boundary_condition_residual() < 1e-12);
}

#[test]
fn isotropic_cap_contact_angle() {
    let theta = 1.1f64;
    let cap = sphere_cap(3, 1.0, theta, 3).unwrap();
    for b in &cap.boundary {
        assert!((b.geom.nu[2] - theta.cos()).abs() < 1e-12);
    }
}

#[test]
fn zero_omega_cuts_at_equator() {
    let h = MinkowskiNorm::harmonic(3, 0.1, "xz").unwrap();
    let cap = capillary_wulff(&h, 1.0, 0.0, 3).unwrap();
    let e = vertical(3);
    for b in &cap.boundary {
        assert!(h.gradient(&b.geom.nu).dot(&e).abs() < 1e-12);
    }
}

#[test]
fn perturbation_keeps_boundary_condition() {
    let iso = MinkowskiNorm::isotropic(3, 1.0).unwrap();
    let base = capillary_wulff(&iso, 1.0, -0.3, 3).unwrap();
    let zero = perturbed_capillary(&iso, 1.0, -0.3, 0.0, PsiMode::CosAzimuth, 3).unwrap();
    for (a, b) in base.interior.iter().zip(&zero.interior) {
        assert_eq!(a.geom.x, b.geom.x);
        assert_eq!(a.geom.dnu, b.geom.dnu);
    }
    let p = perturbed_capillary(&iso, 1.0, -0.3, 0.05, PsiMode::CosAzimuth, 3).unwrap();
    assert!(p.boundary_condition_residual() <= 1e-10);
    let st = p.support_stats();
    assert!(st.max - st.min > 1e-3);
    assert!(matches!(
        perturbed_capillary(&iso, 1.0, -0.3, 5.0, PsiMode::Radial, 3),
        Err(Error::Convexity(_))
    ));
}
