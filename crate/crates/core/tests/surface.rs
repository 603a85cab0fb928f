use anisocap_core::surface::*;
use std::sync::Arc;

use anisocap_core::{Matrix, MinkowskiNorm, Vector};

#[test]
fn sphere_shape_operator_is_scaled_identity() {
    let s = SupportSurface::sphere(3, 2.0).unwrap();
    let z = Vector::from_row_slice(&[0.0, 0.6, 0.8]);
    let g = s.geometry(&z).unwrap();
    assert!((g.dnu - Matrix::identity(2, 2) * 0.5).norm() < 1e-14);
}

#[test]
fn ellipse_curvature_at_vertex() {
    let e = SupportSurface::ellipsoid(&[2.0, 1.0], Vector::zeros(2)).unwrap();
    let g = e.geometry(&Vector::from_row_slice(&[1.0, 0.0])).unwrap();
    assert!((g.x.clone() - Vector::from_row_slice(&[2.0, 0.0])).norm() < 1e-14);
    // κ = ab/(a² sin² t + b² cos² t)^{3/2} at t = 0.
    let (a, b) = (2.0f64, 1.0f64);
    let kappa = a * b / (b * b).powf(1.5);
    assert!((g.dnu[(0, 0)] - kappa).abs() < 1e-13);
}

#[test]
fn radial_sphere_matches_gauss_map() {
    let r = RadialGraph::new(3, RadialProfile::Constant { r: 1.5 }, 1e-4).unwrap();
    let z = Vector::from_row_slice(&[0.36, 0.48, 0.8]);
    let g = r.geometry(&z).unwrap();
    assert!((g.dnu.clone() - Matrix::identity(2, 2) / 1.5).abs().max() < 1e-8);
    assert!((g.nu.clone() - z).norm() < 1e-13);
}

#[test]
fn frames_are_orthonormal() {
    let p = PerturbedSurface::new(
        SupportSurface::new(
            MinkowskiNorm::isotropic(3, 1.0).unwrap(),
            1.0,
            Vector::from_row_slice(&[0.0, 0.0, -0.3]),
            true,
        )
        .unwrap(),
        MinkowskiNorm::isotropic(3, 1.0).unwrap(),
        0.05,
        PsiMode::CosAzimuth,
    )
    .unwrap();
    let g = p.geometry(&Vector::from_row_slice(&[0.6, 0.0, 0.8])).unwrap();
    assert!((g.nu.norm() - 1.0).abs() < 1e-12);
    for (i, e) in g.frame.iter().enumerate() {
        assert!(e.dot(&g.nu).abs() < 1e-12);
        for (j, f) in g.frame.iter().enumerate() {
            let d = if i == j { 1.0 } else { 0.0 };
            assert!((e.dot(f) - d).abs() < 1e-12);
        }
    }
    assert!(g.asymmetry < 1e-6);
}

#[test]
fn cap_area_and_boundary_length() {
    let theta = 1.0f64;
    let cap = SupportSurface::new(
        MinkowskiNorm::isotropic(3, 1.0).unwrap(),
        1.0,
        Vector::from_row_slice(&[0.0, 0.0, -theta.cos()]),
        true,
    )
    .unwrap();
    let s = Hypersurface::build(Arc::new(cap), 4).unwrap();
    let area = 2.0 * std::f64::consts::PI * (1.0 - theta.cos());
    assert!((s.area() - area).abs() < 1e-10 * area);
    let len = 2.0 * std::f64::consts::PI * theta.sin();
    assert!((s.boundary_measure() - len).abs() < 1e-10 * len);
    for b in &s.boundary {
        assert!(b.geom.x[2].abs() < 1e-12);
        assert!(b.mu.dot(&b.geom.nu).abs() < 1e-12);
        assert!((b.mu.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn closed_sphere_area() {
    let s = Hypersurface::build(Arc::new(SupportSurface::sphere(3, 1.0).unwrap()), 5).unwrap();
    assert!((s.area() - 4.0 * std::f64::consts::PI).abs() < 1e-6);
    let c = Hypersurface::build(Arc::new(SupportSurface::sphere(2, 1.0).unwrap()), 3).unwrap();
    assert!((c.area() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn wulff_shape_has_unit_anisotropic_curvature() {
    let f = MinkowskiNorm::ellipsoid_diag(&[1.0, 1.0, 4.0]).unwrap();
    let w = SupportSurface::new(f.clone(), 2.0, Vector::zeros(3), false).unwrap();
    let g = w.geometry(&Vector::from_row_slice(&[0.48, -0.6, 0.64])).unwrap();
    let c = curvature_at(&f, &g).unwrap();
    for k in &c.kappa {
        assert!((k - 0.5).abs() < 1e-12);
    }
    assert!(c.p[2].abs().max() < 1e-9);
    assert!((c.s_f.trace() - c.sym.sigma[1]).abs() < 1e-9 * c.sym.sigma[1]);
    assert!((c.s_f.determinant() - c.sym.sigma[2]).abs() < 1e-9 * c.sym.sigma[2]);
}
