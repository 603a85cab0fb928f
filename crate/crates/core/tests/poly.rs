use anisocap_core::poly::*;
use anisocap_core::Vector;

#[test]
fn derivatives_match_differences() {
    let p = harmonic_mode("zonal3", 3).unwrap();
    let x = Vector::from_vec(vec![0.3, -0.7, 0.5]);
    let h = 1e-6;
    let g = p.gradient(&x);
    let hs = p.hessian(&x);
    for k in 0..3 {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[k] += h;
        xm[k] -= h;
        assert!(((p.value(&xp) - p.value(&xm)) / (2.0 * h) - g[k]).abs() < 1e-8);
        let col = (p.gradient(&xp) - p.gradient(&xm)) / (2.0 * h);
        for a in 0..3 {
            assert!((col[a] - hs[(a, k)]).abs() < 1e-8);
        }
    }
}

#[test]
fn modes_are_harmonic_and_homogeneous() {
    let x3 = Vector::from_vec(vec![0.2, 0.4, -0.9]);
    for name in HARMONIC_MODES_3D {
        let p = harmonic_mode(name, 3).unwrap();
        assert!(p.is_homogeneous());
        assert!(p.laplacian(&x3).abs() < 1e-13, "{name}");
    }
    let x2 = Vector::from_vec(vec![0.6, -0.1]);
    for name in HARMONIC_MODES_2D {
        let p = harmonic_mode(name, 2).unwrap();
        assert!(p.is_homogeneous());
        assert!(p.laplacian(&x2).abs() < 1e-13, "{name}");
    }
}
