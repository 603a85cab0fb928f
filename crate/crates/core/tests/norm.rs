use anisocap_core::norm::*;
use anisocap_core::sphere::random_unit;
use anisocap_core::sphere::GnomonicChart;
use anisocap_core::{Error, Matrix, Vector};
use rand::SeedableRng;
use std::sync::Arc;

fn v(xs: &[f64]) -> Vector {
    Vector::from_row_slice(xs)
}

fn builtins() -> Vec<MinkowskiNorm> {
    vec![
        MinkowskiNorm::isotropic(3, 1.0).unwrap(),
        MinkowskiNorm::ellipsoid_diag(&[1.0, 1.0, 4.0]).unwrap(),
        MinkowskiNorm::ellipsoid_diag(&[4.0, 1.0, 1.0]).unwrap(),
        MinkowskiNorm::harmonic(3, 0.1, "zonal2").unwrap(),
        MinkowskiNorm::harmonic(3, 0.1, "xz").unwrap(),
        MinkowskiNorm::isotropic(2, 2.0).unwrap(),
        MinkowskiNorm::ellipsoid_diag(&[4.0, 1.0]).unwrap(),
        MinkowskiNorm::harmonic(2, 0.1, "cos2").unwrap(),
    ]
}

#[test]
fn cahn_hoffman_examples() {
    let iso = MinkowskiNorm::isotropic(3, 1.0).unwrap();
    let p = iso.cahn_hoffman(&v(&[0.0, 0.0, 1.0])).unwrap();
    assert!((p - v(&[0.0, 0.0, 1.0])).norm() < 1e-15);

    let ell = MinkowskiNorm::ellipsoid_diag(&[4.0, 1.0]).unwrap();
    let p = ell.cahn_hoffman(&v(&[1.0, 0.0])).unwrap();
    assert!((p.clone() - v(&[2.0, 0.0])).norm() < 1e-14);
    // Oracle: central differences of the homogeneous extension, step 1e-6.
    let x = v(&[1.0, 0.0]);
    let h = 1e-6;
    for k in 0..2 {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[k] += h;
        xm[k] -= h;
        let fd = (ell.eval(&xp) - ell.eval(&xm)) / (2.0 * h);
        assert!((fd - p[k]).abs() < 1e-8);
    }
}

#[test]
fn non_unit_input_is_rejected() {
    let iso = MinkowskiNorm::isotropic(3, 1.0).unwrap();
    assert!(matches!(iso.cahn_hoffman(&v(&[0.0, 0.0, 2.0])), Err(Error::Domain(_))));
    assert!(matches!(iso.a_f_matrix(&v(&[0.0, 0.5, 0.0])), Err(Error::Domain(_))));
}

#[test]
fn a_f_examples() {
    let iso = MinkowskiNorm::isotropic(3, 1.0).unwrap();
    let a = iso.a_f_matrix(&v(&[0.6, 0.0, 0.8])).unwrap();
    assert!((a.matrix - Matrix::identity(2, 2)).norm() < 1e-14);

    let flat = MinkowskiNorm::harmonic(3, 0.0, "zonal2").unwrap();
    let a = flat.a_f_matrix(&v(&[0.0, 0.6, 0.8])).unwrap();
    assert!((a.matrix - Matrix::identity(2, 2)).norm() < 1e-14);

    // Oracle: second-order central differences of F in the sphere chart.
    let ell = MinkowskiNorm::ellipsoid_diag(&[4.0, 1.0, 1.0]).unwrap();
    let x = v(&[1.0, 0.0, 0.0]);
    let a = ell.a_f_matrix(&x).unwrap();
    let chart = GnomonicChart::with_basis(&x, a.basis.clone());
    let f = |y: [f64; 2]| ell.eval(&chart.point(&y));
    let h = 1e-4;
    let f0 = f([0.0, 0.0]);
    let mut fd = Matrix::zeros(2, 2);
    for i in 0..2 {
        let mut p = [0.0; 2];
        let mut m = [0.0; 2];
        p[i] = h;
        m[i] = -h;
        fd[(i, i)] = (f(p) - 2.0 * f0 + f(m)) / (h * h) + f0;
    }
    let c = (f([h, h]) - f([h, -h]) - f([-h, h]) + f([-h, -h])) / (4.0 * h * h);
    fd[(0, 1)] = c;
    fd[(1, 0)] = c;
    assert!((fd - a.matrix).abs().max() < 1e-6);
}

#[test]
fn non_admissible_norm_is_rejected() {
    // ε large enough that A_F loses definiteness.
    assert!(matches!(
        MinkowskiNorm::harmonic(3, 0.6, "zonal2"),
        Err(Error::NonAdmissibleNorm(_))
    ));
    assert!(matches!(
        MinkowskiNorm::harmonic(2, 0.5, "cos2"),
        Err(Error::NonAdmissibleNorm(_))
    ));
}

#[test]
fn dual_norm_examples() {
    let iso = MinkowskiNorm::isotropic(2, 1.0).unwrap();
    assert!((iso.dual_norm(&v(&[3.0, 4.0])).unwrap() - 5.0).abs() < 1e-15);
    assert_eq!(iso.dual_norm(&v(&[0.0, 0.0])).unwrap(), 0.0);

    let ell = MinkowskiNorm::ellipsoid_diag(&[4.0, 1.0]).unwrap();
    let xi = v(&[2.0, 0.0]);
    let closed = ell.dual_norm(&xi).unwrap();
    // Oracle: dense grid search of ⟨x,ξ⟩/F(x) over 10^5 circle points.
    let grid = (0..100_000)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 100_000.0;
            let x = v(&[t.cos(), t.sin()]);
            x.dot(&xi) / ell.eval(&x)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((grid - 1.0).abs() < 1e-8);
    assert!((closed - 1.0).abs() < 1e-14);

    // Numeric search path agrees with the closed form.
    let num = ell.dual_norm_search(&xi).unwrap().0;
    assert!((num - 1.0).abs() < 1e-12);
}

#[test]
fn cauchy_schwarz_and_duality_on_wulff_shape() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for norm in builtins() {
        for _ in 0..40 {
            let x = random_unit(&mut rng, norm.dim());
            let xi = random_unit(&mut rng, norm.dim()) * 3.0;
            let d = norm.dual_norm(&xi).unwrap();
            assert!(x.dot(&xi) <= d * norm.eval(&x) + 1e-10, "{}", norm.describe());
            let phi = norm.cahn_hoffman(&x).unwrap();
            let one = norm.dual_norm(&phi).unwrap();
            assert!((one - 1.0).abs() < 1e-8, "{}: {one}", norm.describe());
        }
    }
}

#[test]
fn dual_norm_is_homogeneous() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    use rand::Rng;
    for norm in builtins() {
        for _ in 0..100 {
            let xi = random_unit(&mut rng, norm.dim()) * rng.random_range(0.1..3.0);
            let lam: f64 = rng.random_range(0.01..50.0);
            let a = norm.dual_norm(&(&xi * lam)).unwrap();
            let b = lam * norm.dual_norm(&xi).unwrap();
            assert!((a - b).abs() <= 1e-10 * b, "{} {a} {b}", norm.describe());
        }
    }
}

#[test]
fn extension_is_one_homogeneous() {
    let custom = MinkowskiNorm::custom(3, "bumpy", Arc::new(|x: &Vector| 1.0 + 0.05 * x[2] * x[2]), 1e-4).unwrap();
    let mut norms = builtins();
    norms.push(custom);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for norm in norms {
        let x = random_unit(&mut rng, norm.dim());
        for lam in [0.1, 2.0, 17.5] {
            let a = norm.eval(&(&x * lam));
            assert!((a - lam * norm.eval(&x)).abs() < 1e-12 * a);
        }
    }
}

#[test]
fn hessian_annihilates_radial_direction() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for norm in builtins() {
        let x = random_unit(&mut rng, norm.dim());
        let h = norm.hessian(&x);
        assert!((&h * &x).norm() < 1e-12);
        assert!((&h - h.transpose()).norm() < 1e-12);
        let phi = norm.gradient(&x);
        assert!((phi.dot(&x) - norm.eval(&x)).abs() < 1e-13);
    }
}

#[test]
fn numeric_derivatives_converge_at_second_order() {
    let ell = MinkowskiNorm::ellipsoid_diag(&[4.0, 1.0, 1.0]).unwrap();
    let x = Vector::from_row_slice(&[0.48, -0.6, 0.64]);
    let exact_phi = ell.gradient(&x);
    let exact_h = ell.hessian(&x);
    let steps = [1e-3, 5e-4, 2.5e-4];
    let mut e_phi = vec![];
    let mut e_a = vec![];
    for h in steps {
        let num = ell.clone().with_derivatives(DerivativeMode::Numeric { h }).unwrap();
        e_phi.push((num.gradient(&x) - &exact_phi).norm());
        e_a.push((num.hessian(&x) - &exact_h).norm());
    }
    let order = |e: &[f64]| (e[0] / e[2]).ln() / (steps[0] / steps[2]).ln();
    assert!(order(&e_phi) >= 1.8, "{e_phi:?}");
    assert!(order(&e_a) >= 1.8, "{e_a:?}");
}

#[test]
fn json_document_roundtrip() {
    let n = MinkowskiNorm::from_json(r#"{"family": "ellipsoid", "M": [[1,0,0],[0,1,0],[0,0,4]]}"#).unwrap();
    assert_eq!(n.dim(), 3);
    assert!((n.eval(&v(&[0.0, 0.0, 1.0])) - 2.0).abs() < 1e-15);
    let h = MinkowskiNorm::from_json(
        r#"{"family": "harmonic", "dim": 3, "eps": 0.1, "mode": "zonal2", "derivatives": {"mode": "numeric", "h": 1e-4}}"#,
    )
    .unwrap();
    assert_eq!(h.derivative_mode(), DerivativeMode::Numeric { h: 1e-4 });
    assert!(MinkowskiNorm::from_json(r#"{"family": "nope"}"#).is_err());
}

#[test]
fn wulff_samples_lie_on_level_set() {
    for norm in builtins() {
        let center = Vector::from_fn(norm.dim(), |i, _| 0.1 * (i as f64 + 1.0));
        let w = WulffShapeSpec::new(norm, 1.7, center).unwrap();
        for p in w.sample(64).unwrap() {
            assert!(w.level_defect(&p).unwrap().abs() <= 1e-10 * 1.7);
        }
    }
}
