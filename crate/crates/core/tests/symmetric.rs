use anisocap_core::symmetric::*;
use anisocap_core::Matrix;

#[test]
fn expansion_of_one_two_three() {
    let f = SymmetricFunctions::of(&[1.0, 2.0, 3.0]);
    assert_eq!(f.sigma, vec![1.0, 6.0, 11.0, 6.0]);
    assert!((f.h[0] - 1.0).abs() < 1e-15);
    assert!((f.h[1] - 2.0).abs() < 1e-15);
    assert!((f.h[2] - 11.0 / 3.0).abs() < 1e-15);
    assert!((f.h[3] - 6.0).abs() < 1e-15);
    assert_eq!(f.h(4), 0.0);
}

#[test]
fn equal_entries_give_powers() {
    for n in 1..=5 {
        let c = 1.7;
        let f = SymmetricFunctions::of(&vec![c; n]);
        for k in 0..=n {
            assert!((f.h[k] - c.powi(k as i32)).abs() < 1e-12 * c.powi(k as i32));
        }
        let ones = SymmetricFunctions::of(&vec![1.0; n]);
        assert!(ones.h.iter().all(|h| (h - 1.0).abs() < 1e-14));
    }
}

#[test]
fn binomials() {
    assert_eq!(binomial(4, 2), 6.0);
    assert_eq!(binomial(2, 0), 1.0);
    assert_eq!(binomial(2, 3), 0.0);
    assert_eq!(binomial(10, 7), 120.0);
}

#[test]
fn newton_operator_diag_example() {
    let s = Matrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[0.5, 3.0]));
    let sig = elementary_symmetric(&[0.5, 3.0]);
    let p = newton_operators(&s, &sig);
    assert!((&p[1] - Matrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[3.0, 0.5]))).norm() < 1e-15);
    assert!(p[2].norm() < 1e-14);
}

#[test]
fn newton_operator_traces_for_equal_eigenvalues() {
    // Brute-force: S = cA⁻¹·(A) in 2×2 and 3×3 with a non-trivial A.
    for n in [2usize, 3] {
        let c = 0.8;
        let a = Matrix::from_fn(n, n, |i, j| if i == j { 2.0 + i as f64 } else { 0.3 });
        let dnu = a.clone().try_inverse().unwrap() * c;
        let s = &a * &dnu;
        let sig = elementary_symmetric(&vec![c; n]);
        let p = newton_operators(&s, &sig);
        for k in 0..=n {
            let expect = c.powi(k as i32) * binomial(n - 1, k);
            assert!((&p[k] - Matrix::identity(n, n) * expect).abs().max() < 1e-12);
            assert!((p[k].trace() - (n - k) as f64 * sig[k]).abs() < 1e-12);
            if k < n {
                let tps = (&p[k] * &s).trace();
                assert!((tps - (k + 1) as f64 * sig[k + 1]).abs() < 1e-12);
            }
        }
        check_newton_symmetry(&dnu, &p, 1e-8).unwrap();
    }
}

#[test]
fn maclaurin_example() {
    let f = SymmetricFunctions::of(&[1.0, 2.0, 3.0]);
    let (l, r) = newton_maclaurin_sides(&f.h, 2, 0, 1, 0);
    assert!((l - (11.0f64 / 3.0).sqrt()).abs() < 1e-14);
    assert!((r - 2.0).abs() < 1e-14);
    assert!(l <= r);
}
