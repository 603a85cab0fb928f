use anisocap_core::par::*;

#[test]
fn map_preserves_order() {
    let v: Vec<usize> = (0..1000).collect();
    let out = map(&v, |x| x * 2);
    assert!(out.iter().enumerate().all(|(i, x)| *x == 2 * i));
}

#[test]
fn try_map_reports_first_error() {
    let v: Vec<usize> = (0..100).collect();
    let r = try_map(&v, |i, _| {
        if i == 17 || i == 60 {
            Err(anisocap_core::Error::Propagation { node: i })
        } else {
            Ok(i)
        }
    });
    assert_eq!(r, Err(anisocap_core::Error::Propagation { node: 17 }));
}

#[test]
fn compensated_sum_recovers_small_terms() {
    let vals = [1.0, 1e-16, 1e-16, -1.0];
    assert!((sum(vals) - 2e-16).abs() < 1e-30);
}
