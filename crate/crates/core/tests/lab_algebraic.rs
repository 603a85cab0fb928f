use anisocap_core::lab::algebraic::*;
use anisocap_core::symmetric::SymmetricFunctions;

#[test]
fn tuples_respect_constraints() {
    for n in 1..=4 {
        for (k, l, r, s) in admissible_tuples(n) {
            assert!(k > l && r > s && k >= r && l >= s && k <= n);
        }
    }
    assert_eq!(admissible_tuples(1), vec![(1, 0, 1, 0)]);
}

#[test]
fn small_sweeps_pass() {
    assert!(newton_maclaurin_sweep(1, 400).passed());
    assert!(mixed_curvature_sweep(1, 400).passed());
}

#[test]
fn strict_example_with_single_b() {
    let h = SymmetricFunctions::of(&[1.0, 2.0, 3.0]).h;
    let a = [1.0];
    let b = [0.0, h[2] / h[1]];
    assert!(mixed_curvature_constraint(&h, &a, &b, 2).abs() < 1e-14);
    let (lhs, rhs) = mixed_curvature_sides(&h, &a, &b, 2);
    assert!(lhs > rhs + 1e-3, "{lhs} vs {rhs}");
}
