//! Coordinate realizations of left-invariant structures, checked against the
//! exact Koszul tables with the jet curvature oracle.

use paracosym::jets::{Jet, JetMatrix};
use paracosym::lie::isotropy::{example1_field, frame_shape_at, isotropy_algebra_s, isotropy_generator, killing_residuals};
use paracosym::lie::koszul::koszul;
use paracosym::lie::{example1_algebra, q_f64, LieAlgebra5};
use paracosym::models::ChartModel;
use paracosym::riemann::{idx, Curvature};

/// Example 1's vector fields `(ξ, V₁, …, V₄)` with the metric that makes
/// them an adopted frame, `g̃ = Tᵀ G T` for the dual coframe `T = V⁻¹`.
fn realized_metric(p: &[f64], order: usize) -> (JetMatrix, Vec<Vec<f64>>) {
    let frame = ChartModel::example1_frame();
    let v = JetMatrix::from_fn(5, |a, i| frame[i][a].jet(p, order).unwrap());
    let t = v.inverse().unwrap();
    let g0 = JetMatrix::from_fn(5, |i, j| Jet::constant(5, order, q_f64(&LieAlgebra5::metric(i, j))));
    let g = t.transpose().mul(&g0).mul(&t);
    let vals: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|a| frame[i][a].eval(p)).collect()).collect();
    (g, vals)
}

#[test]
fn example1_frame_is_not_adopted_for_example1_metric() {
    let m = ChartModel::example1();
    let p = [0.1, 0.3, -0.4, 0.2, 0.5];
    let s = m.structure_jets(&p, 1).unwrap();
    let frame = ChartModel::example1_frame();
    let v: Vec<Vec<f64>> = frame.iter().map(|r| r.iter().map(|e| e.eval(&p)).collect()).collect();
    let mut g34 = 0.0;
    for a in 0..5 {
        for b in 0..5 {
            g34 += s.g.get(a, b).value() * v[3][a] * v[4][b];
        }
    }
    // g(V₃, V₄) = 2u₁u₂.
    assert!((g34 - 2.0 * 0.3 * -0.4).abs() < 1e-14);
}

#[test]
fn c2_zero_realization_matches_koszul_curvature() {
    let k = koszul(&example1_algebra()).unwrap();
    assert!(!k.is_flat());
    for p in [[0.1, 0.3, -0.4, 0.2, 0.5], [-0.7, 0.05, 0.6, -0.3, 0.8]] {
        let (g, v) = realized_metric(&p, 3);
        let curv = Curvature::from_metric(&g).unwrap();
        let rm = curv.rm_values();
        let mut worst = 0.0f64;
        let mut largest = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                for c in 0..5 {
                    for l in 0..5 {
                        let mut s = 0.0;
                        for x in 0..5 {
                            for y in 0..5 {
                                for z in 0..5 {
                                    for w in 0..5 {
                                        s += v[i][x] * v[j][y] * v[c][z] * v[l][w] * rm[idx(5, &[x, y, z, w])];
                                    }
                                }
                            }
                        }
                        worst = worst.max((s - q_f64(&k.rm(i, j, c, l))).abs());
                        largest = largest.max(s.abs());
                    }
                }
            }
        }
        assert!(worst < 1e-10, "oracle and Koszul differ by {worst:e}");
        assert!((largest - 1.0).abs() < 1e-10, "curvature scale {largest}");
    }
}

#[test]
fn s_fields_are_automorphisms_of_example1() {
    let m = ChartModel::example1();
    let pts = m.sample_points(20, 7, [-0.9, 0.9]);
    let s = isotropy_algebra_s().unwrap();
    for f in &s.fields {
        let r = killing_residuals(&m, &example1_field(f), &pts).unwrap();
        assert!(r.max() < 1e-9, "{r:?}");
        let (shape, _) = frame_shape_at(&m, &example1_field(f), &pts[3]).unwrap();
        assert!(shape < 1e-9);
    }
}

#[test]
fn generator_on_flat_models() {
    use paracosym::fields::Expr;
    // ∂²A/∂x2² + α₂∂A/∂x2 = −σ with A linear in x2 and B = 0.
    for (a1, a2) in [(0.0, 0.0), (0.5, -0.3), (-1.2, 0.7)] {
        let a = if a2 == 0.0 { Expr::var(2).pow(2).scale(-0.5) } else { Expr::var(2).scale(-1.0 / a2) };
        let fm = ChartModel::flat(Expr::constant(a1), Expr::constant(a2), a, Expr::zero(), 1.0, false).unwrap();
        let k = isotropy_generator(&fm).unwrap();
        let pts = fm.sample_points(20, 3, [-0.9, 0.9]);
        let r = killing_residuals(&fm, &k, &pts).unwrap();
        assert!(r.max() < 1e-9, "{a1} {a2}: {r:?}");
        assert!(k.iter().all(|e| e.eval(&[0.0; 5]).abs() < 1e-15));
        let (shape, a_val) = frame_shape_at(&fm, &k, &pts[0]).unwrap();
        assert!(shape < 1e-9);
        let p = &pts[0];
        assert!((a_val.abs() - (-a1 * p[1] - a2 * p[2]).exp()).abs() < 1e-9);
    }
}
