//! Property tests over random inputs.

use paracosym::fields::{Expr, Form};
use paracosym::frame::{gauge_action_matrix, invariants, CurvatureCoeffs};
use paracosym::models::ChartModel;
use paracosym::pac::{mat_mul, max_abs, PointGeometry};
use proptest::prelude::*;

fn coeffs() -> impl Strategy<Value = CurvatureCoeffs> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, prop::bool::ANY).prop_map(|(a1, a2, b1, b2, gamma, s)| {
        CurvatureCoeffs { a1, a2, b1, b2, gamma, sigma: if s { 1.0 } else { -1.0 } }
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Cubic polynomial in five variables from a coefficient vector.
fn poly(c: &[f64]) -> Expr {
    let x = Expr::var;
    let mut terms = vec![Expr::constant(c[0])];
    for a in 0..5 {
        terms.push(x(a).scale(c[1 + a]));
        terms.push(Expr::product([x(a), x((a + 1) % 5)]).scale(c[6 + a]));
        terms.push(Expr::product([x(a), x(a), x((a + 2) % 5)]).scale(c[11 + a]));
    }
    Expr::sum(terms)
}

fn sample_model(k: usize) -> ChartModel {
    let name = ["example1", "flat_unit_alpha", "contact_potential_twisted", "eta_einstein_rm2_u0", "generalized_ee_mixed"][k];
    let path = format!("{}/configs/{name}.json", env!("CARGO_MANIFEST_DIR"));
    paracosym::cli::load_config(path.as_ref()).unwrap().1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gauge_action_composes(c in coeffs(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let two = gauge_action_matrix(&gauge_action_matrix(&c, a), b);
        let one = gauge_action_matrix(&c, a + b);
        prop_assert!(close(two.a1, one.a1, 1e-12) && close(two.b1, one.b1, 1e-12) && close(two.gamma, one.gamma, 1e-12));
        prop_assert_eq!((two.a2, two.b2, two.sigma), (c.a2, c.b2, c.sigma));
    }

    #[test]
    fn gauge_preserves_invariants(c in coeffs(), a in -2.0..2.0f64) {
        let (i, j) = (invariants(&c), invariants(&gauge_action_matrix(&c, a)));
        prop_assert!(close(i.i1, j.i1, 1e-11), "I1 {} vs {}", i.i1, j.i1);
        prop_assert!(close(i.i2, j.i2, 1e-11), "I2 {} vs {}", i.i2, j.i2);
        prop_assert!(close(i.det, j.det, 1e-11), "det {} vs {}", i.det, j.det);
    }

    #[test]
    fn jets_match_symbolic_derivatives(c in prop::collection::vec(-1.0..1.0f64, 16), p in prop::collection::vec(-0.9..0.9f64, 5)) {
        let f = poly(&c);
        let j = f.jet(&p, 3).unwrap();
        for a in 0..5 {
            let mut alpha = [0u8; 5];
            alpha[a] = 1;
            prop_assert!(close(j.derivative(&alpha), f.diff(a).eval(&p), 1e-12));
            alpha[(a + 2) % 5] += 1;
            prop_assert!(close(j.derivative(&alpha), f.diff(a).diff((a + 2) % 5).eval(&p), 1e-12));
        }
    }

    #[test]
    fn exterior_derivative_squares_to_zero(cs in prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 16), 5), p in prop::collection::vec(-0.9..0.9f64, 5)) {
        let comps = cs.iter().map(|c| poly(c).jet(&p, 2).unwrap()).collect();
        let dd = Form::one_form(comps).d().d().values();
        prop_assert!(dd.max_abs() < 1e-12);
    }

    #[test]
    fn classification_reconstructs_a(k in 0usize..5, p in prop::collection::vec(-0.8..0.8f64, 5)) {
        let m = sample_model(k);
        let geo = PointGeometry::new(&m, &p, 2).unwrap();
        let a = geo.a_values();
        let c = geo.classify(1e-8).unwrap();
        let rebuilt = c.reconstruct(&geo.structure);
        let diff = max_abs(a.iter().flatten().zip(rebuilt.iter().flatten()).map(|(x, y)| x - y));
        prop_assert!(diff < 1e-9, "{} at {:?}: {diff:e}", m.label, p);
        prop_assert!(max_abs(mat_mul(&a, &a).into_iter().flatten()) < 1e-9);
        let pa = mat_mul(&geo.structure.phi, &a);
        let ap = mat_mul(&a, &geo.structure.phi);
        prop_assert!(max_abs(pa.iter().flatten().zip(ap.iter().flatten()).map(|(x, y)| x + y)) < 1e-9);
    }
}
