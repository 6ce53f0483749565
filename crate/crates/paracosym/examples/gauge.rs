//! Frame changes `V₃ → V₃ + αV₂, V₄ → V₄ − αV₁`: the transformation laws of
//! the connection forms, the induced action on the coefficients and the
//! invariants it preserves.

use paracosym::cli::load_config;
use paracosym::fields::Expr;
use paracosym::frame::{extract_coeffs, frame_from_model, gauge_action_matrix, gauge_relations, gauge_transform, invariants};
use paracosym::pac::PointGeometry;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/generalized_ee_mixed.json");
    let (_, model) = load_config(path.as_ref()).unwrap();
    let p = [0.2, 0.4, -0.3, 0.1, 0.6];
    let geo = PointGeometry::new(&model, &p, 3).unwrap();
    let fs = frame_from_model(&geo, 1e-8).unwrap();
    let c0 = extract_coeffs(&fs).coeffs;

    // α = 0.3 + x1 y2 varies along the frame, so dα enters ω'.
    let alpha = Expr::sum([Expr::constant(0.3), Expr::product([Expr::var(1), Expr::var(4)])]);
    let after = gauge_transform(&geo, &fs, &alpha).unwrap();
    let [tau, omega, d_omega] = gauge_relations(&geo, &fs, &after, &alpha).unwrap();
    println!("tau' = tau: {tau:.1e}   omega' = omega + a(tau1 + tau2) + da: {omega:.1e}   D omega' law: {d_omega:.1e}");

    let c1 = extract_coeffs(&after).coeffs;
    let want = gauge_action_matrix(&c0, alpha.eval(&p));
    println!("before    {c0:?}");
    println!("after     {c1:?}");
    println!("predicted {want:?}");

    let (i0, i1) = (invariants(&c0), invariants(&c1));
    println!("I1 {:+.12} -> {:+.12}", i0.i1, i1.i1);
    println!("I2 {:+.12} -> {:+.12}", i0.i2, i1.i2);
    println!("det {:+.12} -> {:+.12}", i0.det, i1.det);
    println!("I1 with sigma + 2 gamma {:+.6} -> {:+.6} (not invariant)", i0.i1_alt, i1.i1_alt);

    // The action is a group action: composing α and β is α + β.
    let (a, b) = (0.7, -1.9);
    let two = gauge_action_matrix(&gauge_action_matrix(&c0, a), b);
    let one = gauge_action_matrix(&c0, a + b);
    println!("composition gamma {:+.12} vs {:+.12}", two.gamma, one.gamma);
}
