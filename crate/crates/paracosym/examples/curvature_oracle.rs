//! The coordinate curvature oracle on two metrics with known curvature:
//! the round sphere of radius 2 and a plane wave.

use paracosym::fields::Expr;
use paracosym::jets::JetMatrix;
use paracosym::riemann::{idx, Curvature};

fn metric(entries: &[Vec<Expr>], p: &[f64]) -> JetMatrix {
    let n = entries.len();
    JetMatrix::from_fn(n, |i, j| entries[i][j].jet(p, 3).unwrap())
}

fn main() {
    // 4(dθ² + sin²θ dφ²): Gaussian curvature 1/4, scalar curvature 1/2.
    let th = Expr::var(0);
    let sphere = vec![
        vec![Expr::constant(4.0), Expr::zero()],
        vec![Expr::zero(), th.sin().pow(2).scale(4.0)],
    ];
    let p = [0.8, 0.1];
    let c = Curvature::from_metric(&metric(&sphere, &p)).unwrap();
    let g = c.g_values();
    let k = c.rm_values()[idx(2, &[0, 1, 1, 0])] / (g[0] * g[3]);
    println!("sphere: r = {:.12} (expected 0.5), sectional curvature {:.12} (expected 0.25)", c.scalar.value(), k);

    // dx² + dy² + 2 du dv + H du² on (x, y, u, v) with H = x² + y²: scalar
    // flat, Ric = −(H_xx + H_yy)/2 du² = −2 du².
    let (x, y) = (Expr::var(0), Expr::var(1));
    let h = Expr::sum([x.pow(2), y.pow(2)]);
    let z = Expr::zero;
    let one = Expr::one;
    let wave = vec![
        vec![one(), z(), z(), z()],
        vec![z(), one(), z(), z()],
        vec![z(), z(), h, one()],
        vec![z(), z(), one(), z()],
    ];
    let c = Curvature::from_metric(&metric(&wave, &[0.2, -0.5, 0.3, 0.7])).unwrap();
    let ric = c.ricci_values();
    println!("plane wave: signature {:?}, r = {:.3e}, Ric_uu = {:.12} (expected -2)", c.signature, c.scalar.value(), ric[2 * 4 + 2]);
    let (pair, skew, bianchi) = c.symmetry_residuals();
    println!("symmetries: pair {pair:.1e}, skew {skew:.1e}, first Bianchi {bianchi:.1e}, second Bianchi {:.1e}", c.second_bianchi_residual());
}
