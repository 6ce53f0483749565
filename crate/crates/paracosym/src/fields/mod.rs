//! Expression language and exterior calculus on a chart.

pub mod expr;
pub mod forms;

pub use expr::{Expr, ExprError, Poly};
pub use forms::{phi_decompose, Coef, Form};

/// Vector field as chart components.
pub type VectorField = Vec<Expr>;

/// Lie bracket `[X, Y]^a = X^b ∂_b Y^a − Y^b ∂_b X^a`.
pub fn bracket(x: &[Expr], y: &[Expr]) -> VectorField {
    let n = x.len();
    (0..n)
        .map(|a| {
            Expr::sum((0..n).flat_map(|b| [&x[b] * &y[a].diff(b), (&y[b] * &x[a].diff(b)).neg()]))
        })
        .collect()
}

/// Evaluates a vector field at a point.
pub fn eval_field(v: &[Expr], p: &[f64]) -> Vec<f64> {
    v.iter().map(|e| e.eval(p)).collect()
}
