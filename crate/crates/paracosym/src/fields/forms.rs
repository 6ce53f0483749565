//! Differential forms on a chart of dimension at most 5.
//!
//! Components are stored under sorted index sets (bit masks), so
//! antisymmetry is structural. The wedge and exterior derivative use the
//! factorial-free convention: `(a ∧ b)(X, Y) = a(X)b(Y) − a(Y)b(X)` and
//! `(ι_v a)(X₁, …) = a(v, X₁, …)`.

use std::collections::BTreeMap;

use super::expr::Expr;
use crate::jets::Jet;

/// Coefficient ring for forms: reals, jets or symbolic expressions.
pub trait Coef: Clone {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, s: f64) -> Self;
}

impl Coef for f64 {
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, o: &f64) -> f64 {
        self + o
    }
    fn mul(&self, o: &f64) -> f64 {
        self * o
    }
    fn scale(&self, s: f64) -> f64 {
        self * s
    }
}

impl Coef for Jet {
    fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|c| *c == 0.0)
    }
    fn add(&self, o: &Jet) -> Jet {
        self + o
    }
    fn mul(&self, o: &Jet) -> Jet {
        self * o
    }
    fn scale(&self, s: f64) -> Jet {
        Jet::scale(self, s)
    }
}

impl Coef for Expr {
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
    fn add(&self, o: &Expr) -> Expr {
        self + o
    }
    fn mul(&self, o: &Expr) -> Expr {
        self * o
    }
    fn scale(&self, s: f64) -> Expr {
        Expr::scale(self, s)
    }
}

/// Index set as a bit mask over chart coordinates.
pub type Mask = u8;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: Mask) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of the permutation sorting the concatenation of two disjoint sorted
/// index sets.
fn merge_sign(a: Mask, b: Mask) -> f64 {
    let mut inversions = 0;
    for i in indices_of(a) {
        inversions += (b & ((1u16 << i) as u8).wrapping_sub(1)).count_ones();
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A k-form with coefficients in `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<T> {
    pub dim: usize,
    pub degree: usize,
    pub comps: BTreeMap<Mask, T>,
}

impl<T: Coef> Form<T> {
    pub fn zero(dim: usize, degree: usize) -> Form<T> {
        Form { dim, degree, comps: BTreeMap::new() }
    }

    /// A 0-form.
    pub fn scalar(dim: usize, f: T) -> Form<T> {
        let mut out = Form::zero(dim, 0);
        out.insert(0, f);
        out
    }

    /// A 1-form from its coordinate components.
    pub fn one_form(comps: Vec<T>) -> Form<T> {
        let dim = comps.len();
        let mut out = Form::zero(dim, 1);
        for (i, c) in comps.into_iter().enumerate() {
            out.insert(1 << i, c);
        }
        out
    }

    /// A 2-form from an antisymmetric matrix of components (upper triangle
    /// is read).
    pub fn two_form(m: &[Vec<T>]) -> Form<T> {
        let dim = m.len();
        let mut out = Form::zero(dim, 2);
        for i in 0..dim {
            for j in i + 1..dim {
                out.insert((1 << i) | (1 << j), m[i][j].clone());
            }
        }
        out
    }

    pub fn insert(&mut self, mask: Mask, c: T) {
        if c.is_zero() {
            return;
        }
        match self.comps.get_mut(&mask) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    self.comps.remove(&mask);
                }
            }
            None => {
                self.comps.insert(mask, c);
            }
        }
    }

    /// Component for an arbitrary index tuple, with permutation sign applied.
    pub fn component(&self, idx: &[usize]) -> Option<T> {
        let mut inversions = 0;
        for i in 0..idx.len() {
            for j in i + 1..idx.len() {
                if idx[i] == idx[j] {
                    return None;
                }
                if idx[i] > idx[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        self.comps.get(&mask_of(idx)).map(|c| c.scale(sign))
    }

    pub fn add(&self, other: &Form<T>) -> Form<T> {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (m, c) in &other.comps {
            out.insert(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form<T>) -> Form<T> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Form<T> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, c.scale(s));
        }
        out
    }

    /// Multiplication by a function.
    pub fn times(&self, f: &T) -> Form<T> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, c.mul(f));
        }
        out
    }

    pub fn wedge(&self, other: &Form<T>) -> Form<T> {
        assert_eq!(self.dim, other.dim, "chart mismatch in wedge");
        let mut out = Form::zero(self.dim, self.degree + other.degree);
        if self.degree + other.degree > self.dim {
            return out;
        }
        for (ma, ca) in &self.comps {
            for (mb, cb) in &other.comps {
                if ma & mb != 0 {
                    continue;
                }
                out.insert(ma | mb, ca.mul(cb).scale(merge_sign(*ma, *mb)));
            }
        }
        out
    }

    /// Interior product with a vector given by its components.
    pub fn interior(&self, v: &[T]) -> Form<T> {
        assert!(self.degree >= 1, "interior product of a function");
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (m, c) in &self.comps {
            for (pos, i) in indices_of(*m).into_iter().enumerate() {
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                out.insert(m & !(1 << i), c.mul(&v[i]).scale(sign));
            }
        }
        out
    }

    /// Pullback by an endomorphism field: `(φκ)(X₁, …) = κ(φX₁, …)`.
    /// `phi[a][b]` is the `a`-th component of `φ(∂_b)`.
    pub fn pullback(&self, phi: &[Vec<T>]) -> Form<T> {
        let n = self.dim;
        let pulled: Vec<Form<T>> = (0..n).map(|a| Form::one_form((0..n).map(|b| phi[a][b].clone()).collect())).collect();
        let mut out = Form::zero(n, self.degree);
        for (m, c) in &self.comps {
            let mut acc: Option<Form<T>> = None;
            for i in indices_of(*m) {
                acc = Some(match acc {
                    None => pulled[i].clone(),
                    Some(f) => f.wedge(&pulled[i]),
                });
            }
            let term = match acc {
                None => Form::scalar(n, c.clone()),
                Some(f) => f.times(c),
            };
            out = out.add(&term);
        }
        out
    }
}

impl Form<f64> {
    /// Evaluates the form on `degree` vectors.
    pub fn eval(&self, vs: &[Vec<f64>]) -> f64 {
        assert_eq!(vs.len(), self.degree);
        let mut total = 0.0;
        for (m, c) in &self.comps {
            let idx = indices_of(*m);
            total += c * det_minor(vs, &idx);
        }
        total
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

fn det_minor(vs: &[Vec<f64>], idx: &[usize]) -> f64 {
    let k = idx.len();
    let m = nalgebra::DMatrix::from_fn(k, k, |r, c| vs[c][idx[r]]);
    if k == 0 {
        1.0
    } else {
        m.determinant()
    }
}

impl Form<Jet> {
    /// Exterior derivative; the result has one jet order less.
    pub fn d(&self) -> Form<Jet> {
        let mut out = Form::zero(self.dim, self.degree + 1);
        for (m, c) in &self.comps {
            for j in 0..self.dim {
                if m & (1 << j) != 0 {
                    continue;
                }
                out.insert(m | (1 << j), c.partial(j).scale(merge_sign(1 << j, *m)));
            }
        }
        out
    }

    /// Values at the center.
    pub fn values(&self) -> Form<f64> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, c.value());
        }
        out
    }
}

impl Form<Expr> {
    /// Symbolic exterior derivative.
    pub fn d(&self) -> Form<Expr> {
        let mut out = Form::zero(self.dim, self.degree + 1);
        for (m, c) in &self.comps {
            for j in 0..self.dim {
                if m & (1 << j) != 0 {
                    continue;
                }
                out.insert(m | (1 << j), c.diff(j).scale(merge_sign(1 << j, *m)));
            }
        }
        out
    }

    pub fn jets(&self, p: &[f64], order: usize) -> Result<Form<Jet>, super::expr::ExprError> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, c.jet(p, order)?);
        }
        Ok(out)
    }

    pub fn eval_at(&self, p: &[f64]) -> Form<f64> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.comps {
            out.insert(*m, c.eval(p));
        }
        out
    }
}

/// Decomposition of a form into φ-invariant, φ-anti-invariant and φ-null
/// parts: `κ⁺ = ½(κ + φκ − η∧ι_ξκ)`, `κ⁻ = ½(κ − φκ − η∧ι_ξκ)`,
/// `κ⁰ = η∧ι_ξκ`.
pub fn phi_decompose<T: Coef>(k: &Form<T>, phi: &[Vec<T>], xi: &[T], eta: &Form<T>) -> (Form<T>, Form<T>, Form<T>) {
    let pk = k.pullback(phi);
    let null = if k.degree == 0 { Form::zero(k.dim, 0) } else { eta.wedge(&k.interior(xi)) };
    let plus = k.add(&pk).sub(&null).scale(0.5);
    let minus = k.sub(&pk).sub(&null).scale(0.5);
    (plus, minus, null)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dx(i: usize, n: usize) -> Form<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Form::one_form(v)
    }

    #[test]
    fn wedge_of_a_one_form_with_itself_vanishes() {
        let a = dx(1, 5);
        assert!(a.wedge(&a).comps.is_empty());
    }

    #[test]
    fn wedge_evaluation_convention() {
        let a = Form::one_form(vec![1.0, 2.0, 0.0]);
        let b = Form::one_form(vec![0.0, -1.0, 3.0]);
        let w = a.wedge(&b);
        let x = vec![0.3, 0.1, -0.2];
        let y = vec![-0.5, 0.7, 0.4];
        let dot = |f: &Form<f64>, v: &Vec<f64>| f.eval(&[v.clone()]);
        let expect = dot(&a, &x) * dot(&b, &y) - dot(&a, &y) * dot(&b, &x);
        assert!((w.eval(&[x, y]) - expect).abs() < 1e-14);
    }

    #[test]
    fn graded_commutativity() {
        let a = dx(0, 4).add(&dx(2, 4).scale(2.0));
        let b = dx(1, 4).wedge(&dx(3, 4));
        assert_eq!(a.wedge(&b), b.wedge(&a));
        let c = dx(3, 4);
        assert_eq!(a.wedge(&c), c.wedge(&a).scale(-1.0));
    }

    #[test]
    fn d_of_x1_dx2() {
        let x1 = Expr::var(1);
        let f: Form<Expr> = Form::one_form(vec![Expr::zero(), Expr::zero(), x1, Expr::zero(), Expr::zero()]);
        let df = f.d().eval_at(&[0.0; 5]);
        assert_eq!(df, dx(1, 5).wedge(&dx(2, 5)));
        let dt: Form<Expr> = Form::one_form(vec![Expr::one(), Expr::zero(), Expr::zero(), Expr::zero(), Expr::zero()]);
        assert!(dt.d().comps.is_empty());
    }

    #[test]
    fn interior_product_on_wedge() {
        let a = Form::one_form(vec![1.0, 2.0, 0.5]);
        let b = Form::one_form(vec![0.0, -1.0, 3.0]);
        let v = vec![0.2, -0.3, 0.9];
        let lhs = a.wedge(&b).interior(&v);
        let rhs = b.scale(a.eval(&[v.clone()])).sub(&a.scale(b.eval(&[v])));
        for (m, c) in &lhs.comps {
            assert!((c - rhs.comps.get(m).copied().unwrap_or(0.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn component_sign_for_unsorted_tuple() {
        let w = dx(0, 3).wedge(&dx(2, 3));
        assert_eq!(w.component(&[2, 0]), Some(-1.0));
        assert_eq!(w.component(&[0, 0]), None);
    }
}
