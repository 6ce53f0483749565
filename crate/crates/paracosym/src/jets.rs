//! Truncated multivariate Taylor jets.
//!
//! A [`Jet`] stores the Taylor coefficients of a scalar function around a
//! point, up to total degree 3, in `n <= 5` variables. Coefficients are kept
//! densely in a degree-graded order, so the jet of order `k` is a prefix of
//! the jet of order `k + 1`.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use thiserror::Error;

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 3;
/// Largest supported number of variables.
pub const MAX_VARS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("division by a jet with zero value")]
    DivisionByZero,
    #[error("{0} evaluated outside its domain")]
    Domain(&'static str),
    #[error("jet order {0} exceeds the supported maximum {MAX_ORDER}")]
    Order(usize),
    #[error("variable count {0} is not supported")]
    Arity(usize),
}

/// Multi-index bookkeeping for one variable count.
struct Tables {
    /// Multi-indices sorted by total degree.
    indices: Vec<[u8; MAX_VARS]>,
    /// Number of multi-indices of degree `<= k`, for k = 0..=MAX_ORDER.
    len_at: [usize; MAX_ORDER + 1],
    /// Product table `(i, j, k)`: monomial i times monomial j is monomial k.
    /// Sorted by k so truncation to order `m` is a prefix filter on k.
    products: Vec<(u16, u16, u16)>,
    /// `derivative[v][k]`: for monomial k, the index of `k + e_v` and the
    /// factor `k_v + 1`; `None` when the degree would exceed MAX_ORDER.
    shift: Vec<Vec<Option<(u16, f64)>>>,
}

fn encode(a: &[u8; MAX_VARS]) -> usize {
    a.iter().fold(0, |acc, &x| acc * 4 + x as usize)
}

impl Tables {
    fn build(n: usize) -> Tables {
        let mut indices = Vec::new();
        for deg in 0..=MAX_ORDER {
            let mut cur = [0u8; MAX_VARS];
            collect(n, 0, deg as u8, &mut cur, &mut indices);
        }
        let mut len_at = [0; MAX_ORDER + 1];
        for (k, slot) in len_at.iter_mut().enumerate() {
            *slot = indices
                .iter()
                .filter(|a| a.iter().map(|&x| x as usize).sum::<usize>() <= k)
                .count();
        }
        let mut lookup = vec![u16::MAX; 4usize.pow(MAX_VARS as u32)];
        for (i, a) in indices.iter().enumerate() {
            lookup[encode(a)] = i as u16;
        }
        let degree = |a: &[u8; MAX_VARS]| a.iter().map(|&x| x as usize).sum::<usize>();
        let mut products = Vec::new();
        for (i, a) in indices.iter().enumerate() {
            for (j, b) in indices.iter().enumerate() {
                if degree(a) + degree(b) > MAX_ORDER {
                    continue;
                }
                let mut c = [0u8; MAX_VARS];
                for v in 0..MAX_VARS {
                    c[v] = a[v] + b[v];
                }
                products.push((i as u16, j as u16, lookup[encode(&c)]));
            }
        }
        products.sort_by_key(|p| p.2);
        let mut shift = Vec::new();
        for v in 0..n {
            let mut row = Vec::new();
            for a in &indices {
                if degree(a) == MAX_ORDER {
                    row.push(None);
                } else {
                    let mut c = *a;
                    c[v] += 1;
                    row.push(Some((lookup[encode(&c)], c[v] as f64)));
                }
            }
            shift.push(row);
        }
        Tables { indices, len_at, products, shift }
    }
}

fn collect(n: usize, v: usize, left: u8, cur: &mut [u8; MAX_VARS], out: &mut Vec<[u8; MAX_VARS]>) {
    if v + 1 == n || n == 0 {
        if n > 0 {
            cur[v] = left;
        } else if left > 0 {
            return;
        }
        out.push(*cur);
        if n > 0 {
            cur[v] = 0;
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[v] = k;
        collect(n, v + 1, left - k, cur, out);
    }
    cur[v] = 0;
}

fn tables(n: usize) -> &'static Tables {
    static CELLS: OnceLock<Vec<Tables>> = OnceLock::new();
    &CELLS.get_or_init(|| (0..=MAX_VARS).map(Tables::build).collect())[n]
}

/// Number of coefficients of a jet of the given order in `n` variables,
/// `C(n + order, order)`.
pub fn coeff_count(n: usize, order: usize) -> usize {
    tables(n).len_at[order]
}

/// Truncated Taylor expansion of a scalar function at a point.
///
/// The center itself is not stored; arithmetic between jets assumes they
/// were lifted at the same point. Mixed orders combine at the lower order.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    nvars: usize,
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet {
    /// The constant jet `c`.
    pub fn constant(nvars: usize, order: usize, c: f64) -> Jet {
        assert!(nvars <= MAX_VARS && order <= MAX_ORDER);
        let mut coeffs = vec![0.0; coeff_count(nvars, order)];
        coeffs[0] = c;
        Jet { nvars, order, coeffs }
    }

    pub fn zero(nvars: usize, order: usize) -> Jet {
        Jet::constant(nvars, order, 0.0)
    }

    /// The coordinate function `x_var` expanded around a point where it takes
    /// the value `value`.
    pub fn variable(nvars: usize, order: usize, var: usize, value: f64) -> Jet {
        let mut j = Jet::constant(nvars, order, value);
        if order >= 1 {
            let t = tables(nvars);
            let idx = t.shift[var][0].expect("degree 0 shifts").0 as usize;
            j.coeffs[idx] = 1.0;
        }
        j
    }

    /// Builds a jet from raw coefficients in this module's monomial order.
    pub fn from_coeffs(nvars: usize, order: usize, coeffs: Vec<f64>) -> Jet {
        assert_eq!(coeffs.len(), coeff_count(nvars, order));
        Jet { nvars, order, coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Multi-indices in coefficient order.
    pub fn monomials(&self) -> impl Iterator<Item = &'static [u8]> {
        let n = self.nvars;
        tables(n).indices[..self.coeffs.len()].iter().map(move |a| &a[..n])
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficient of the monomial with exponents `alpha`, i.e.
    /// `∂^α f / α!` at the center. Zero beyond the truncation order.
    pub fn coeff(&self, alpha: &[u8]) -> f64 {
        let mut a = [0u8; MAX_VARS];
        a[..alpha.len()].copy_from_slice(alpha);
        let t = tables(self.nvars);
        match t.indices[..self.coeffs.len()].iter().position(|m| *m == a) {
            Some(i) => self.coeffs[i],
            None => 0.0,
        }
    }

    /// Partial derivative `∂^α f` at the center.
    pub fn derivative(&self, alpha: &[u8]) -> f64 {
        let fact: f64 = alpha.iter().map(|&k| (1..=k as u32).product::<u32>() as f64).product();
        self.coeff(alpha) * fact
    }

    /// Gradient at the center.
    pub fn gradient(&self) -> Vec<f64> {
        (0..self.nvars)
            .map(|v| {
                if self.order == 0 {
                    return 0.0;
                }
                let idx = tables(self.nvars).shift[v][0].expect("degree 0 shifts").0 as usize;
                self.coeffs[idx]
            })
            .collect()
    }

    /// The jet `∂f/∂x_var`, one order lower. Panics on an order-0 jet.
    pub fn partial(&self, var: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let t = tables(self.nvars);
        let out_len = t.len_at[self.order - 1];
        let coeffs = (0..out_len)
            .map(|k| {
                let (idx, f) = t.shift[var][k].expect("degree below max");
                f * self.coeffs[idx as usize]
            })
            .collect();
        Jet { nvars: self.nvars, order: self.order - 1, coeffs }
    }

    /// Drops all coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        Jet {
            nvars: self.nvars,
            order,
            coeffs: self.coeffs[..coeff_count(self.nvars, order)].to_vec(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet { nvars: self.nvars, order: self.order, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn combine(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        assert_eq!(self.nvars, other.nvars, "jet variable count mismatch");
        let order = self.order.min(other.order);
        let len = coeff_count(self.nvars, order);
        let coeffs = (0..len).map(|k| f(self.coeffs[k], other.coeffs[k])).collect();
        Jet { nvars: self.nvars, order, coeffs }
    }

    fn product(&self, other: &Jet) -> Jet {
        assert_eq!(self.nvars, other.nvars, "jet variable count mismatch");
        let order = self.order.min(other.order);
        let len = coeff_count(self.nvars, order);
        let mut coeffs = vec![0.0; len];
        for &(i, j, k) in &tables(self.nvars).products {
            let k = k as usize;
            if k >= len {
                break;
            }
            let (a, b) = (self.coeffs[i as usize], other.coeffs[j as usize]);
            if a != 0.0 && b != 0.0 {
                coeffs[k] += a * b;
            }
        }
        Jet { nvars: self.nvars, order, coeffs }
    }

    /// Composes a univariate function with this jet, given the derivatives
    /// `f(a), f'(a), f''(a), f'''(a)` at the center value `a`.
    pub fn compose(&self, derivs: [f64; MAX_ORDER + 1]) -> Jet {
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut out = Jet::constant(self.nvars, self.order, derivs[0]);
        let mut power = Jet::constant(self.nvars, self.order, 1.0);
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate().skip(1).take(self.order) {
            power = power.product(&h);
            fact *= k as f64;
            out += &power.scale(d / fact);
        }
        out
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        Ok(self.compose([1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a), -6.0 / (a * a * a * a)]))
    }

    pub fn try_div(&self, other: &Jet) -> Result<Jet, JetError> {
        Ok(self.product(&other.recip()?))
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose([e; 4])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a <= 0.0 {
            return Err(JetError::Domain("sqrt"));
        }
        let r = a.sqrt();
        Ok(self.compose([r, 0.5 / r, -0.25 / (r * a), 0.375 / (r * a * a)]))
    }

    pub fn powi(&self, k: u32) -> Jet {
        let mut out = Jet::constant(self.nvars, self.order, 1.0);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.product(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.product(&base);
            }
        }
        out
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        if rhs.order < self.order {
            *self = self.truncate(rhs.order);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        if rhs.order < self.order {
            *self = self.truncate(rhs.order);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(self, rhs)
            }
        }
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.combine(b, |x, y| x + y));
binop!(Sub, sub, |a, b| a.combine(b, |x, y| x - y));
binop!(Mul, mul, |a, b| a.product(b));
binop!(Div, div, |a, b| a.try_div(b).expect("division by a jet with zero value"));

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

/// Dense square matrix of jets, row-major.
#[derive(Clone, Debug)]
pub struct JetMatrix {
    pub n: usize,
    pub entries: Vec<Jet>,
}

impl JetMatrix {
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Jet) -> JetMatrix {
        let mut f = f;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        JetMatrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet {
        &self.entries[i * self.n + j]
    }

    pub fn values(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).value()).collect()).collect()
    }

    pub fn mul(&self, other: &JetMatrix) -> JetMatrix {
        let n = self.n;
        JetMatrix::from_fn(n, |i, j| {
            let mut acc = self.get(i, 0) * other.get(0, j);
            for k in 1..n {
                acc += &(self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    pub fn transpose(&self) -> JetMatrix {
        JetMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Inverse as a jet matrix: Neumann series around the inverse of the
    /// constant part, exact up to the truncation order.
    pub fn inverse(&self) -> Option<JetMatrix> {
        let n = self.n;
        let vals = self.values();
        let m0 = nalgebra::DMatrix::from_fn(n, n, |i, j| vals[i][j]);
        let inv0 = m0.try_inverse()?;
        let first = &self.entries[0];
        let (nv, order) = (first.nvars(), self.entries.iter().map(Jet::order).min().unwrap_or(0));
        let c = JetMatrix::from_fn(n, |i, j| Jet::constant(nv, order, inv0[(i, j)]));
        // M = M0 (I + N) with N = M0^{-1}(M - M0); N has zero constant part.
        let dev = JetMatrix::from_fn(n, |i, j| {
            let mut e = self.get(i, j).truncate(order);
            e.coeffs[0] = 0.0;
            e
        });
        let nmat = c.mul(&dev);
        let ident = JetMatrix::from_fn(n, |i, j| Jet::constant(nv, order, if i == j { 1.0 } else { 0.0 }));
        // (I + N)^{-1} = I - N + N^2 - N^3 (N nilpotent to this order).
        let mut series = ident.clone();
        let mut term = ident;
        for k in 1..=order {
            term = term.mul(&nmat);
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            for (s, t) in series.entries.iter_mut().zip(&term.entries) {
                *s += &t.scale(sign);
            }
        }
        Some(series.mul(&c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_counts() {
        assert_eq!(coeff_count(5, 3), 56);
        assert_eq!(coeff_count(3, 3), 20);
        assert_eq!(coeff_count(5, 2), 21);
        assert_eq!(coeff_count(1, 3), 4);
    }

    #[test]
    fn monomial_product() {
        let p = [0.0, 1.0, 2.0, 0.0, 0.0];
        let x1 = Jet::variable(5, 2, 1, p[1]);
        let x2 = Jet::variable(5, 2, 2, p[2]);
        let f = &x1 * &x2;
        assert_eq!(f.value(), 2.0);
        assert_eq!(f.derivative(&[0, 1, 0, 0, 0]), 2.0);
        assert_eq!(f.derivative(&[0, 0, 1, 0, 0]), 1.0);
        assert_eq!(f.coeff(&[0, 1, 1, 0, 0]), 1.0);
    }

    #[test]
    fn exponential_series() {
        let e = Jet::variable(1, 3, 0, 0.0).exp();
        assert_eq!(e.coeffs(), &[1.0, 1.0, 0.5, 1.0 / 6.0]);
    }

    #[test]
    fn geometric_series() {
        let x = Jet::variable(1, 3, 0, 0.0);
        let one = Jet::constant(1, 3, 1.0);
        let g = (&one - &x).recip().unwrap();
        for c in g.coeffs() {
            assert!((c - 1.0).abs() < 1e-15);
        }
        let q = (&one + &x) * (&one - &x);
        assert_eq!(&q.coeffs()[..3], &[1.0, 0.0, -1.0]);
    }

    #[test]
    fn reciprocal_of_derivative_jet() {
        let y1 = Jet::variable(5, 3, 3, 0.4);
        let d = y1.partial(3);
        let a = Jet::constant(5, 2, 1.0) / d;
        assert_eq!(a, Jet::constant(5, 2, 1.0));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let x = Jet::variable(2, 2, 0, 0.0);
        assert_eq!(x.recip(), Err(JetError::DivisionByZero));
    }

    #[test]
    fn partial_lowers_order() {
        let x = Jet::variable(2, 3, 0, 0.5);
        let y = Jet::variable(2, 3, 1, -0.25);
        let f = x.powi(2) * &y;
        let fx = f.partial(0);
        assert_eq!(fx.order(), 2);
        assert!((fx.value() - 2.0 * 0.5 * -0.25).abs() < 1e-15);
        assert!((fx.derivative(&[1, 1]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_inverse_matches_series() {
        let x = Jet::variable(2, 3, 0, 0.1);
        let y = Jet::variable(2, 3, 1, 0.2);
        let one = Jet::constant(2, 3, 1.0);
        let m = JetMatrix { n: 2, entries: vec![&one + &x, y.clone(), &x * &y, &one - &y] };
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let e = prod.get(i, j);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((e.value() - target).abs() < 1e-14);
                for c in &e.coeffs()[1..] {
                    assert!(c.abs() < 1e-13);
                }
            }
        }
    }
}
