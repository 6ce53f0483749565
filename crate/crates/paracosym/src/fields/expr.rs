//! Scalar expression trees over chart coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::jets::{Jet, JetError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable index {index} outside a {dim}-dimensional chart")]
    Arity { index: usize, dim: usize },
    #[error("malformed expression JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("expression is not polynomial in the requested variables")]
    NotPolynomial,
}

/// Coordinate names of the 5-dimensional chart.
pub const NAMES5: [&str; 5] = ["t", "x1", "x2", "y1", "y2"];
/// Coordinate names of the 3-dimensional chart.
pub const NAMES3: [&str; 3] = ["x", "y", "z"];

/// Chart position of a JSON variable name.
pub fn var_index(name: &str) -> Option<usize> {
    NAMES5.iter().position(|n| *n == name).or_else(|| NAMES3.iter().position(|n| *n == name))
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(f64),
    Var(usize),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Expr),
    Recip(Expr),
    Pow(Expr, u32),
    Exp(Expr),
    Sin(Expr),
    Cos(Expr),
}

/// Immutable, cheaply clonable expression.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn node(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn constant(c: f64) -> Expr {
        Expr::node(Node::Const(c))
    }

    pub fn zero() -> Expr {
        Expr::constant(0.0)
    }

    pub fn one() -> Expr {
        Expr::constant(1.0)
    }

    pub fn var(i: usize) -> Expr {
        Expr::node(Node::Var(i))
    }

    pub fn as_const(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut c = 0.0;
        for t in terms {
            match &*t.0 {
                Node::Const(v) => c += v,
                Node::Add(inner) => {
                    for s in inner {
                        match s.as_const() {
                            Some(v) => c += v,
                            None => flat.push(s.clone()),
                        }
                    }
                }
                _ => flat.push(t),
            }
        }
        if c != 0.0 {
            flat.push(Expr::constant(c));
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::node(Node::Add(flat)),
        }
    }

    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut c = 1.0;
        for f in factors {
            match &*f.0 {
                Node::Const(v) => c *= v,
                Node::Mul(inner) => {
                    for s in inner {
                        match s.as_const() {
                            Some(v) => c *= v,
                            None => flat.push(s.clone()),
                        }
                    }
                }
                _ => flat.push(f),
            }
        }
        if c == 0.0 {
            return Expr::zero();
        }
        if c != 1.0 {
            flat.insert(0, Expr::constant(c));
        }
        match flat.len() {
            0 => Expr::one(),
            1 => flat.pop().unwrap(),
            _ => Expr::node(Node::Mul(flat)),
        }
    }

    pub fn neg(&self) -> Expr {
        match &*self.0 {
            Node::Const(c) => Expr::constant(-c),
            Node::Neg(a) => a.clone(),
            _ => Expr::node(Node::Neg(self.clone())),
        }
    }

    pub fn recip(&self) -> Expr {
        match &*self.0 {
            Node::Const(c) if *c != 0.0 => Expr::constant(1.0 / c),
            _ => Expr::node(Node::Recip(self.clone())),
        }
    }

    pub fn pow(&self, k: u32) -> Expr {
        match (&*self.0, k) {
            (_, 0) => Expr::one(),
            (_, 1) => self.clone(),
            (Node::Const(c), _) => Expr::constant(c.powi(k as i32)),
            _ => Expr::node(Node::Pow(self.clone(), k)),
        }
    }

    pub fn exp(&self) -> Expr {
        match &*self.0 {
            Node::Const(c) if *c == 0.0 => Expr::one(),
            _ => Expr::node(Node::Exp(self.clone())),
        }
    }

    pub fn sin(&self) -> Expr {
        match &*self.0 {
            Node::Const(c) if *c == 0.0 => Expr::zero(),
            _ => Expr::node(Node::Sin(self.clone())),
        }
    }

    pub fn cos(&self) -> Expr {
        match &*self.0 {
            Node::Const(c) if *c == 0.0 => Expr::one(),
            _ => Expr::node(Node::Cos(self.clone())),
        }
    }

    pub fn scale(&self, s: f64) -> Expr {
        Expr::product([Expr::constant(s), self.clone()])
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match &*self.0 {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Add(v) | Node::Mul(v) => v.iter().filter_map(Expr::max_var).max(),
            Node::Neg(a) | Node::Recip(a) | Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) => {
                a.max_var()
            }
        }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        match &*self.0 {
            Node::Const(_) => false,
            Node::Var(i) => *i == var,
            Node::Add(v) | Node::Mul(v) => v.iter().any(|e| e.depends_on(var)),
            Node::Neg(a) | Node::Recip(a) | Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) => {
                a.depends_on(var)
            }
        }
    }

    /// Formal partial derivative with respect to coordinate `var`.
    pub fn diff(&self, var: usize) -> Expr {
        if !self.depends_on(var) {
            return Expr::zero();
        }
        match &*self.0 {
            Node::Const(_) => Expr::zero(),
            Node::Var(i) => Expr::constant(if *i == var { 1.0 } else { 0.0 }),
            Node::Add(v) => Expr::sum(v.iter().map(|e| e.diff(var))),
            Node::Mul(v) => Expr::sum((0..v.len()).map(|k| {
                Expr::product(v.iter().enumerate().map(|(j, e)| if j == k { e.diff(var) } else { e.clone() }))
            })),
            Node::Neg(a) => a.diff(var).neg(),
            Node::Recip(a) => Expr::product([a.diff(var), a.pow(2).recip()]).neg(),
            Node::Pow(a, k) => Expr::product([Expr::constant(*k as f64), a.pow(k - 1), a.diff(var)]),
            Node::Exp(a) => Expr::product([self.clone(), a.diff(var)]),
            Node::Sin(a) => Expr::product([a.cos(), a.diff(var)]),
            Node::Cos(a) => Expr::product([a.sin(), a.diff(var)]).neg(),
        }
    }

    /// Numeric value at a point.
    pub fn eval(&self, p: &[f64]) -> f64 {
        match &*self.0 {
            Node::Const(c) => *c,
            Node::Var(i) => p[*i],
            Node::Add(v) => v.iter().map(|e| e.eval(p)).sum(),
            Node::Mul(v) => v.iter().map(|e| e.eval(p)).product(),
            Node::Neg(a) => -a.eval(p),
            Node::Recip(a) => 1.0 / a.eval(p),
            Node::Pow(a, k) => a.eval(p).powi(*k as i32),
            Node::Exp(a) => a.eval(p).exp(),
            Node::Sin(a) => a.eval(p).sin(),
            Node::Cos(a) => a.eval(p).cos(),
        }
    }

    /// Truncated Taylor expansion at `p`.
    pub fn jet(&self, p: &[f64], order: usize) -> Result<Jet, ExprError> {
        let n = p.len();
        Ok(match &*self.0 {
            Node::Const(c) => Jet::constant(n, order, *c),
            Node::Var(i) => {
                if *i >= n {
                    return Err(ExprError::Arity { index: *i, dim: n });
                }
                Jet::variable(n, order, *i, p[*i])
            }
            Node::Add(v) => {
                let mut acc = Jet::zero(n, order);
                for e in v {
                    acc += &e.jet(p, order)?;
                }
                acc
            }
            Node::Mul(v) => {
                let mut acc = Jet::constant(n, order, 1.0);
                for e in v {
                    acc = acc * e.jet(p, order)?;
                }
                acc
            }
            Node::Neg(a) => -a.jet(p, order)?,
            Node::Recip(a) => a.jet(p, order)?.recip()?,
            Node::Pow(a, k) => a.jet(p, order)?.powi(*k),
            Node::Exp(a) => a.jet(p, order)?.exp(),
            Node::Sin(a) => a.jet(p, order)?.sin(),
            Node::Cos(a) => a.jet(p, order)?.cos(),
        })
    }

    /// Coefficients of this expression as a polynomial in `var`, each
    /// coefficient free of `var`. Fails when `var` appears under a
    /// non-polynomial primitive.
    pub fn coeffs_in(&self, var: usize) -> Result<Vec<Expr>, ExprError> {
        if !self.depends_on(var) {
            return Ok(vec![self.clone()]);
        }
        let mul = |a: &[Expr], b: &[Expr]| {
            let mut out = vec![Expr::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] = Expr::sum([out[i + j].clone(), Expr::product([x.clone(), y.clone()])]);
                }
            }
            out
        };
        match &*self.0 {
            Node::Var(_) => Ok(vec![Expr::zero(), Expr::one()]),
            Node::Add(v) => {
                let parts = v.iter().map(|e| e.coeffs_in(var)).collect::<Result<Vec<_>, _>>()?;
                let len = parts.iter().map(Vec::len).max().unwrap_or(1);
                Ok((0..len)
                    .map(|k| Expr::sum(parts.iter().filter_map(|p| p.get(k).cloned())))
                    .collect())
            }
            Node::Mul(v) => {
                let mut acc = vec![Expr::one()];
                for e in v {
                    acc = mul(&acc, &e.coeffs_in(var)?);
                }
                Ok(acc)
            }
            Node::Neg(a) => Ok(a.coeffs_in(var)?.iter().map(Expr::neg).collect()),
            Node::Pow(a, k) => {
                let base = a.coeffs_in(var)?;
                let mut acc = vec![Expr::one()];
                for _ in 0..*k {
                    acc = mul(&acc, &base);
                }
                Ok(acc)
            }
            _ => Err(ExprError::NotPolynomial),
        }
    }

    /// `∫_0^{x_var} s · ∂_var(self)(s) ds`, exact for expressions polynomial
    /// in `var` (coefficients may be arbitrary in the other variables).
    pub fn moment_integral(&self, var: usize) -> Result<Expr, ExprError> {
        let c = self.coeffs_in(var)?;
        // self = Σ c_k s^k, s·∂self = Σ k c_k s^k, integral = Σ k c_k x^{k+1}/(k+1).
        let x = Expr::var(var);
        Ok(Expr::sum(c.iter().enumerate().skip(1).map(|(k, ck)| {
            Expr::product([Expr::constant(k as f64 / (k as f64 + 1.0)), ck.clone(), x.pow(k as u32 + 1)])
        })))
    }

    /// `∫_0^{x} ∫_0^{s} self dr ds` in `var`, for expressions polynomial in `var`.
    pub fn double_antiderivative(&self, var: usize) -> Result<Expr, ExprError> {
        let c = self.coeffs_in(var)?;
        let x = Expr::var(var);
        Ok(Expr::sum(c.iter().enumerate().map(|(k, ck)| {
            let k = k as f64;
            Expr::product([Expr::constant(1.0 / ((k + 1.0) * (k + 2.0))), ck.clone(), x.pow(k as u32 + 2)])
        })))
    }

    /// Canonical multivariate polynomial, if the expression is polynomial.
    pub fn to_poly(&self) -> Result<Poly, ExprError> {
        Ok(match &*self.0 {
            Node::Const(c) => Poly::constant(*c),
            Node::Var(i) => Poly::var(*i),
            Node::Add(v) => {
                let mut acc = Poly::default();
                for e in v {
                    acc = acc.add(&e.to_poly()?);
                }
                acc
            }
            Node::Mul(v) => {
                let mut acc = Poly::constant(1.0);
                for e in v {
                    acc = acc.mul(&e.to_poly()?);
                }
                acc
            }
            Node::Neg(a) => a.to_poly()?.scale(-1.0),
            Node::Pow(a, k) => {
                let base = a.to_poly()?;
                let mut acc = Poly::constant(1.0);
                for _ in 0..*k {
                    acc = acc.mul(&base);
                }
                acc
            }
            Node::Recip(a) => match a.to_poly()?.as_constant() {
                Some(c) if c != 0.0 => Poly::constant(1.0 / c),
                _ => return Err(ExprError::NotPolynomial),
            },
            Node::Exp(a) | Node::Sin(a) | Node::Cos(a) => match a.to_poly()?.as_constant() {
                // A primitive of a constant is a constant; evaluate it anywhere.
                Some(_) => Poly::constant(self.eval(&[0.0; 8])),
                None => return Err(ExprError::NotPolynomial),
            },
        })
    }

    /// JSON encoding; `names` supplies the chart's coordinate names.
    pub fn to_json(&self, names: &[&str]) -> Value {
        let args = |v: &[Expr]| Value::Array(v.iter().map(|e| e.to_json(names)).collect());
        match &*self.0 {
            Node::Const(c) => json!({"op": "const", "value": c}),
            Node::Var(i) => json!({"op": "var", "name": names.get(*i).copied().unwrap_or("?")}),
            Node::Add(v) => json!({"op": "add", "args": args(v)}),
            Node::Mul(v) => json!({"op": "mul", "args": args(v)}),
            Node::Neg(a) => json!({"op": "neg", "args": [a.to_json(names)]}),
            Node::Recip(a) => json!({"op": "recip", "args": [a.to_json(names)]}),
            Node::Pow(a, k) => json!({"op": "pow", "args": [a.to_json(names)], "exp": k}),
            Node::Exp(a) => json!({"op": "exp", "args": [a.to_json(names)]}),
            Node::Sin(a) => json!({"op": "sin", "args": [a.to_json(names)]}),
            Node::Cos(a) => json!({"op": "cos", "args": [a.to_json(names)]}),
        }
    }

    /// Decodes the JSON encoding. Bare numbers are accepted as constants.
    pub fn from_json(v: &Value) -> Result<Expr, ExprError> {
        if let Some(c) = v.as_f64() {
            return Ok(Expr::constant(c));
        }
        let bad = |m: &str| ExprError::Json(m.to_string());
        let op = v.get("op").and_then(Value::as_str).ok_or_else(|| bad("missing `op`"))?;
        let args = || -> Result<Vec<Expr>, ExprError> {
            v.get("args")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing `args`"))?
                .iter()
                .map(Expr::from_json)
                .collect()
        };
        let unary = || -> Result<Expr, ExprError> {
            let a = args()?;
            if a.len() != 1 {
                return Err(bad("unary op needs exactly one argument"));
            }
            Ok(a.into_iter().next().unwrap())
        };
        // Constructors are applied without folding so decoding preserves the tree.
        Ok(match op {
            "const" => Expr::constant(v.get("value").and_then(Value::as_f64).ok_or_else(|| bad("missing `value`"))?),
            "var" => {
                let name = v.get("name").and_then(Value::as_str).ok_or_else(|| bad("missing `name`"))?;
                Expr::var(var_index(name).ok_or_else(|| ExprError::UnknownVariable(name.to_string()))?)
            }
            "add" => Expr::node(Node::Add(args()?)),
            "mul" => Expr::node(Node::Mul(args()?)),
            "neg" => Expr::node(Node::Neg(unary()?)),
            "recip" => Expr::node(Node::Recip(unary()?)),
            "pow" => {
                let k = v.get("exp").and_then(Value::as_u64).ok_or_else(|| bad("missing `exp`"))?;
                Expr::node(Node::Pow(unary()?, k as u32))
            }
            "exp" => Expr::node(Node::Exp(unary()?)),
            "sin" => Expr::node(Node::Sin(unary()?)),
            "cos" => Expr::node(Node::Cos(unary()?)),
            other => return Err(ExprError::Json(format!("unknown op `{other}`"))),
        })
    }

    /// Infix rendering with the given coordinate names.
    pub fn render(&self, names: &[&str]) -> String {
        match &*self.0 {
            Node::Const(c) => fmt_num(*c),
            Node::Var(i) => names.get(*i).copied().unwrap_or("?").to_string(),
            Node::Add(v) => format!("({})", v.iter().map(|e| e.render(names)).collect::<Vec<_>>().join(" + ")),
            Node::Mul(v) => v.iter().map(|e| e.render(names)).collect::<Vec<_>>().join("*"),
            Node::Neg(a) => format!("-{}", a.render(names)),
            Node::Recip(a) => format!("1/({})", a.render(names)),
            Node::Pow(a, k) => format!("{}^{}", a.render(names), k),
            Node::Exp(a) => format!("exp({})", a.render(names)),
            Node::Sin(a) => format!("sin({})", a.render(names)),
            Node::Cos(a) => format!("cos({})", a.render(names)),
        }
    }
}

fn fmt_num(c: f64) -> String {
    if c == c.trunc() && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{c}")
    }
}

macro_rules! expr_op {
    ($tr:ident, $m:ident, $f:expr) => {
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $f;
                f(self, rhs)
            }
        }
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $f;
                f(self.clone(), rhs.clone())
            }
        }
    };
}

expr_op!(Add, add, |a, b| Expr::sum([a, b]));
expr_op!(Sub, sub, |a, b| Expr::sum([a, b.neg()]));
expr_op!(Mul, mul, |a, b| Expr::product([a, b]));

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Expr {
        Expr::constant(c)
    }
}

/// Multivariate polynomial with exponent vectors as keys; zero terms are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Poly {
    pub fn constant(c: f64) -> Poly {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn var(i: usize) -> Poly {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Poly { terms: BTreeMap::from([(e, 1.0)]) }
    }

    fn normalize(mut e: Vec<u32>) -> Vec<u32> {
        while e.last() == Some(&0) {
            e.pop();
        }
        e
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.terms.len() {
            0 => Some(0.0),
            1 => self.terms.get(&Vec::new()).copied(),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert(0.0);
            *slot += c;
            if *slot == 0.0 {
                terms.remove(e);
            }
        }
        Poly { terms }
    }

    pub fn scale(&self, s: f64) -> Poly {
        if s == 0.0 {
            return Poly::default();
        }
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let len = ea.len().max(eb.len());
                let e = (0..len).map(|k| ea.get(k).unwrap_or(&0) + eb.get(k).unwrap_or(&0)).collect();
                out = out.add(&Poly { terms: BTreeMap::from([(Poly::normalize(e), ca * cb)]) });
            }
        }
        out
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    /// Rendering such as `y1` or `-2*t*x1^2`, with variables named by chart.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { names[v].to_string() } else { format!("{}^{}", names[v], k) })
                .collect();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag == 1.0) {
                (true, _) => fmt_num(mag),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", fmt_num(mag), mono.join("*")),
            };
            if i == 0 {
                out.push_str(if *c < 0.0 { "-" } else { "" });
            } else {
                out.push_str(if *c < 0.0 { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..8).map(|i| format!("u{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.render(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Expr {
        Expr::var(i)
    }

    #[test]
    fn diff_product_rule() {
        let e = (x(1) * x(2)).exp();
        let d = e.diff(1);
        let p = [0.0, 0.3, -0.7, 0.0, 0.0];
        assert!((d.eval(&p) - (-0.7) * (0.3f64 * -0.7).exp()).abs() < 1e-15);
    }

    #[test]
    fn jet_matches_eval() {
        let e = Expr::sum([x(0).sin() * x(1), x(2).pow(3).recip(), x(1).cos().exp()]);
        let p = [0.2, -0.4, 0.9];
        let j = e.jet(&p, 3).unwrap();
        assert!((j.value() - e.eval(&p)).abs() < 1e-14);
        let d = e.diff(1).diff(2);
        assert!((j.derivative(&[0, 1, 1]) - d.eval(&p)).abs() < 1e-13);
    }

    #[test]
    fn unknown_variable_rejected() {
        let v = json!({"op": "var", "name": "w"});
        assert_eq!(Expr::from_json(&v), Err(ExprError::UnknownVariable("w".into())));
    }

    #[test]
    fn json_round_trip() {
        let e = Expr::sum([x(1).pow(2).scale(0.375), (x(3) * x(0)).sin().neg(), x(4).recip()]);
        let v = e.to_json(&NAMES5);
        let back = Expr::from_json(&v).unwrap();
        assert_eq!(back.to_json(&NAMES5), v);
        let text = serde_json::to_string(&v).unwrap();
        let again = Expr::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(again, back);
    }

    #[test]
    fn moment_integral_of_linear() {
        // f = 3 + 2 y1  =>  ∫ s·2 ds = y1^2
        let f = Expr::sum([Expr::constant(3.0), x(3).scale(2.0)]);
        let m = f.moment_integral(3).unwrap();
        assert_eq!(m.to_poly().unwrap(), x(3).pow(2).to_poly().unwrap());
    }

    #[test]
    fn polynomial_normal_form() {
        let a = (x(1) + x(2)).pow(2);
        let b = Expr::sum([x(1).pow(2), (x(1) * x(2)).scale(2.0), x(2) * x(2)]);
        assert_eq!(a.to_poly().unwrap(), b.to_poly().unwrap());
        assert_eq!(a.to_poly().unwrap().render(&NAMES5), "x2^2 + 2*x1*x2 + x1^2");
        assert!(x(1).exp().to_poly().is_err());
    }
}
