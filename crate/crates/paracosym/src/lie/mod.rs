//! Exact structure-constant computations for left-invariant structures.
//!
//! Basis order is `(ξ, V₁, V₂, V₃, V₄)`; the dual basis `γⁱ(V_j) = δ` is
//! related to the metric coframe by `γ⁰ = η`, `γ¹ = θ³`, `γ² = θ⁴`,
//! `γ³ = θ¹`, `γ⁴ = θ²`. Left-invariant 1- and 2-forms are stored as their
//! values on basis vectors; 2-forms use the wedge
//! `(a∧b)(X,Y) = a(X)b(Y) − a(Y)b(X)`, and the exterior derivative is the
//! Chevalley–Eilenberg one, `dβ(X,Y) = −β([X,Y])`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub mod isotropy;
pub mod koszul;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a JSON integer.
pub fn parse_q(s: &str) -> Result<Q, LieError> {
    s.trim().parse::<Q>().map_err(|_| LieError::Parse(s.to_string()))
}

pub fn q_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn max_abs_q<'a>(it: impl IntoIterator<Item = &'a Q>) -> Q {
    it.into_iter().map(|x| x.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
}

#[derive(Debug, Error)]
pub enum LieError {
    #[error("invalid rational `{0}`")]
    Parse(String),
    #[error("family {family} needs {what} ≠ 0")]
    Division { family: &'static str, what: &'static str },
    #[error("family {family}: {what}")]
    Param { family: &'static str, what: String },
    #[error("sigma must be ±1, got {0}")]
    Sigma(i64),
    #[error("basis index {0} out of range")]
    Index(usize),
    #[error("bracket [e{0}, e{1}] given twice with inconsistent values")]
    Antisymmetry(usize, usize),
    #[error("Jacobi identity fails on basis triple (e{0}, e{1}, e{2})")]
    Jacobi(usize, usize, usize),
    #[error("{0} does not close under the bracket")]
    NotClosed(String),
    #[error("structure constants JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Model(#[from] crate::models::ModelError),
    #[error("{0}")]
    Unsupported(String),
}

/// Structure constants `c^k_{ij}` with `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    dim: usize,
    c: Vec<Q>,
}

impl Algebra {
    pub fn new(dim: usize) -> Algebra {
        Algebra { dim, c: vec![Q::zero(); dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn at(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[self.at(i, j, k)]
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = −v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[Q]) {
        for k in 0..self.dim {
            let (a, b) = (self.at(i, j, k), self.at(j, i, k));
            self.c[a] = v[k].clone();
            self.c[b] = -v[k].clone();
        }
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Q> {
        (0..self.dim).map(|k| self.constant(i, j, k).clone()).collect()
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim;
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let w = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let ck = self.constant(i, j, k);
                    if !ck.is_zero() {
                        *o += &w * ck;
                    }
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| *self.constant(i, j, k) == -self.constant(j, i, k).clone())))
    }

    /// Cyclic sum `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Q> {
        let e = |a: usize| unit(self.dim, a);
        let t1 = self.bracket(&e(i), &self.basis_bracket(j, k));
        let t2 = self.bracket(&e(j), &self.basis_bracket(k, i));
        let t3 = self.bracket(&e(k), &self.basis_bracket(i, j));
        (0..self.dim).map(|a| &t1[a] + &t2[a] + &t3[a]).collect()
    }

    /// Largest Jacobiator entry over all basis triples; exactly zero for a
    /// Lie algebra.
    pub fn jacobi_residual(&self) -> Q {
        let n = self.dim;
        let mut worst = Q::zero();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let m = max_abs_q(&self.jacobiator(i, j, k));
                    if m > worst {
                        worst = m;
                    }
                }
            }
        }
        worst
    }

    pub fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if self.jacobiator(i, j, k).iter().any(|x| !x.is_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Nonzero `[e_i, e_j]` with `i < j`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<Q>)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = self.basis_bracket(i, j);
                if b.iter().any(|x| !x.is_zero()) {
                    out.push((i, j, b));
                }
            }
        }
        out
    }

    /// `d` of a left-invariant 1-form.
    pub fn d1(&self, a: &[Q]) -> TwoForm {
        let n = self.dim;
        let mut f = TwoForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                let b = self.basis_bracket(i, j);
                f.c[i * n + j] = -dot(a, &b);
            }
        }
        f
    }

    /// `dγᵏ`, the differential of the `k`-th dual basis form.
    pub fn d_dual(&self, k: usize) -> TwoForm {
        self.d1(&unit(self.dim, k))
    }

    /// `d` of a left-invariant 2-form, as values on basis triples:
    /// `dβ(X,Y,Z) = −β([X,Y],Z) + β([X,Z],Y) − β([Y,Z],X)`.
    pub fn d2(&self, b: &TwoForm) -> Vec<Q> {
        let n = self.dim;
        let e = |a: usize| unit(n, a);
        let mut out = vec![Q::zero(); n * n * n];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let v = -b.eval(&self.basis_bracket(x, y), &e(z)) + b.eval(&self.basis_bracket(x, z), &e(y))
                        - b.eval(&self.basis_bracket(y, z), &e(x));
                    out[(x * n + y) * n + z] = v;
                }
            }
        }
        out
    }

    /// `max |d(dγᵏ)|` over `k`.
    pub fn d_squared_residual(&self) -> Q {
        (0..self.dim).map(|k| max_abs_q(&self.d2(&self.d_dual(k)))).fold(Q::zero(), |a, b| if b > a { b } else { a })
    }

    /// Span of all brackets `[x, y]` with `x ∈ self`, `y` in the given span.
    pub fn bracket_span(&self, span: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let mut rows = Vec::new();
        for i in 0..self.dim {
            for y in span {
                rows.push(self.bracket(&unit(self.dim, i), y));
            }
        }
        rref(rows)
    }

    /// Lower central series `𝔤 ⊃ [𝔤,𝔤] ⊃ [𝔤,[𝔤,𝔤]] ⊃ …` until it stabilizes,
    /// each term given by an echelon basis.
    pub fn lower_central_series(&self) -> Vec<Vec<Vec<Q>>> {
        let mut series = vec![(0..self.dim).map(|i| unit(self.dim, i)).collect::<Vec<_>>()];
        loop {
            let next = self.bracket_span(series.last().unwrap());
            let stop = next.len() == series.last().unwrap().len() || next.is_empty();
            series.push(next);
            if stop {
                break;
            }
        }
        series
    }

    /// Nilpotency step: number of nonzero terms after `𝔤` in the series, or
    /// `None` if the series stabilizes away from zero.
    pub fn nilpotency_step(&self) -> Option<usize> {
        let s = self.lower_central_series();
        if s.last().unwrap().is_empty() {
            Some(s.len() - 1)
        } else {
            None
        }
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|k| if k == i { Q::one() } else { Q::zero() }).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form; zero rows dropped.
pub fn rref(mut rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let Some(n) = rows.first().map(Vec::len) else { return rows };
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        rows[r].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Coordinates of `v` in the basis `basis`, if `v` lies in its span.
pub fn coordinates(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let m = basis.len();
    let n = v.len();
    // Augmented system: columns are basis vectors.
    let rows: Vec<Vec<Q>> =
        (0..n).map(|a| basis.iter().map(|b| b[a].clone()).chain(std::iter::once(v[a].clone())).collect()).collect();
    let red = rref(rows);
    let mut x = vec![Q::zero(); m];
    for row in &red {
        let lead = row.iter().position(|c| !c.is_zero())?;
        if lead == m {
            return None;
        }
        x[lead] = row[m].clone();
    }
    let back: Vec<Q> = (0..n).map(|a| basis.iter().zip(&x).fold(Q::zero(), |acc, (b, c)| acc + &b[a] * c)).collect();
    (back == v).then_some(x)
}

/// A left-invariant 2-form by its values `f(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm {
    n: usize,
    c: Vec<Q>,
}

impl TwoForm {
    pub fn zero(n: usize) -> TwoForm {
        TwoForm { n, c: vec![Q::zero(); n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.c[i * self.n + j]
    }

    pub fn wedge(a: &[Q], b: &[Q]) -> TwoForm {
        let n = a.len();
        let mut f = TwoForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                f.c[i * n + j] = &a[i] * &b[j] - &a[j] * &b[i];
            }
        }
        f
    }

    pub fn eval(&self, x: &[Q], y: &[Q]) -> Q {
        let n = self.n;
        let mut acc = Q::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let c = &self.c[i * n + j];
                if !c.is_zero() && !y[j].is_zero() {
                    acc += &x[i] * &y[j] * c;
                }
            }
        }
        acc
    }

    pub fn add(&self, o: &TwoForm) -> TwoForm {
        TwoForm { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &TwoForm) -> TwoForm {
        TwoForm { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &Q) -> TwoForm {
        TwoForm { n: self.n, c: self.c.iter().map(|a| a * s).collect() }
    }

    pub fn max_abs(&self) -> Q {
        max_abs_q(&self.c)
    }
}

pub const LABELS: [&str; 5] = ["xi", "V1", "V2", "V3", "V4"];
/// Eigenvalues of `φ` on `(ξ, V₁, …, V₄)`.
pub const PHI_SIGNS: [i64; 5] = [0, -1, 1, 1, -1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C1,
    C2,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C1, Family::C2];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C1 => "C1",
            Family::C2 => "C2",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }

    /// The 𝔤-index the family's algebra carries in the literature
    /// (`C1 ↦ 𝔤₄`, `C2 ↦ 𝔤₃`); informational only.
    pub fn g_index(self) -> u8 {
        match self {
            Family::A => 1,
            Family::B => 2,
            Family::C1 => 4,
            Family::C2 => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    Family(Family),
    Isotropy,
    Custom,
}

mod qstr {
    use super::{parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => parse_q(&s).map_err(serde::de::Error::custom),
            Raw::I(i) => Ok(super::qi(i)),
        }
    }
}

/// Constants of the connection data: `τ₁ = α₁θ¹`, `τ₂ = α₂θ²` and
/// `ω = α₀η + β₁θ¹ + β₂θ² + α₃θ³ + α₄θ⁴`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(with = "qstr", default = "Q::zero")]
    pub alpha0: Q,
    #[serde(with = "qstr", default = "Q::zero")]
    pub alpha1: Q,
    #[serde(with = "qstr", default = "Q::zero")]
    pub alpha2: Q,
    #[serde(with = "qstr", default = "Q::zero")]
    pub alpha3: Q,
    #[serde(with = "qstr", default = "Q::zero")]
    pub alpha4: Q,
    #[serde(with = "qstr", default = "Q::zero")]
    pub beta1: Q,
    #[serde(with = "qstr", default = "Q::zero")]
    pub beta2: Q,
    #[serde(default = "one_i64")]
    pub sigma: i64,
}

fn one_i64() -> i64 {
    1
}

impl Default for FamilyParams {
    fn default() -> FamilyParams {
        FamilyParams {
            alpha0: Q::zero(),
            alpha1: Q::zero(),
            alpha2: Q::zero(),
            alpha3: Q::zero(),
            alpha4: Q::zero(),
            beta1: Q::zero(),
            beta2: Q::zero(),
            sigma: 1,
        }
    }
}

impl FamilyParams {
    pub fn sigma_q(&self) -> Q {
        qi(self.sigma)
    }

    /// `ω` as values on `(ξ, V₁, …, V₄)`: `(α₀, α₃, α₄, β₁, β₂)`.
    pub fn omega(&self) -> Vec<Q> {
        vec![self.alpha0.clone(), self.alpha3.clone(), self.alpha4.clone(), self.beta1.clone(), self.beta2.clone()]
    }

    /// Fills `α₀, α₃, α₄` with the values the family forces.
    pub fn completed(&self, family: Family) -> Result<FamilyParams, LieError> {
        let (a0, a3, a4) = solve_branch(family, &self.alpha1, &self.alpha2, self.sigma, &self.alpha0)?;
        Ok(FamilyParams { alpha0: a0, alpha3: a3, alpha4: a4, ..self.clone() })
    }
}

fn check_sigma(s: i64) -> Result<Q, LieError> {
    if s == 1 || s == -1 {
        Ok(qi(s))
    } else {
        Err(LieError::Sigma(s))
    }
}

/// Exact elimination of the integrability relations on a branch: returns
/// `(α₀, α₃, α₄)` in terms of `α₁, α₂, σ` (and the free `α₀` of `C1`).
pub fn solve_branch(family: Family, alpha1: &Q, alpha2: &Q, sigma: i64, alpha0: &Q) -> Result<(Q, Q, Q), LieError> {
    let s = check_sigma(sigma)?;
    let z = Q::zero;
    match family {
        // α₄ ≠ 0 in α₄(α₁ + α₄) = 0 gives α₄ = −α₁; then α₀α₂ = −σα₄.
        Family::A => {
            if alpha2.is_zero() {
                return Err(LieError::Division { family: "A", what: "alpha2" });
            }
            if alpha1.is_zero() {
                return Err(LieError::Param { family: "A", what: "alpha4 = −alpha1 must be nonzero; alpha1 = 0 is a C branch".into() });
            }
            Ok((&s * alpha1 / alpha2, z(), -alpha1.clone()))
        }
        // α₃ ≠ 0 in α₃(α₂ − α₃) = 0 gives α₃ = α₂; then α₀α₁ = −α₃.
        Family::B => {
            if alpha1.is_zero() {
                return Err(LieError::Division { family: "B", what: "alpha1" });
            }
            if alpha2.is_zero() {
                return Err(LieError::Param { family: "B", what: "alpha3 = alpha2 must be nonzero; alpha2 = 0 is a C branch".into() });
            }
            Ok((-alpha2.clone() / alpha1, alpha2.clone(), z()))
        }
        Family::C1 => {
            if alpha0.is_zero() {
                return Err(LieError::Division { family: "C1", what: "alpha0" });
            }
            if !alpha1.is_zero() || !alpha2.is_zero() {
                return Err(LieError::Param { family: "C1", what: "τ₁ = τ₂ = 0 forces alpha1 = alpha2 = 0".into() });
            }
            Ok((alpha0.clone(), z(), z()))
        }
        Family::C2 => Ok((z(), z(), z())),
    }
}

/// The five integrability relations on the constants of `ω`, each as
/// `lhs − rhs`, and the branch they select.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaConstraints {
    pub relations: [Q; 5],
    pub branch: Option<Family>,
}

impl OmegaConstraints {
    pub fn hold(&self) -> bool {
        self.relations.iter().all(Zero::is_zero)
    }
}

pub fn omega_constraints(p: &FamilyParams) -> OmegaConstraints {
    let s = qi(p.sigma);
    let (a0, a1, a2, a3, a4) = (&p.alpha0, &p.alpha1, &p.alpha2, &p.alpha3, &p.alpha4);
    let relations = [
        a0 * (a1 + a4) + a3,
        a0 * (a2 - a3) + &s * a4,
        a3 * (a2 - a3),
        a4 * (a1 + a4),
        a3 * a4,
    ];
    let hold = relations.iter().all(Zero::is_zero);
    let branch = if !hold {
        None
    } else {
        match (a0.is_zero(), a3.is_zero(), a4.is_zero()) {
            (_, true, false) => Some(Family::A),
            (_, false, true) => Some(Family::B),
            (false, true, true) => Some(Family::C1),
            (true, true, true) => Some(Family::C2),
            (_, false, false) => None,
        }
    };
    OmegaConstraints { relations, branch }
}

/// A five-dimensional Lie algebra with the invariant structure:
/// `g(ξ,ξ) = g(V₁,V₃) = g(V₂,V₄) = 1`, `φ` with eigenvalues
/// [`PHI_SIGNS`], `η = γ⁰`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra5 {
    pub algebra: Algebra,
    pub sigma: i64,
    pub tag: Tag,
}

impl LieAlgebra5 {
    pub fn new(algebra: Algebra, sigma: i64, tag: Tag) -> Result<LieAlgebra5, LieError> {
        check_sigma(sigma)?;
        if algebra.dim() != 5 {
            return Err(LieError::Index(algebra.dim()));
        }
        Ok(LieAlgebra5 { algebra, sigma, tag })
    }

    pub fn metric(i: usize, j: usize) -> Q {
        match (i.min(j), i.max(j)) {
            (0, 0) | (1, 3) | (2, 4) => Q::one(),
            _ => Q::zero(),
        }
    }

    pub fn inner(x: &[Q], y: &[Q]) -> Q {
        x[0].clone() * &y[0] + &x[1] * &y[3] + &x[3] * &y[1] + &x[2] * &y[4] + &x[4] * &y[2]
    }

    /// Index `j` with `g(e_i, e_j) ≠ 0`; the metric is a permutation matrix.
    pub fn metric_partner(i: usize) -> usize {
        [0, 3, 4, 1, 2][i]
    }

    pub fn phi(x: &[Q]) -> Vec<Q> {
        x.iter().zip(PHI_SIGNS).map(|(c, s)| c * qi(s)).collect()
    }

    /// `θⁱ = g(·, V_i)` as values on the basis.
    pub fn theta(i: usize) -> Vec<Q> {
        (0..5).map(|j| LieAlgebra5::metric(i, j)).collect()
    }

    /// `AX = g(X,V₁)V₁ + σg(X,V₂)V₂`.
    pub fn a_operator(&self, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); 5];
        out[1] = x[3].clone();
        out[2] = &x[4] * qi(self.sigma);
        out
    }

    pub fn bracket(&self, i: usize, j: usize) -> Vec<Q> {
        self.algebra.basis_bracket(i, j)
    }

    /// Reads `{"c": [{"i","j","k","value"}], "sigma"}`. Missing mirror
    /// entries `c^k_{ji}` are filled by antisymmetry.
    pub fn from_json(v: &Value) -> Result<LieAlgebra5, LieError> {
        let sigma = v.get("sigma").and_then(Value::as_i64).unwrap_or(1);
        let entries = v.get("c").and_then(Value::as_array).ok_or_else(|| LieError::Json("missing array `c`".into()))?;
        let mut given: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
        for e in entries {
            let idx = |key: &str| -> Result<usize, LieError> {
                let i = e.get(key).and_then(Value::as_u64).ok_or_else(|| LieError::Json(format!("entry without `{key}`")))?
                    as usize;
                if i < 5 {
                    Ok(i)
                } else {
                    Err(LieError::Index(i))
                }
            };
            let (i, j, k) = (idx("i")?, idx("j")?, idx("k")?);
            let value = match e.get("value") {
                Some(Value::String(s)) => parse_q(s)?,
                Some(Value::Number(n)) => n.as_i64().map(qi).ok_or_else(|| LieError::Parse(n.to_string()))?,
                _ => return Err(LieError::Json("entry without `value`".into())),
            };
            if i == j && !value.is_zero() {
                return Err(LieError::Antisymmetry(i, j));
            }
            if let Some(prev) = given.get(&(i, j, k)) {
                if *prev != value {
                    return Err(LieError::Antisymmetry(i, j));
                }
            }
            given.insert((i, j, k), value);
        }
        let mut alg = Algebra::new(5);
        for (&(i, j, k), v) in &given {
            if let Some(m) = given.get(&(j, i, k)) {
                if *m != -v.clone() {
                    return Err(LieError::Antisymmetry(i, j));
                }
            }
            let (a, b) = (alg.at(i, j, k), alg.at(j, i, k));
            alg.c[a] = v.clone();
            alg.c[b] = -v.clone();
        }
        LieAlgebra5::new(alg, sigma, Tag::Custom)
    }

    pub fn to_json(&self) -> Value {
        let mut c = Vec::new();
        for (i, j, b) in self.algebra.nonzero_brackets() {
            for (k, v) in b.iter().enumerate() {
                if !v.is_zero() {
                    c.push(json!({"i": i, "j": j, "k": k, "value": v.to_string()}));
                }
            }
        }
        json!({"c": c, "sigma": self.sigma})
    }

    /// Human-readable list of nonzero brackets.
    pub fn render_brackets(&self) -> Vec<String> {
        self.algebra
            .nonzero_brackets()
            .into_iter()
            .map(|(i, j, b)| format!("[{}, {}] = {}", LABELS[i], LABELS[j], render_vector(&b, &LABELS)))
            .collect()
    }
}

pub fn render_vector(v: &[Q], labels: &[&str]) -> String {
    let mut s = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        if mag.is_one() {
            s.push_str(l);
        } else {
            s.push_str(&format!("{mag} {l}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn vec5(entries: &[(usize, Q)]) -> Vec<Q> {
    let mut v = vec![Q::zero(); 5];
    for (i, c) in entries {
        v[*i] += c;
    }
    v
}

/// The structure constants of a family, as displayed for its algebra.
pub fn family_algebra(family: Family, p: &FamilyParams) -> Result<LieAlgebra5, LieError> {
    let s = check_sigma(p.sigma)?;
    let full = p.completed(family)?;
    let (a1, a2, b1, b2) = (&p.alpha1, &p.alpha2, &p.beta1, &p.beta2);
    let one = Q::one;
    let mut alg = Algebra::new(5);
    let (xi, v1, v2, v3, v4) = (0, 1, 2, 3, 4);
    let v34 = vec5(&[(v1, -b1.clone()), (v2, -b2.clone())]);
    match family {
        Family::A => {
            let k = full.alpha0.clone();
            alg.set_bracket(xi, v3, &vec5(&[(v1, one()), (v2, k.clone())]));
            alg.set_bracket(v1, v3, &vec5(&[(v1, -a1.clone())]));
            alg.set_bracket(v2, v3, &vec5(&[(v2, -a1.clone())]));
            alg.set_bracket(xi, v4, &vec5(&[(v1, -k), (v2, s.clone())]));
            alg.set_bracket(v2, v4, &vec5(&[(v1, a1.clone()), (v2, -a2.clone())]));
        }
        Family::B => {
            let k = a2 / a1;
            alg.set_bracket(xi, v3, &vec5(&[(v1, one()), (v2, -k.clone())]));
            alg.set_bracket(v1, v3, &vec5(&[(v1, -a1.clone()), (v2, a2.clone())]));
            alg.set_bracket(xi, v4, &vec5(&[(v1, k), (v2, s.clone())]));
            alg.set_bracket(v1, v4, &vec5(&[(v1, -a2.clone())]));
            alg.set_bracket(v2, v4, &vec5(&[(v2, -a2.clone())]));
        }
        Family::C1 => {
            let a0 = &full.alpha0;
            alg.set_bracket(xi, v3, &vec5(&[(v1, one()), (v2, a0.clone())]));
            alg.set_bracket(xi, v4, &vec5(&[(v1, -a0.clone()), (v2, s.clone())]));
        }
        Family::C2 => {
            alg.set_bracket(xi, v3, &vec5(&[(v1, one())]));
            alg.set_bracket(v1, v3, &vec5(&[(v1, -a1.clone())]));
            alg.set_bracket(xi, v4, &vec5(&[(v2, s.clone())]));
            alg.set_bracket(v2, v4, &vec5(&[(v2, -a2.clone())]));
        }
    }
    alg.set_bracket(v3, v4, &v34);
    if let Some((i, j, k)) = alg.jacobi_failure() {
        return Err(LieError::Jacobi(i, j, k));
    }
    LieAlgebra5::new(alg, p.sigma, Tag::Family(family))
}

/// `dγ¹` and `dγ²` predicted by the structure equations for constants
/// `α₁, α₂` and `ω`:
/// `dγ¹ = γ³∧γ⁰ − α₁γ³∧γ¹ + ω∧γ⁴`, `dγ² = σγ⁴∧γ⁰ − α₂γ⁴∧γ² − ω∧γ³`.
pub fn predicted_dual_differentials(p: &FamilyParams) -> [TwoForm; 2] {
    let e = |i| unit(5, i);
    let s = qi(p.sigma);
    let w = p.omega();
    let d1 = TwoForm::wedge(&e(3), &e(0)).sub(&TwoForm::wedge(&e(3), &e(1)).scale(&p.alpha1)).add(&TwoForm::wedge(&w, &e(4)));
    let d2 =
        TwoForm::wedge(&e(4), &e(0)).scale(&s).sub(&TwoForm::wedge(&e(4), &e(2)).scale(&p.alpha2)).sub(&TwoForm::wedge(&w, &e(3)));
    [d1, d2]
}

/// Largest defect of the dual structure equations: `dγ⁰ = dγ³ = dγ⁴ = 0`
/// and the predicted `dγ¹`, `dγ²`.
pub fn structure_equation_residual(alg: &LieAlgebra5, p: &FamilyParams) -> Q {
    let a = &alg.algebra;
    let [d1, d2] = predicted_dual_differentials(p);
    [a.d_dual(0).max_abs(), a.d_dual(3).max_abs(), a.d_dual(4).max_abs(), a.d_dual(1).sub(&d1).max_abs(), a.d_dual(2).sub(&d2).max_abs()]
        .into_iter()
        .fold(Q::zero(), |x, y| if y > x { y } else { x })
}

/// Outcome of the left-invariant classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Family { family: Family, params: FamilyParams },
    Rejected(String),
}

/// Decides whether an algebra carries the left-invariant structure of one of
/// the four families: Jacobi, closedness of `γ⁰, γ³, γ⁴`, solvability of the
/// structure equations for constant `α₁, α₂, ω`, the integrability branch,
/// and finally equality with the family's own structure constants.
pub fn classify_algebra(alg: &LieAlgebra5) -> Classification {
    let a = &alg.algebra;
    if !a.is_antisymmetric() {
        return Classification::Rejected("structure constants are not antisymmetric".into());
    }
    if let Some((i, j, k)) = a.jacobi_failure() {
        return Classification::Rejected(format!("Jacobi identity fails on ({}, {}, {})", LABELS[i], LABELS[j], LABELS[k]));
    }
    for k in [0, 3, 4] {
        if !a.d_dual(k).max_abs().is_zero() {
            return Classification::Rejected(format!("d gamma^{k} ≠ 0"));
        }
    }
    let d1 = a.d_dual(1);
    let d2 = a.d_dual(2);
    let p = FamilyParams {
        alpha0: d1.get(0, 4).clone(),
        alpha1: d1.get(1, 3).clone(),
        alpha2: d2.get(2, 4).clone(),
        alpha3: d1.get(1, 4).clone(),
        alpha4: d1.get(2, 4).clone(),
        beta1: d1.get(3, 4).clone(),
        beta2: d2.get(3, 4).clone(),
        sigma: alg.sigma,
    };
    if !structure_equation_residual(alg, &p).is_zero() {
        return Classification::Rejected("no constant α₁, α₂, ω solve the structure equations".into());
    }
    let cons = omega_constraints(&p);
    let Some(family) = cons.branch else {
        return Classification::Rejected("integrability relations on ω fail on every branch".into());
    };
    match family_algebra(family, &p) {
        Ok(rebuilt) if rebuilt.algebra == alg.algebra => Classification::Family { family, params: p },
        Ok(_) => Classification::Rejected(format!("branch {family} selected but the brackets differ from the family")),
        Err(e) => Classification::Rejected(format!("branch {family}: {e}")),
    }
}

/// Example 1's algebra: `[ξ, V₃] = V₁`, `[ξ, V₄] = V₂`.
pub fn example1_algebra() -> LieAlgebra5 {
    let mut alg = Algebra::new(5);
    alg.set_bracket(0, 3, &unit(5, 1));
    alg.set_bracket(0, 4, &unit(5, 2));
    LieAlgebra5 { algebra: alg, sigma: 1, tag: Tag::Custom }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a0: i64, a1: i64, a2: i64, b1: i64, b2: i64, s: i64) -> FamilyParams {
        FamilyParams { alpha0: qi(a0), alpha1: qi(a1), alpha2: qi(a2), beta1: qi(b1), beta2: qi(b2), sigma: s, ..Default::default() }
    }

    #[test]
    fn family_a_sample_brackets() {
        let alg = family_algebra(Family::A, &params(0, 1, 1, 0, 0, 1)).unwrap();
        let v = |e: &[(usize, i64)]| vec5(&e.iter().map(|(i, c)| (*i, qi(*c))).collect::<Vec<_>>());
        assert_eq!(alg.bracket(0, 3), v(&[(1, 1), (2, 1)]));
        assert_eq!(alg.bracket(1, 3), v(&[(1, -1)]));
        assert_eq!(alg.bracket(2, 3), v(&[(2, -1)]));
        assert_eq!(alg.bracket(0, 4), v(&[(1, -1), (2, 1)]));
        assert_eq!(alg.bracket(2, 4), v(&[(1, 1), (2, -1)]));
        assert!(alg.bracket(3, 4).iter().all(Zero::is_zero));
        assert!(alg.algebra.jacobi_residual().is_zero());
    }

    #[test]
    fn c1_sample_is_nilpotent() {
        let alg = family_algebra(Family::C1, &params(2, 0, 0, 3, 5, -1)).unwrap();
        let v = |e: &[(usize, i64)]| vec5(&e.iter().map(|(i, c)| (*i, qi(*c))).collect::<Vec<_>>());
        assert_eq!(alg.bracket(0, 3), v(&[(1, 1), (2, 2)]));
        assert_eq!(alg.bracket(0, 4), v(&[(1, -2), (2, -1)]));
        assert_eq!(alg.bracket(3, 4), v(&[(1, -3), (2, -5)]));
        assert!(alg.algebra.nilpotency_step().unwrap() <= 3);
    }

    #[test]
    fn c2_zero_is_example1() {
        let alg = family_algebra(Family::C2, &FamilyParams::default()).unwrap();
        assert_eq!(alg.algebra, example1_algebra().algebra);
        match classify_algebra(&example1_algebra()) {
            Classification::Family { family, .. } => assert_eq!(family, Family::C2),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn branches() {
        let c2 = FamilyParams { alpha1: q(3, 7), alpha2: qi(-2), beta1: qi(5), ..Default::default() };
        assert_eq!(omega_constraints(&c2).branch, Some(Family::C2));
        let bad = FamilyParams { alpha3: qi(1), alpha4: qi(1), ..Default::default() };
        assert_eq!(omega_constraints(&bad).branch, None);
        let a = FamilyParams { alpha1: qi(2), alpha2: qi(3), sigma: -1, ..Default::default() }.completed(Family::A).unwrap();
        assert_eq!(a.alpha4, qi(-2));
        assert_eq!(a.alpha0, q(-2, 3));
        assert_eq!(omega_constraints(&a).branch, Some(Family::A));
    }

    #[test]
    fn rref_and_coordinates() {
        let b = vec![vec![qi(1), qi(1), qi(0)], vec![qi(0), qi(1), qi(1)]];
        assert_eq!(coordinates(&b, &[qi(1), qi(3), qi(2)]), Some(vec![qi(1), qi(2)]));
        assert_eq!(coordinates(&b, &[qi(1), qi(0), qi(0)]), None);
        assert_eq!(rref(vec![vec![qi(2), qi(4)], vec![qi(1), qi(2)]]).len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let alg = family_algebra(Family::B, &params(0, 2, 3, 1, -1, 1)).unwrap();
        let back = LieAlgebra5::from_json(&alg.to_json()).unwrap();
        assert_eq!(back.algebra, alg.algebra);
        assert!(matches!(classify_algebra(&back), Classification::Family { family: Family::B, .. }));
    }
}
