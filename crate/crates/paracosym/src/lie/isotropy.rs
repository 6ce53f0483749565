//! Infinitesimal automorphisms: Lie derivatives of the structure tensors
//! along a vector field, the affine automorphism algebra of Example 1 and
//! the isotropy generator of flat models.

use std::f64::consts::SQRT_2;

use num_traits::Zero;

use super::{coordinates, q_f64, qi, unit, Algebra, LieError, Q};
use crate::fields::Expr;
use crate::frame::{frame_from_model, FrameState};
use crate::jets::Jet;
use crate::models::{ChartModel, Family as ModelFamily};
use crate::pac::PointGeometry;

/// Affine vector field `K(x) = Mx + c` on `ℝⁿ` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineField {
    pub linear: Vec<Vec<Q>>,
    pub translation: Vec<Q>,
}

impl AffineField {
    pub fn zero(n: usize) -> AffineField {
        AffineField { linear: vec![vec![Q::zero(); n]; n], translation: vec![Q::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// `[X, Y] = X(Y) − Y(X)`; for `X = Ax + a`, `Y = Bx + b` this is
    /// `(BA − AB)x + Ba − Ab`.
    pub fn bracket(&self, other: &AffineField) -> AffineField {
        let n = self.dim();
        let (a, b) = (&self.linear, &other.linear);
        let mut out = AffineField::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for k in 0..n {
                    s += &b[i][k] * &a[k][j] - &a[i][k] * &b[k][j];
                }
                out.linear[i][j] = s;
            }
            let mut t = Q::zero();
            for k in 0..n {
                t += &b[i][k] * &self.translation[k] - &a[i][k] * &other.translation[k];
            }
            out.translation[i] = t;
        }
        out
    }

    fn flatten(&self) -> Vec<Q> {
        self.linear.iter().flatten().chain(&self.translation).cloned().collect()
    }

    /// Components as expressions in the given coordinate expressions.
    pub fn components(&self, x: &[Expr]) -> Vec<Expr> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                Expr::sum(
                    (0..n)
                        .filter(|&j| !self.linear[i][j].is_zero())
                        .map(|j| x[j].scale(q_f64(&self.linear[i][j])))
                        .chain(std::iter::once(Expr::constant(q_f64(&self.translation[i])))),
                )
            })
            .collect()
    }
}

/// The six affine fields on `(x¹, …, x⁵)` (0-based indices below):
/// `K̃₁ = ∂₁`, `K̃₂ = ∂₂`, `K̃₃ = ∂₃`, `K̃₄ = x⁴∂₁ − x¹∂₂ + ∂₄`,
/// `K̃₅ = x⁵∂₁ − x¹∂₃ + ∂₅`, `K̃₆ = x⁵∂₂ − x⁴∂₃`.
pub fn s_fields() -> Vec<AffineField> {
    let n = 5;
    let t = |i: usize| AffineField { translation: unit(n, i), ..AffineField::zero(n) };
    let mut k4 = t(3);
    k4.linear[0][3] = qi(1);
    k4.linear[1][0] = qi(-1);
    let mut k5 = t(4);
    k5.linear[0][4] = qi(1);
    k5.linear[2][0] = qi(-1);
    let mut k6 = AffineField::zero(n);
    k6.linear[1][4] = qi(1);
    k6.linear[2][3] = qi(-1);
    vec![t(0), t(1), t(2), k4, k5, k6]
}

/// Nonzero commutators of `𝔰` as `(i, j, k, c)`: `[K̃ᵢ, K̃ⱼ] = c K̃ₖ`
/// (1-based labels).
pub const S_TABLE: [(usize, usize, usize, i64); 5] = [(1, 4, 2, -1), (1, 5, 3, -1), (4, 5, 6, 1), (4, 6, 3, -1), (5, 6, 2, 1)];

#[derive(Clone, Debug)]
pub struct SAlgebra {
    pub fields: Vec<AffineField>,
    pub algebra: Algebra,
}

impl SAlgebra {
    /// Structure constants from [`S_TABLE`].
    pub fn table_algebra() -> Algebra {
        let mut alg = Algebra::new(6);
        for (i, j, k, c) in S_TABLE {
            let mut v = vec![Q::zero(); 6];
            v[k - 1] = qi(c);
            alg.set_bracket(i - 1, j - 1, &v);
        }
        alg
    }
}

/// Brackets of the six fields expressed back in their span.
pub fn isotropy_algebra_s() -> Result<SAlgebra, LieError> {
    let fields = s_fields();
    let basis: Vec<Vec<Q>> = fields.iter().map(AffineField::flatten).collect();
    let mut alg = Algebra::new(6);
    for i in 0..6 {
        for j in i + 1..6 {
            let b = fields[i].bracket(&fields[j]);
            let c = coordinates(&basis, &b.flatten()).ok_or_else(|| LieError::NotClosed("span of the six affine fields".into()))?;
            alg.set_bracket(i, j, &c);
        }
    }
    Ok(SAlgebra { fields, algebra: alg })
}

/// An affine field in `x` coordinates pushed to Example 1's chart
/// `(z, u₁, u₂, v₁, v₂)` with `x¹ = z`, `x² = v₂/√2`, `x³ = v₁/√2`,
/// `x⁴ = √2u₂`, `x⁵ = √2u₁`.
pub fn example1_field(k: &AffineField) -> Vec<Expr> {
    let v = Expr::var;
    let x = [v(0), v(4).scale(1.0 / SQRT_2), v(3).scale(1.0 / SQRT_2), v(2).scale(SQRT_2), v(1).scale(SQRT_2)];
    let kx = k.components(&x);
    vec![kx[0].clone(), kx[4].scale(1.0 / SQRT_2), kx[3].scale(1.0 / SQRT_2), kx[2].scale(SQRT_2), kx[1].scale(SQRT_2)]
}

/// Largest components of `L_K g`, `L_K φ`, `L_K η`, `L_K ξ`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KillingResiduals {
    pub metric: f64,
    pub phi: f64,
    pub eta: f64,
    pub xi: f64,
}

impl KillingResiduals {
    pub fn max(&self) -> f64 {
        self.metric.max(self.phi).max(self.eta).max(self.xi)
    }

    fn merge(&mut self, o: KillingResiduals) {
        self.metric = self.metric.max(o.metric);
        self.phi = self.phi.max(o.phi);
        self.eta = self.eta.max(o.eta);
        self.xi = self.xi.max(o.xi);
    }
}

fn field_jets(field: &[Expr], p: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>), LieError> {
    let mut val = Vec::with_capacity(field.len());
    let mut grad = Vec::with_capacity(field.len());
    for e in field {
        let j = e.jet(p, 1).map_err(|e| LieError::Unsupported(e.to_string()))?;
        val.push(j.value());
        grad.push(j.gradient());
    }
    Ok((val, grad))
}

fn grad_of(j: &Jet) -> Vec<f64> {
    j.gradient()
}

/// Lie derivatives of the structure along `field` at one point.
pub fn killing_at(model: &ChartModel, field: &[Expr], p: &[f64]) -> Result<KillingResiduals, LieError> {
    let n = model.dim;
    let s = model.structure_jets(p, 1)?;
    let (k, dk) = field_jets(field, p)?;
    // dk[c][a] = ∂_a K^c
    let mut r = KillingResiduals::default();
    for a in 0..n {
        for b in 0..n {
            let dg = grad_of(s.g.get(a, b));
            let mut v: f64 = (0..n).map(|c| k[c] * dg[c]).sum();
            for c in 0..n {
                v += s.g.get(c, b).value() * dk[c][a] + s.g.get(a, c).value() * dk[c][b];
            }
            r.metric = r.metric.max(v.abs());
            let dphi = grad_of(s.phi.get(a, b));
            let mut w: f64 = (0..n).map(|c| k[c] * dphi[c]).sum();
            for c in 0..n {
                w += -s.phi.get(c, b).value() * dk[a][c] + s.phi.get(a, c).value() * dk[c][b];
            }
            r.phi = r.phi.max(w.abs());
        }
        let de = grad_of(&s.eta[a]);
        let e: f64 = (0..n).map(|c| k[c] * de[c] + s.eta[c].value() * dk[c][a]).sum();
        r.eta = r.eta.max(e.abs());
        let dx = grad_of(&s.xi[a]);
        let x: f64 = (0..n).map(|c| k[c] * dx[c] - s.xi[c].value() * dk[a][c]).sum();
        r.xi = r.xi.max(x.abs());
    }
    Ok(r)
}

pub fn killing_residuals(model: &ChartModel, field: &[Expr], points: &[Vec<f64>]) -> Result<KillingResiduals, LieError> {
    let mut r = KillingResiduals::default();
    for p in points {
        r.merge(killing_at(model, field, p)?);
    }
    Ok(r)
}

/// Normalized isotropy generator of a flat model with constant `α₁, α₂`:
/// `K = k₁∂_{y¹} + k₂∂_{y²}` with `dk₁ = −α₁k₁dx¹ + a dx²`,
/// `dk₂ = −α₂k₂dx² − a dx¹`, `a = e^{−α₁x¹ − α₂x²}` and `K(0) = 0`.
pub fn isotropy_generator(model: &ChartModel) -> Result<Vec<Expr>, LieError> {
    if model.family != ModelFamily::Flat {
        return Err(LieError::Unsupported(format!("isotropy generator needs a flat model, got {}", model.family.tag())));
    }
    let alpha = |key: &str| -> Result<f64, LieError> {
        let e = model.params.get(key).map(Expr::from_json).transpose().map_err(|e| LieError::Unsupported(e.to_string()))?;
        e.unwrap_or_else(Expr::zero)
            .as_const()
            .ok_or_else(|| LieError::Unsupported(format!("{key} is not constant; no closed-form generator")))
    };
    let (a1, a2) = (alpha("alpha1")?, alpha("alpha2")?);
    let (x1, x2) = (Expr::var(1), Expr::var(2));
    // ∫₀ˢ e^{−αt} dt
    let primitive = |alpha: f64, s: &Expr| -> Expr {
        if alpha == 0.0 {
            s.clone()
        } else {
            (Expr::one() - s.scale(-alpha).exp()).scale(1.0 / alpha)
        }
    };
    let k1 = x1.scale(-a1).exp() * primitive(a2, &x2);
    let k2 = -(x2.scale(-a2).exp() * primitive(a1, &x1));
    Ok(vec![Expr::zero(), Expr::zero(), Expr::zero(), k1, k2])
}

/// Shape of `L_K` on an adopted frame for an automorphism `K`:
/// `L_K V₁ = L_K V₂ = 0`, `L_K V₃ = aV₂`, `L_K V₄ = −aV₁` for one function
/// `a`. Returns the largest violating frame component and `a`.
pub fn frame_shape_at(model: &ChartModel, field: &[Expr], p: &[f64]) -> Result<(f64, f64), LieError> {
    let geo = PointGeometry::new(model, p, 3).map_err(|e| LieError::Unsupported(e.to_string()))?;
    let fs = frame_from_model(&geo, 1e-9).map_err(|e| LieError::Unsupported(e.to_string()))?;
    frame_shape(&geo, &fs, field, p)
}

pub fn frame_shape(geo: &PointGeometry, fs: &FrameState, field: &[Expr], p: &[f64]) -> Result<(f64, f64), LieError> {
    let n = geo.n();
    let (k, dk) = field_jets(field, p)?;
    let v = fs.vector_values();
    let lie: Vec<Vec<f64>> = fs
        .vectors
        .iter()
        .map(|vj| {
            (0..n)
                .map(|a| {
                    let dv = vj[a].gradient();
                    (0..n).map(|c| k[c] * dv[c] - vj[c].value() * dk[a][c]).sum()
                })
                .collect()
        })
        .collect();
    // Coefficient of X along V_k is g(X, V_{partner(k)}).
    let partner = [0, 3, 4, 1, 2];
    let coef = |x: &[f64], kk: usize| geo.structure.inner(x, &v[partner[kk]]);
    let mut worst = 0.0f64;
    for (i, allowed) in [(1, None), (2, None), (3, Some(2)), (4, Some(1))] {
        for kk in 0..5 {
            if Some(kk) != allowed {
                worst = worst.max(coef(&lie[i], kk).abs());
            }
        }
    }
    let a3 = coef(&lie[3], 2);
    let a4 = coef(&lie[4], 1);
    worst = worst.max((a3 + a4).abs());
    Ok((worst, a3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_brackets_match_table() {
        let s = isotropy_algebra_s().unwrap();
        assert_eq!(s.algebra, SAlgebra::table_algebra());
    }

    #[test]
    fn lower_central_series_of_s() {
        let s = isotropy_algebra_s().unwrap();
        let series = s.algebra.lower_central_series();
        let dims: Vec<usize> = series.iter().map(Vec::len).collect();
        assert_eq!(dims, vec![6, 3, 2, 0]);
        assert_eq!(s.algebra.nilpotency_step(), Some(3));
        assert!(s.algebra.jacobi_residual().is_zero());
    }
}
