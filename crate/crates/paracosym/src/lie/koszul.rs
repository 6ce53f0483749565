//! Left-invariant Levi-Civita connection and curvature in exact arithmetic.

use num_traits::{One, Zero};

use super::{max_abs_q, qi, unit, FamilyParams, LieAlgebra5, LieError, TwoForm, PHI_SIGNS, Q};

/// Index of the metric dual of `θⁱ` in the basis: `θⁱ(e_j) = δ` for
/// `j = DUAL[i]`.
const DUAL: [usize; 5] = [0, 3, 4, 1, 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Koszul {
    /// `gamma[(i*5 + j)*5 + k]`: component `k` of `∇_{e_i} e_j`.
    pub gamma: Vec<Q>,
    /// `curvature[((i*5 + j)*5 + k)*5 + l]`: component `l` of `R(e_i,e_j)e_k`.
    pub curvature: Vec<Q>,
}

fn g_lower(v: &[Q], l: usize) -> Q {
    v[LieAlgebra5::metric_partner(l)].clone()
}

/// `2g(∇_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)`, then
/// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`.
pub fn koszul(alg: &LieAlgebra5) -> Result<Koszul, LieError> {
    if let Some((i, j, k)) = alg.algebra.jacobi_failure() {
        return Err(LieError::Jacobi(i, j, k));
    }
    let n = 5;
    let half = super::q(1, 2);
    let mut gamma = vec![Q::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let lowered: Vec<Q> = (0..n)
                .map(|l| {
                    let t = g_lower(&alg.bracket(i, j), l) - g_lower(&alg.bracket(j, l), i) + g_lower(&alg.bracket(l, i), j);
                    t * &half
                })
                .collect();
            for k in 0..n {
                gamma[(i * n + j) * n + k] = lowered[LieAlgebra5::metric_partner(k)].clone();
            }
        }
    }
    let mut k = Koszul { gamma, curvature: Vec::new() };
    let mut curv = vec![Q::zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            let b = alg.bracket(i, j);
            for c in 0..n {
                let ij = k.nabla(i, &k.nabla_basis(j, c));
                let ji = k.nabla(j, &k.nabla_basis(i, c));
                let bb = k.nabla_along(&b, &unit(n, c));
                for l in 0..n {
                    curv[((i * n + j) * n + c) * n + l] = &ij[l] - &ji[l] - &bb[l];
                }
            }
        }
    }
    k.curvature = curv;
    Ok(k)
}

impl Koszul {
    pub fn nabla_basis(&self, i: usize, j: usize) -> Vec<Q> {
        (0..5).map(|k| self.gamma[(i * 5 + j) * 5 + k].clone()).collect()
    }

    /// `∇_{e_i} Y` for a constant-coefficient `Y`.
    pub fn nabla(&self, i: usize, y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); 5];
        for (j, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += c * &self.gamma[(i * 5 + j) * 5 + k];
            }
        }
        out
    }

    pub fn nabla_along(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); 5];
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.nabla(i, y)) {
                *o += c * v;
            }
        }
        out
    }

    pub fn r_vec(&self, i: usize, j: usize, k: usize) -> Vec<Q> {
        (0..5).map(|l| self.curvature[((i * 5 + j) * 5 + k) * 5 + l].clone()).collect()
    }

    /// `R(e_i,e_j,e_k,e_l) = g(R(e_i,e_j)e_k, e_l)`.
    pub fn rm(&self, i: usize, j: usize, k: usize, l: usize) -> Q {
        g_lower(&self.r_vec(i, j, k), l)
    }

    pub fn rm_all(&self) -> Vec<Q> {
        let mut out = Vec::with_capacity(625);
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    for l in 0..5 {
                        out.push(self.rm(i, j, k, l));
                    }
                }
            }
        }
        out
    }

    pub fn is_flat(&self) -> bool {
        self.curvature.iter().all(Zero::is_zero)
    }

    /// `Ric(e_j, e_k) = tr(X ↦ R(X, e_j)e_k)`.
    pub fn ricci(&self) -> Vec<Q> {
        let mut out = vec![Q::zero(); 25];
        for j in 0..5 {
            for k in 0..5 {
                out[j * 5 + k] = (0..5).fold(Q::zero(), |acc, i| acc + &self.curvature[((i * 5 + j) * 5 + k) * 5 + i]);
            }
        }
        out
    }

    pub fn scalar(&self) -> Q {
        let ric = self.ricci();
        (0..5).fold(Q::zero(), |acc, j| acc + &ric[j * 5 + LieAlgebra5::metric_partner(j)])
    }
}

/// `max |∇_X ξ + AX|` over basis `X`.
pub fn nabla_xi_residual(alg: &LieAlgebra5, k: &Koszul) -> Q {
    let mut worst = Q::zero();
    for i in 0..5 {
        let d = k.nabla_basis(i, 0);
        let a = alg.a_operator(&unit(5, i));
        let m = max_abs_q(&d.iter().zip(&a).map(|(x, y)| x + y).collect::<Vec<_>>());
        if m > worst {
            worst = m;
        }
    }
    worst
}

/// Curvature identities of weakly para-cosymplectic structures, evaluated
/// exactly on basis vectors. Each entry is the largest defect.
pub fn identity_residuals(k: &Koszul) -> Vec<(&'static str, Q)> {
    let s: Vec<Q> = PHI_SIGNS.iter().map(|&x| qi(x)).collect();
    let mut xi_slot = Q::zero();
    let mut commute = Q::zero();
    let mut double_phi = Q::zero();
    let mut slide = Q::zero();
    let mut xi_first = Q::zero();
    let mut pair = Q::zero();
    let mut bianchi = Q::zero();
    let up = |acc: &mut Q, v: Q| {
        let a = num_traits::Signed::abs(&v);
        if a > *acc {
            *acc = a;
        }
    };
    for i in 0..5 {
        for j in 0..5 {
            for c in 0..5 {
                let r = k.r_vec(i, j, c);
                for l in 0..5 {
                    if c == 0 {
                        up(&mut xi_slot, r[l].clone());
                    }
                    if i == 0 {
                        up(&mut xi_first, r[l].clone());
                    }
                    // φR(X,Y)e_c − R(X,Y)φe_c on the basis.
                    up(&mut commute, &s[l] * &r[l] - &s[c] * &r[l]);
                    up(&mut double_phi, (&s[i] * &s[j] + Q::one()) * &r[l]);
                    up(&mut slide, (&s[i] + &s[j]) * &r[l]);
                    up(&mut pair, k.rm(i, j, c, l) - k.rm(c, l, i, j));
                    let b = &k.r_vec(i, j, c)[l] + &k.r_vec(j, c, i)[l] + &k.r_vec(c, i, j)[l];
                    up(&mut bianchi, b);
                }
            }
        }
    }
    vec![
        ("R(X,Y) xi = 0", xi_slot),
        ("phi R(X,Y)Z = R(X,Y) phi Z", commute),
        ("R(phi X, phi Y) = -R(X,Y)", double_phi),
        ("R(phi X, Y) = -R(X, phi Y)", slide),
        ("R(xi,X) Y = 0", xi_first),
        ("R(X,Y,Z,W) = R(Z,W,X,Y)", pair),
        ("first Bianchi identity", bianchi),
    ]
}

/// Left-invariant `τ₁ = g(∇V₁,V₃)`, `τ₂ = g(∇V₂,V₄)`, `ω = g(∇V₃,V₄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureForms {
    pub tau1: Vec<Q>,
    pub tau2: Vec<Q>,
    pub omega: Vec<Q>,
}

pub fn structure_forms(k: &Koszul) -> StructureForms {
    let f = |a: usize, b: usize| -> Vec<Q> { (0..5).map(|c| g_lower(&k.nabla_basis(c, a), b)).collect() };
    StructureForms { tau1: f(1, 3), tau2: f(2, 4), omega: f(3, 4) }
}

/// Largest difference between the Koszul structure forms and
/// `τ₁ = α₁θ¹`, `τ₂ = α₂θ²`, `ω = α₀η + β₁θ¹ + β₂θ² + α₃θ³ + α₄θ⁴`.
pub fn structure_forms_residual(forms: &StructureForms, p: &FamilyParams) -> Q {
    let th = LieAlgebra5::theta;
    let lin = |terms: &[(&Q, usize)]| -> Vec<Q> {
        let mut v = vec![Q::zero(); 5];
        for (c, i) in terms {
            for (o, t) in v.iter_mut().zip(th(*i)) {
                *o += *c * t;
            }
        }
        v
    };
    let t1 = lin(&[(&p.alpha1, 1)]);
    let t2 = lin(&[(&p.alpha2, 2)]);
    let w = lin(&[(&p.alpha0, 0), (&p.beta1, 1), (&p.beta2, 2), (&p.alpha3, 3), (&p.alpha4, 4)]);
    let diff = |a: &[Q], b: &[Q]| max_abs_q(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>());
    [diff(&forms.tau1, &t1), diff(&forms.tau2, &t2), diff(&forms.omega, &w)].into_iter().max().unwrap()
}

/// Frame coefficients `a₁, a₂, b₁, b₂, γ` of a left-invariant frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCoeffs {
    pub a1: Q,
    pub a2: Q,
    pub b1: Q,
    pub b2: Q,
    pub gamma: Q,
}

fn theta2(i: usize, j: usize) -> TwoForm {
    TwoForm::wedge(&LieAlgebra5::theta(i), &LieAlgebra5::theta(j))
}

/// `Dω = dω − ω∧(τ₁ + τ₂)`.
pub fn d_omega(alg: &LieAlgebra5, f: &StructureForms) -> TwoForm {
    let t: Vec<Q> = f.tau1.iter().zip(&f.tau2).map(|(a, b)| a + b).collect();
    alg.algebra.d1(&f.omega).sub(&TwoForm::wedge(&f.omega, &t))
}

pub fn coefficients(alg: &LieAlgebra5, f: &StructureForms) -> ExactCoeffs {
    let dt1 = alg.algebra.d1(&f.tau1);
    let dt2 = alg.algebra.d1(&f.tau2);
    let dw = d_omega(alg, f);
    let w = |i: usize| DUAL[i];
    ExactCoeffs {
        a1: dt1.get(w(1), w(2)).clone(),
        a2: dt1.get(w(1), w(3)).clone(),
        b1: dt2.get(w(1), w(2)).clone(),
        b2: dt2.get(w(2), w(4)).clone(),
        gamma: dw.get(w(1), w(2)).clone(),
    }
}

/// `σΘ¹²⊗Θ¹² − dτ₁⊗Θ¹³ − dτ₂⊗Θ²⁴ + Dω⊗Θ¹²` on basis quadruples.
pub fn curvature_from_forms(alg: &LieAlgebra5, f: &StructureForms) -> Vec<Q> {
    let s = qi(alg.sigma);
    let t12 = theta2(1, 2);
    let t13 = theta2(1, 3);
    let t24 = theta2(2, 4);
    let first = t12.scale(&s).add(&d_omega(alg, f));
    let dt1 = alg.algebra.d1(&f.tau1);
    let dt2 = alg.algebra.d1(&f.tau2);
    let mut out = Vec::with_capacity(625);
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..5 {
                for l in 0..5 {
                    out.push(first.get(i, j) * t12.get(k, l) - dt1.get(i, j) * t13.get(k, l) - dt2.get(i, j) * t24.get(k, l));
                }
            }
        }
    }
    out
}

/// Exact comparison of the Koszul curvature with the structure-form
/// template, plus the scalar curvature both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureReport {
    pub flat: bool,
    pub template_residual: Q,
    pub coeffs: ExactCoeffs,
    pub scalar_trace: Q,
    /// `−2(a₂ + b₂)`.
    pub scalar_formula: Q,
    pub nabla_xi: Q,
    pub identities: Vec<(&'static str, Q)>,
}

pub fn curvature_report(alg: &LieAlgebra5) -> Result<CurvatureReport, LieError> {
    let k = koszul(alg)?;
    let f = structure_forms(&k);
    let template = curvature_from_forms(alg, &f);
    let rm = k.rm_all();
    let template_residual = max_abs_q(&rm.iter().zip(&template).map(|(a, b)| a - b).collect::<Vec<_>>());
    let coeffs = coefficients(alg, &f);
    let scalar_formula = qi(-2) * (&coeffs.a2 + &coeffs.b2);
    Ok(CurvatureReport {
        flat: k.is_flat(),
        template_residual,
        coeffs,
        scalar_trace: k.scalar(),
        scalar_formula,
        nabla_xi: nabla_xi_residual(alg, &k),
        identities: identity_residuals(&k),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{family_algebra, Family};
    use super::*;

    #[test]
    fn metric_compatible_and_torsion_free() {
        let p = FamilyParams { alpha1: qi(2), alpha2: super::super::q(1, 3), beta1: qi(1), beta2: qi(-1), ..Default::default() };
        let alg = family_algebra(Family::A, &p).unwrap();
        let k = koszul(&alg).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let tor: Vec<Q> =
                    k.nabla_basis(i, j).iter().zip(k.nabla_basis(j, i)).zip(alg.bracket(i, j)).map(|((a, b), c)| a - &b - c).collect();
                assert!(tor.iter().all(Zero::is_zero));
                for l in 0..5 {
                    // X g(Y,Z) = 0 = g(∇_X Y, Z) + g(Y, ∇_X Z) for constant g.
                    let m = LieAlgebra5::inner(&k.nabla_basis(i, j), &unit(5, l)) + LieAlgebra5::inner(&unit(5, j), &k.nabla_basis(i, l));
                    assert!(m.is_zero());
                }
            }
        }
    }
}
