//! Adopted-frame calculus in dimension 5.
//!
//! A frame is `(ξ, V₁, V₂, V₃, V₄)` with `φV₁ = −V₁`, `φV₂ = V₂`,
//! `φV₃ = V₃`, `φV₄ = −V₄` and `g(ξ,ξ) = g(V₁,V₃) = g(V₂,V₄) = 1`. Its
//! metric coframe is `θⁱ = g(·, Vᵢ)`; the dual basis of `(θ⁰,…,θ⁴)` is
//! `(ξ, V₃, V₄, V₁, V₂)`. `Θ^{ij}` denotes `θⁱ∧θʲ` with
//! `(θⁱ∧θʲ)(X,Y) = θⁱ(X)θʲ(Y) − θʲ(X)θⁱ(Y)`.

use thiserror::Error;

use crate::fields::{Expr, ExprError, Form};
use crate::jets::Jet;
use crate::pac::{max_abs, normalize_sign, Kind, Mat, PacError, PointGeometry};
use crate::riemann::{covariant, idx, kulkarni_nomizu, Slot};

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("A is degenerate at this point (rank {0}); an adopted frame needs rank 2")]
    Degenerate(usize),
    #[error("A has ε = −1 at this point; apply the ξ → −ξ deformation first")]
    Orientation,
    #[error("frame invariant `{name}` violated: residual {residual:.3e}")]
    Invariant { name: &'static str, residual: f64 },
    #[error("curvature reconstruction residual {0:.3e} exceeds 1e-6")]
    Reconstruction(f64),
    #[error("Weyl expansion residual {0:.3e} outside the expected support")]
    WeylSupport(f64),
    #[error("frame is only defined in dimension 5")]
    Dimension,
    #[error(transparent)]
    Pac(#[from] PacError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("jet arithmetic: {0}")]
    Jet(String),
}

/// Index of the dual basis vector of `θⁱ` in the frame list.
pub const DUAL: [usize; 5] = [0, 3, 4, 1, 2];

fn jv_inner(g: &crate::jets::JetMatrix, x: &[Jet], y: &[Jet]) -> Jet {
    let n = x.len();
    let order = x[0].order().min(y[0].order());
    let mut acc = Jet::zero(n, order);
    for a in 0..n {
        for b in 0..n {
            acc += &(&(g.get(a, b) * &x[a]) * &y[b]);
        }
    }
    acc
}

fn jv_lin(terms: &[(&Jet, &[Jet])]) -> Vec<Jet> {
    let n = terms[0].1.len();
    (0..n)
        .map(|a| {
            let mut it = terms.iter().map(|(c, v)| *c * &v[a]);
            let first = it.next().unwrap();
            it.fold(first, |acc, t| acc + t)
        })
        .collect()
}

fn jv_phi(geo: &PointGeometry, v: &[Jet]) -> Vec<Jet> {
    let n = v.len();
    (0..n)
        .map(|a| {
            let mut acc = Jet::zero(n, v[0].order());
            for b in 0..n {
                acc += &(geo.jets.phi.get(a, b) * &v[b]);
            }
            acc
        })
        .collect()
}

fn values(v: &[Jet]) -> Vec<f64> {
    v.iter().map(Jet::value).collect()
}

/// Frame data at a point, with derivatives carried as jets.
#[derive(Clone, Debug)]
pub struct FrameState {
    pub sigma: f64,
    /// `vectors[i][a]`: chart component `a` of `Vᵢ` (`V₀ = ξ`).
    pub vectors: Vec<Vec<Jet>>,
    /// `coframe[i]`: the 1-form `θⁱ = g(·, Vᵢ)`.
    pub coframe: Vec<Form<Jet>>,
    /// `nabla[i][(c, a)]`: `(∇_c Vᵢ)^a`.
    pub nabla: Vec<Vec<Jet>>,
    pub tau1: Form<Jet>,
    pub tau2: Form<Jet>,
    pub omega: Form<Jet>,
}

impl FrameState {
    /// Completes a frame from its vectors; `σ` is read from `g(∇ξ, ·)`.
    pub fn from_vectors(geo: &PointGeometry, vectors: Vec<Vec<Jet>>, sigma: f64) -> FrameState {
        let n = geo.n();
        let gamma = &geo.curvature.gamma;
        let coframe: Vec<Form<Jet>> = vectors
            .iter()
            .map(|v| {
                Form::one_form(
                    (0..n)
                        .map(|a| {
                            let mut acc = Jet::zero(n, v[0].order());
                            for b in 0..n {
                                acc += &(geo.jets.g.get(a, b) * &v[b]);
                            }
                            acc
                        })
                        .collect(),
                )
            })
            .collect();
        let nabla: Vec<Vec<Jet>> = vectors.iter().map(|v| covariant(n, v, &[Slot::Up], gamma)).collect();
        let form_of = |i: usize, j: usize| -> Form<Jet> {
            // X ↦ g(∇_X Vᵢ, Vⱼ)
            let comps = (0..n)
                .map(|c| {
                    let d: Vec<Jet> = (0..n).map(|a| nabla[i][c * n + a].clone()).collect();
                    jv_inner(&geo.jets.g, &d, &vectors[j])
                })
                .collect();
            Form::one_form(comps)
        };
        let tau1 = form_of(1, 3);
        let tau2 = form_of(2, 4);
        let omega = form_of(3, 4);
        FrameState { sigma, vectors, coframe, nabla, tau1, tau2, omega }
    }

    pub fn vector_values(&self) -> Vec<Vec<f64>> {
        self.vectors.iter().map(|v| values(v)).collect()
    }

    /// Dual basis of the coframe: `θⁱ(W_j) = δ`.
    pub fn dual_basis(&self) -> Vec<Vec<f64>> {
        let v = self.vector_values();
        DUAL.iter().map(|&i| v[i].clone()).collect()
    }

    pub fn coframe_values(&self) -> Vec<Form<f64>> {
        self.coframe.iter().map(Form::values).collect()
    }

    /// `Dω = dω − ω∧(τ₁ + τ₂)` at the point.
    pub fn d_omega(&self) -> Form<f64> {
        let t = self.tau1.values().add(&self.tau2.values());
        self.omega.d().values().sub(&self.omega.values().wedge(&t))
    }

    /// Proportionality scalars `τ₁ = α₁θ¹`, `τ₂ = α₂θ²` and the residual of
    /// the proportionality.
    pub fn alpha_fns(&self) -> (f64, f64, f64) {
        let w = self.dual_basis();
        let th = self.coframe_values();
        let t1 = self.tau1.values();
        let t2 = self.tau2.values();
        let a1 = t1.eval(&[w[1].clone()]);
        let a2 = t2.eval(&[w[2].clone()]);
        let r1 = t1.sub(&th[1].scale(a1)).max_abs();
        let r2 = t2.sub(&th[2].scale(a2)).max_abs();
        (a1, a2, r1.max(r2))
    }

    /// Metric normalization, eigen-relations and the connection relations
    /// `∇ξ = −A`, `∇V₁ = τ₁⊗V₁`, `∇V₂ = τ₂⊗V₂`, `∇V₃`, `∇V₄`.
    pub fn invariant_residuals(&self, geo: &PointGeometry) -> Vec<(&'static str, f64)> {
        let n = geo.n();
        let s = &geo.structure;
        let v = self.vector_values();
        let signs = [0.0, -1.0, 1.0, 1.0, -1.0];
        let mut metric = 0.0f64;
        let mut eigen = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                let pair = (i.min(j), i.max(j));
                let want = if pair == (0, 0) || pair == (1, 3) || pair == (2, 4) { 1.0 } else { 0.0 };
                metric = metric.max((s.inner(&v[i], &v[j]) - want).abs());
            }
            let p = s.apply_phi(&v[i]);
            eigen = eigen.max(max_abs(p.iter().zip(&v[i]).map(|(x, y)| x - signs[i] * y)));
        }
        // Expected ∇_c Vᵢ from the connection matrix.
        let th: Vec<Form<f64>> = self.coframe_values();
        let omega_m = connection_matrix(self);
        let mut conn = 0.0f64;
        for i in 0..5 {
            for c in 0..n {
                let mut e = vec![0.0; n];
                let ec: Vec<f64> = (0..n).map(|k| if k == c { 1.0 } else { 0.0 }).collect();
                for k in 0..5 {
                    let w = omega_m[k][i].eval(&[ec.clone()]);
                    for a in 0..n {
                        e[a] += w * v[k][a];
                    }
                }
                for a in 0..n {
                    conn = conn.max((self.nabla[i][c * n + a].value() - e[a]).abs());
                }
            }
        }
        let _ = th;
        vec![("adopted metric pattern", metric), ("phi eigen-relations", eigen), ("nabla V = V Omega", conn)]
    }

    /// Frame components `T(W_i, W_j, W_k, W_l)` of a chart (0,4)-tensor.
    pub fn to_frame(&self, t: &[f64]) -> Vec<f64> {
        let w = self.dual_basis();
        to_basis(5, t, &w)
    }

    /// Chart components of a tensor given by frame components.
    pub fn to_chart(&self, t: &[f64]) -> Vec<f64> {
        let th: Vec<Vec<f64>> = self
            .coframe_values()
            .iter()
            .map(|f| (0..5).map(|a| f.comps.get(&(1u8 << a)).copied().unwrap_or(0.0)).collect())
            .collect();
        // e_a = Σ_i θⁱ(∂_a) W_i, so chart components are frame components
        // contracted with θⁱ_a in every slot.
        let basis: Vec<Vec<f64>> = (0..5).map(|a| (0..5).map(|i| th[i][a]).collect()).collect();
        to_basis(5, t, &basis)
    }
}

/// `T'(b_{i1},…) ` for a covariant tensor and a basis given by components.
fn to_basis(n: usize, t: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let k = (t.len() as f64).log(n as f64).round() as usize;
    let mut cur = t.to_vec();
    for slot in 0..k {
        let m: Mat = (0..n).map(|j| (0..n).map(|i| basis[i][j]).collect()).collect();
        cur = crate::pac::plug(n, &cur, k, slot, &m);
    }
    cur
}

/// The connection matrix: `∇Vᵢ = Σ_k Ω[k][i] ⊗ V_k`.
pub fn connection_matrix(fs: &FrameState) -> Vec<Vec<Form<f64>>> {
    let th = fs.coframe_values();
    let z = Form::zero(5, 1);
    let (t1, t2, om) = (fs.tau1.values(), fs.tau2.values(), fs.omega.values());
    let s = fs.sigma;
    vec![
        vec![z.clone(), z.clone(), z.clone(), th[1].clone(), th[2].scale(s)],
        vec![th[1].scale(-1.0), t1.clone(), z.clone(), z.clone(), om.scale(-1.0)],
        vec![th[2].scale(-s), z.clone(), t2.clone(), om.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), t1.scale(-1.0), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), t2.scale(-1.0)],
    ]
}

/// Metric skew-compatibility `Ω^k_i g_kj + Ω^k_j g_ik = 0` of a connection matrix.
pub fn connection_skew_residual(m: &[Vec<Form<f64>>]) -> f64 {
    let g = frame_metric();
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let mut acc = Form::zero(5, 1);
            for k in 0..5 {
                if g[k][j] != 0.0 {
                    acc = acc.add(&m[k][i].scale(g[k][j]));
                }
                if g[i][k] != 0.0 {
                    acc = acc.add(&m[k][j].scale(g[i][k]));
                }
            }
            worst = worst.max(acc.max_abs());
        }
    }
    worst
}

fn frame_metric() -> Mat {
    crate::models::adopted_frame_metric()
}

/// Adopted frame built from the isotropic vectors of `A`.
pub fn frame_from_model(geo: &PointGeometry, tol: f64) -> Result<FrameState, FrameError> {
    let n = geo.n();
    if n != 5 {
        return Err(FrameError::Dimension);
    }
    let cls = geo.classify(tol)?;
    if cls.rank != 2 {
        return Err(FrameError::Degenerate(cls.rank));
    }
    if cls.epsilon < 0.0 {
        return Err(FrameError::Orientation);
    }
    let sigma = if cls.kind == Kind::Elliptic { 1.0 } else { -1.0 };
    let order = geo.order;
    let a = &geo.a;
    let eta = &geo.jets.eta;
    let xi = &geo.jets.xi;
    let projector = |sign: f64, j: usize| -> Vec<Jet> {
        // (Id ± φ − η⊗ξ)/2 applied to ∂_j
        (0..n)
            .map(|i| {
                let id = Jet::constant(n, order, if i == j { 1.0 } else { 0.0 });
                (id + geo.jets.phi.get(i, j).scale(sign) - &xi[i] * &eta[j]).scale(0.5)
            })
            .collect()
    };
    let isotropic = |sign: f64| -> Result<Vec<Jet>, FrameError> {
        let pv = crate::pac::mat_mul(&geo.a_values(), &geo.structure.projector(sign));
        let j = (0..n)
            .max_by(|&x, &y| {
                let nx: f64 = (0..n).map(|i| pv[i][x] * pv[i][x]).sum();
                let ny: f64 = (0..n).map(|i| pv[i][y] * pv[i][y]).sum();
                nx.total_cmp(&ny)
            })
            .unwrap();
        let pe = projector(sign, j);
        let c: Vec<Jet> = (0..n)
            .map(|i| {
                let mut acc = Jet::zero(n, order - 1);
                for k in 0..n {
                    acc += &(a.get(i, k) * &pe[k]);
                }
                acc
            })
            .collect();
        let d = jv_inner(&geo.jets.g, &c, &pe);
        let d = if d.value() < 0.0 { -d } else { d };
        let inv = d.sqrt().and_then(|r| r.recip()).map_err(|e| FrameError::Jet(e.to_string()))?;
        let mut v: Vec<Jet> = c.iter().map(|x| x * &inv).collect();
        let mut vals = values(&v);
        let before = vals.clone();
        normalize_sign(&mut vals);
        if vals != before {
            v = v.into_iter().map(|x| -x).collect();
        }
        Ok(v)
    };
    let v1 = isotropic(1.0)?;
    let v2 = isotropic(-1.0)?;
    let complete = |v: &[Jet], sign: f64| -> Result<Vec<Jet>, FrameError> {
        let gv: Vec<Jet> = (0..n)
            .map(|a| {
                let mut acc = Jet::zero(n, v[0].order());
                for b in 0..n {
                    acc += &(geo.jets.g.get(a, b) * &v[b]);
                }
                acc
            })
            .collect();
        let j = (0..n).max_by(|&x, &y| gv[x].value().abs().total_cmp(&gv[y].value().abs())).unwrap();
        let inv = gv[j].recip().map_err(|e| FrameError::Jet(e.to_string()))?;
        let u: Vec<Jet> = (0..n)
            .map(|a| {
                let e = Jet::constant(n, order, if a == j { 1.0 } else { 0.0 });
                &(e - &eta[j] * &xi[a]) * &inv
            })
            .collect();
        let pu = jv_phi(geo, &u);
        Ok(u.iter().zip(&pu).map(|(x, y)| (x + &y.scale(sign)).scale(0.5)).collect())
    };
    let v3 = complete(&v1, 1.0)?;
    let v4 = complete(&v2, -1.0)?;
    let c = jv_inner(&geo.jets.g, &v3, &v4);
    let minus_c = -c;
    let one = Jet::constant(n, order, 1.0);
    let v3 = jv_lin(&[(&one, &v3), (&minus_c, &v2)]);
    let xi_v: Vec<Jet> = xi.clone();
    let fs = FrameState::from_vectors(geo, vec![xi_v, v1, v2, v3, v4], sigma);
    Ok(fs)
}

/// The frame `Vᵢ = Σ G_ij e_j` of a coframe model, `e_j` dual to `θʲ`.
pub fn frame_from_coframe(geo: &PointGeometry, sigma: f64) -> Option<FrameState> {
    let dual = geo.jets.dual_frame.as_ref()?;
    let g = frame_metric();
    let n = geo.n();
    let vectors: Vec<Vec<Jet>> = (0..5)
        .map(|i| {
            (0..n)
                .map(|a| {
                    let mut acc = Jet::zero(n, geo.order);
                    for j in 0..5 {
                        if g[i][j] != 0.0 {
                            acc += &dual.get(a, j).scale(g[i][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Some(FrameState::from_vectors(geo, vectors, sigma))
}

/// Curvature coefficients: `dτ₁ = a1Θ¹² + a2Θ¹³`, `dτ₂ = b1Θ¹² + b2Θ²⁴`,
/// `Dω = γΘ¹² − a1Θ¹³ − b1Θ²⁴`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CurvatureCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub gamma: f64,
    pub sigma: f64,
}

/// Coefficients with the residuals of the expansions.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub coeffs: CurvatureCoeffs,
    /// Largest frame component of `dτ₁`, `dτ₂`, `Dω` outside the expected pattern.
    pub residual: f64,
    /// `dτ₁∧θ¹`, `dτ₂∧θ²`, `dτ₁∧θ³ − Dω∧θ²`, `dτ₂∧θ⁴ + Dω∧θ¹`.
    pub bianchi: f64,
}

/// Frame components `F(W_i, W_j)` of a 2-form.
pub fn frame_components2(fs: &FrameState, f: &Form<f64>) -> Mat {
    let w = fs.dual_basis();
    (0..5).map(|i| (0..5).map(|j| f.eval(&[w[i].clone(), w[j].clone()])).collect()).collect()
}

pub fn extract_coeffs(fs: &FrameState) -> Extraction {
    let dt1 = fs.tau1.d().values();
    let dt2 = fs.tau2.d().values();
    let dw = fs.d_omega();
    let f1 = frame_components2(fs, &dt1);
    let f2 = frame_components2(fs, &dt2);
    let fw = frame_components2(fs, &dw);
    let coeffs =
        CurvatureCoeffs { a1: f1[1][2], a2: f1[1][3], b1: f2[1][2], b2: f2[2][4], gamma: fw[1][2], sigma: fs.sigma };
    let mut residual = 0.0f64;
    let expect = |m: &Mat, allowed: &[((usize, usize), f64)]| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..5 {
            for j in i + 1..5 {
                let want = allowed.iter().find(|(p, _)| *p == (i, j)).map(|(_, v)| *v).unwrap_or(0.0);
                worst = worst.max((m[i][j] - want).abs());
            }
        }
        worst
    };
    let c = &coeffs;
    residual = residual.max(expect(&f1, &[((1, 2), c.a1), ((1, 3), c.a2)]));
    residual = residual.max(expect(&f2, &[((1, 2), c.b1), ((2, 4), c.b2)]));
    residual = residual.max(expect(&fw, &[((1, 2), c.gamma), ((1, 3), -c.a1), ((2, 4), -c.b1)]));
    let th = fs.coframe_values();
    let bianchi = [
        dt1.wedge(&th[1]).max_abs(),
        dt2.wedge(&th[2]).max_abs(),
        dt1.wedge(&th[3]).sub(&dw.wedge(&th[2])).max_abs(),
        dt2.wedge(&th[4]).add(&dw.wedge(&th[1])).max_abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Extraction { coeffs, residual, bianchi }
}

/// Frame components of `Θ^{pq}`.
fn theta2(p: usize, q: usize) -> Mat {
    let mut m = vec![vec![0.0; 5]; 5];
    m[p][q] = 1.0;
    m[q][p] = -1.0;
    m
}

/// `Σ F(W_i,W_j) G(W_k,W_l)` frame components of `F⊗G`.
fn outer(f: &Mat, g: &Mat) -> Vec<f64> {
    let mut out = vec![0.0; 625];
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..5 {
                for l in 0..5 {
                    out[idx(5, &[i, j, k, l])] = f[i][j] * g[k][l];
                }
            }
        }
    }
    out
}

fn axpy(acc: &mut [f64], s: f64, x: &[f64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += s * b;
    }
}

/// Frame-component curvature from the structure forms:
/// `R = σΘ¹²⊗Θ¹² − dτ₁⊗Θ¹³ − dτ₂⊗Θ²⁴ + Dω⊗Θ¹²`.
pub fn curvature_from_forms(fs: &FrameState) -> Vec<f64> {
    let t12 = theta2(1, 2);
    let mut r = outer(&t12, &t12);
    r.iter_mut().for_each(|x| *x *= fs.sigma);
    let f1 = frame_components2(fs, &fs.tau1.d().values());
    let f2 = frame_components2(fs, &fs.tau2.d().values());
    let fw = frame_components2(fs, &fs.d_omega());
    axpy(&mut r, -1.0, &outer(&f1, &theta2(1, 3)));
    axpy(&mut r, -1.0, &outer(&f2, &theta2(2, 4)));
    axpy(&mut r, 1.0, &outer(&fw, &t12));
    r
}

/// Frame components of
/// `c₁₂Θ¹²⊗Θ¹² − a2Θ¹³⊗Θ¹³ − b2Θ²⁴⊗Θ²⁴ − a1(Θ¹²⊗Θ¹³ + Θ¹³⊗Θ¹²) − b1(Θ¹²⊗Θ²⁴ + Θ²⁴⊗Θ¹²)`.
pub fn curvature_from_coeffs(c: &CurvatureCoeffs, c12: f64) -> Vec<f64> {
    let (p, q1, q2) = (theta2(1, 2), theta2(1, 3), theta2(2, 4));
    let mut r = vec![0.0; 625];
    axpy(&mut r, c12, &outer(&p, &p));
    axpy(&mut r, -c.a2, &outer(&q1, &q1));
    axpy(&mut r, -c.b2, &outer(&q2, &q2));
    axpy(&mut r, -c.a1, &outer(&p, &q1));
    axpy(&mut r, -c.a1, &outer(&q1, &p));
    axpy(&mut r, -c.b1, &outer(&p, &q2));
    axpy(&mut r, -c.b1, &outer(&q2, &p));
    r
}

/// Oracle comparison of the curvature templates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reconstruction {
    /// `|R_template − R_oracle|` in chart components, structure-form template.
    pub forms_residual: f64,
    /// Same, coefficient template with `c₁₂ = σ + γ`.
    pub coeffs_residual: f64,
    /// Oracle `Θ¹²⊗Θ¹²` coefficient.
    pub fitted_c12: f64,
    /// Oracle residual outside the five-term support.
    pub off_support: f64,
    /// `σΘ¹²⊗Θ¹²` against `g(AX,Z)g(AY,W) − g(AX,W)g(AY,Z)`.
    pub aa_identity: f64,
}

pub fn reconstruct_curvature(geo: &PointGeometry, fs: &FrameState, c: &CurvatureCoeffs) -> Reconstruction {
    let rm = geo.curvature.rm_values();
    let rf = fs.to_frame(&rm);
    let chart_diff = |t: &[f64]| max_abs(fs.to_chart(t).iter().zip(&rm).map(|(a, b)| a - b));
    let forms_residual = chart_diff(&curvature_from_forms(fs));
    let coeffs_residual = chart_diff(&curvature_from_coeffs(c, c.sigma + c.gamma));
    let fitted_c12 = rf[idx(5, &[1, 2, 1, 2])];
    let fit = CurvatureCoeffs {
        a1: -rf[idx(5, &[1, 2, 1, 3])],
        a2: -rf[idx(5, &[1, 3, 1, 3])],
        b1: -rf[idx(5, &[1, 2, 2, 4])],
        b2: -rf[idx(5, &[2, 4, 2, 4])],
        gamma: 0.0,
        sigma: c.sigma,
    };
    let tmpl = curvature_from_coeffs(&fit, fitted_c12);
    let off_support = max_abs(rf.iter().zip(&tmpl).map(|(a, b)| a - b));
    // g(AW_i, W_k) in frame components.
    let a = geo.a_values();
    let w = fs.dual_basis();
    let s = &geo.structure;
    let ga: Mat = (0..5)
        .map(|i| {
            let aw = crate::pac::mat_vec(&a, &w[i]);
            (0..5).map(|k| s.inner(&aw, &w[k])).collect()
        })
        .collect();
    let t12 = theta2(1, 2);
    let mut aa = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..5 {
                for l in 0..5 {
                    let lhs = ga[i][k] * ga[j][l] - ga[i][l] * ga[j][k];
                    aa = aa.max((lhs - fs.sigma * t12[i][j] * t12[k][l]).abs());
                }
            }
        }
    }
    Reconstruction { forms_residual, coeffs_residual, fitted_c12, off_support, aa_identity: aa }
}

/// `Ric = −2a2θ¹⊙θ³ − 2b2θ²⊙θ⁴ − 2(a1 − b1)θ¹⊙θ²` (chart components,
/// `⊙` the symmetrized product) and `r = −2(a2 + b2)`.
pub fn ricci_from_coeffs(fs: &FrameState, c: &CurvatureCoeffs) -> (Vec<f64>, f64) {
    let mut f = vec![0.0; 25];
    let mut sym = |i: usize, j: usize, w: f64| {
        f[i * 5 + j] += w / 2.0;
        f[j * 5 + i] += w / 2.0;
    };
    sym(1, 3, -2.0 * c.a2);
    sym(2, 4, -2.0 * c.b2);
    sym(1, 2, -2.0 * (c.a1 - c.b1));
    (fs.to_chart(&f), -2.0 * (c.a2 + c.b2))
}

/// Ricci-potential data.
#[derive(Clone, Debug)]
pub struct RicciPotential {
    /// `|ρ − d(−τ₁ + τ₂)|`.
    pub residual: f64,
    /// `‖η∧ρ∧ρ‖`.
    pub contact: f64,
    /// `η − τ₁ + τ₂` at the point.
    pub potential: Form<f64>,
}

pub fn ricci_potential_check(geo: &PointGeometry, fs: &FrameState) -> RicciPotential {
    let rho = crate::pac::ricci_form(geo).values();
    let pot = fs.tau2.sub(&fs.tau1);
    let residual = rho.sub(&pot.d().values()).max_abs();
    let eta = Form::one_form(geo.jets.eta.iter().map(Jet::value).collect());
    let contact = eta.wedge(&rho).wedge(&rho).max_abs();
    RicciPotential { residual, contact, potential: eta.add(&pot.values()) }
}

/// Frame change `V₃' = V₃ + αV₂`, `V₄' = V₄ − αV₁` for a scalar field `α`.
pub fn gauge_transform(geo: &PointGeometry, fs: &FrameState, alpha: &Expr) -> Result<FrameState, FrameError> {
    let order = fs.vectors[3][0].order();
    let a = alpha.jet(&geo.jets.point, order)?;
    let one = Jet::constant(geo.n(), order, 1.0);
    let v = &fs.vectors;
    let v3 = jv_lin(&[(&one, &v[3]), (&a, &v[2])]);
    let v4 = jv_lin(&[(&one, &v[4]), (&(-a.clone()), &v[1])]);
    Ok(FrameState::from_vectors(geo, vec![v[0].clone(), v[1].clone(), v[2].clone(), v3, v4], fs.sigma))
}

/// Residuals of the gauge relations between two frames related by `α`:
/// `τᵢ' = τᵢ`, `ω' = ω + α(τ₁+τ₂) + dα`, `Dω' − Dω − α(dτ₁ + dτ₂)`.
pub fn gauge_relations(geo: &PointGeometry, before: &FrameState, after: &FrameState, alpha: &Expr) -> Result<[f64; 3], FrameError> {
    let p = &geo.jets.point;
    let aj = alpha.jet(p, 1)?;
    let av = aj.value();
    let da = Form::one_form(aj.gradient());
    let t = before.tau1.values().add(&before.tau2.values());
    let tau = after.tau1.values().sub(&before.tau1.values()).max_abs().max(after.tau2.values().sub(&before.tau2.values()).max_abs());
    let om = after.omega.values().sub(&before.omega.values().add(&t.scale(av)).add(&da)).max_abs();
    let dt = before.tau1.d().values().add(&before.tau2.d().values());
    let dw = after.d_omega().sub(&before.d_omega()).sub(&dt.scale(av)).max_abs();
    Ok([tau, om, dw])
}

/// Coefficient change under the frame change by a constant `α`.
pub fn gauge_action_matrix(c: &CurvatureCoeffs, alpha: f64) -> CurvatureCoeffs {
    CurvatureCoeffs {
        a1: c.a1 - alpha * c.a2,
        b1: c.b1 - alpha * c.b2,
        gamma: c.gamma + 2.0 * alpha * (c.a1 + c.b1) - alpha * alpha * (c.a2 + c.b2),
        ..*c
    }
}

/// Quadratic-form matrix of `R` in `(Θ¹², Θ¹³, Θ²⁴)`.
pub fn curvature_matrix(c: &CurvatureCoeffs) -> [[f64; 3]; 3] {
    [[c.sigma + c.gamma, -c.a1, -c.b1], [-c.a1, -c.a2, 0.0], [-c.b1, 0.0, -c.b2]]
}

/// Gauge invariants.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Invariants {
    /// `(σ + γ)(a2 + b2) + (a1 + b1)²`.
    pub i1: f64,
    /// `(σ + 2γ)(a2 + b2) + (a1 + b1)²`.
    pub i1_alt: f64,
    /// `a1 b2 − a2 b1`.
    pub i2: f64,
    pub det: f64,
}

pub fn invariants(c: &CurvatureCoeffs) -> Invariants {
    let s = c.a2 + c.b2;
    let t = (c.a1 + c.b1).powi(2);
    let m = curvature_matrix(c);
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Invariants {
        i1: (c.sigma + c.gamma) * s + t,
        i1_alt: (c.sigma + 2.0 * c.gamma) * s + t,
        i2: c.a1 * c.b2 - c.a2 * c.b1,
        det,
    }
}

/// Structure equations of the coframe: `dθ⁰ = dθ¹ = dθ² = 0`,
/// `dθ³ = θ¹∧θ⁰ + ω∧θ² − τ₁∧θ³`, `dθ⁴ = σθ²∧θ⁰ − ω∧θ¹ − τ₂∧θ⁴`.
pub fn cartan_residuals(fs: &FrameState) -> [f64; 2] {
    let th = fs.coframe_values();
    let d: Vec<Form<f64>> = fs.coframe.iter().map(|f| f.d().values()).collect();
    let (t1, t2, om) = (fs.tau1.values(), fs.tau2.values(), fs.omega.values());
    let closed = d[0].max_abs().max(d[1].max_abs()).max(d[2].max_abs());
    let e3 = d[3].sub(&th[1].wedge(&th[0])).sub(&om.wedge(&th[2])).add(&t1.wedge(&th[3]));
    let e4 = d[4].sub(&th[2].wedge(&th[0]).scale(fs.sigma)).add(&om.wedge(&th[1])).add(&t2.wedge(&th[4]));
    [closed, e3.max_abs().max(e4.max_abs())]
}

/// `θ¹∧dθ³`, `θ²∧dθ⁴`.
pub fn cartan_consequences(fs: &FrameState) -> f64 {
    let th = fs.coframe_values();
    let d3 = fs.coframe[3].d().values();
    let d4 = fs.coframe[4].d().values();
    th[1].wedge(&d3).max_abs().max(th[2].wedge(&d4).max_abs())
}

/// Labeled Weyl components in the frame.
#[derive(Clone, Debug)]
pub struct WeylFrame {
    /// `(label, oracle value, predicted value)`.
    pub labeled: Vec<(String, f64, f64)>,
    /// `|C_oracle − C_frame|`, the frame Weyl built from the coefficients.
    pub decomposition_residual: f64,
    /// `max |[C(X,Y), φ]|` over basis pairs.
    pub commutator: f64,
    pub ricci_norm: f64,
}

pub fn weyl_frame_components(geo: &PointGeometry, fs: &FrameState, c: &CurvatureCoeffs) -> WeylFrame {
    let n = 5;
    let cf = fs.to_frame(&geo.curvature.weyl);
    let at = |i: usize, j: usize, k: usize, l: usize| cf[idx(5, &[i, j, k, l])];
    let r = -2.0 * (c.a2 + c.b2);
    let labeled = vec![
        ("Θ14-Θ23".to_string(), at(1, 4, 2, 3), -r / 12.0),
        ("Θ12-Θ34".to_string(), at(1, 2, 3, 4), r / 12.0),
        ("Θ01-Θ02".to_string(), at(0, 1, 0, 2), (c.b1 - c.a1) / 3.0),
        ("Θ01-Θ03".to_string(), at(0, 1, 0, 3), (c.b2 - c.a2) / 6.0),
        ("Θ02-Θ04".to_string(), at(0, 2, 0, 4), (c.a2 - c.b2) / 6.0),
    ];
    // Frame-built Weyl: C = R − (1/3)(Ric − (r/8)g)∧g in frame components.
    let rt = curvature_from_coeffs(c, c.sigma + c.gamma);
    let g = frame_metric();
    let gf: Vec<f64> = g.iter().flatten().copied().collect();
    let mut ric = vec![0.0; 25];
    let mut sym = |i: usize, j: usize, w: f64| {
        ric[i * 5 + j] += w / 2.0;
        ric[j * 5 + i] += w / 2.0;
    };
    sym(1, 3, -2.0 * c.a2);
    sym(2, 4, -2.0 * c.b2);
    sym(1, 2, -2.0 * (c.a1 - c.b1));
    let sch: Vec<f64> = ric.iter().zip(&gf).map(|(a, b)| a - r / 8.0 * b).collect();
    let kn = kulkarni_nomizu(n, &sch, &gf);
    let cw: Vec<f64> = rt.iter().zip(&kn).map(|(a, b)| a - b / 3.0).collect();
    let decomposition_residual = max_abs(cf.iter().zip(&cw).map(|(a, b)| a - b));
    // Commutator in chart components.
    let wv = &geo.curvature.weyl;
    let gi = geo.curvature.ginv.values();
    let phi = &geo.structure.phi;
    // op[(a, x, y, z)] = (C(∂x,∂y)∂z)^a
    let mut op = vec![0.0; 625];
    for a in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    op[idx(n, &[a, x, y, z])] = (0..n).map(|w| gi[a][w] * wv[idx(n, &[x, y, z, w])]).sum();
                }
            }
        }
    }
    let lhs = crate::pac::push(n, &op, 4, phi);
    let rhs = crate::pac::plug(n, &op, 4, 3, phi);
    let commutator = max_abs(lhs.iter().zip(&rhs).map(|(a, b)| a - b));
    let ricci_norm = max_abs(geo.curvature.ricci_values());
    WeylFrame { labeled, decomposition_residual, commutator, ricci_norm }
}

/// Closedness of `θ¹ = g(·,V₁)` and `θ² = g(·,V₂)`.
pub fn isotropic_duals_closed(fs: &FrameState) -> f64 {
    fs.coframe[1].d().values().max_abs().max(fs.coframe[2].d().values().max_abs())
}

/// Claimed symbolic connection forms against a frame: `(τ₁, τ₂, ω)` residuals.
pub fn claimed_forms_residual(fs: &FrameState, claimed: &crate::models::ConnectionForms, p: &[f64]) -> [f64; 3] {
    [
        fs.tau1.values().sub(&claimed.tau1.eval_at(p)).max_abs(),
        fs.tau2.values().sub(&claimed.tau2.eval_at(p)).max_abs(),
        fs.omega.values().sub(&claimed.omega.eval_at(p)).max_abs(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_action_example() {
        let c = CurvatureCoeffs { a1: 1.0, a2: 2.0, b1: 3.0, b2: 4.0, gamma: 5.0, sigma: 1.0 };
        let d = gauge_action_matrix(&c, 0.5);
        assert_eq!((d.a1, d.a2, d.b1, d.b2, d.gamma), (0.0, 2.0, 1.0, 4.0, 7.5));
        let (i, j) = (invariants(&c), invariants(&d));
        assert_eq!((i.i2, j.i2), (-2.0, -2.0));
        assert_eq!((i.i1, j.i1), (52.0, 52.0));
    }

    #[test]
    fn gauge_action_at_zero_is_identity() {
        let c = CurvatureCoeffs { a1: 0.3, a2: -1.5, b1: 2.0, b2: 0.25, gamma: -0.75, sigma: -1.0 };
        assert_eq!(gauge_action_matrix(&c, 0.0), c);
    }
}
