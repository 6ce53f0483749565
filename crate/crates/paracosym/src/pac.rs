//! Almost para-contact metric structures at a point: axioms, the tensor
//! `A = −∇ξ` and its classification, adopted frames, and identity suites.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::fields::Form;
use crate::jets::{Jet, JetMatrix};
use crate::models::{ChartModel, ModelError, StructureJets};
use crate::riemann::{covariant, idx, Curvature, RiemannError, Slot};

#[derive(Debug, Error)]
pub enum PacError {
    #[error("structure axiom `{name}` violated: residual {residual:.3e}")]
    Axiom { name: &'static str, residual: f64 },
    #[error("precondition `{name}` on A violated: residual {residual:.3e}")]
    Precondition { name: &'static str, residual: f64 },
    #[error("rank of A is {0}, too large for a weakly para-cosymplectic shape")]
    Rank(usize),
    #[error("no non-null vector in the orthogonal complement (degenerate input)")]
    Degenerate,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Curvature(#[from] RiemannError),
    #[error("jets of order {have} given, {need} required")]
    Order { have: usize, need: usize },
}

pub type Mat = Vec<Vec<f64>>;

/// Values of the structure tensors at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureAtPoint {
    pub n: usize,
    /// `phi[a][b]`: component `a` of `φ(∂_b)`.
    pub phi: Mat,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub g: Mat,
}

/// Residuals of the almost para-contact metric axioms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AxiomResiduals {
    pub phi_squared: f64,
    pub eta_xi: f64,
    pub metric: f64,
    pub eta_dual: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        self.phi_squared.max(self.eta_xi).max(self.metric).max(self.eta_dual)
    }
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn mat_vec(a: &Mat, v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

impl StructureAtPoint {
    pub fn from_jets(s: &StructureJets) -> StructureAtPoint {
        StructureAtPoint {
            n: s.g.n,
            phi: s.phi.values(),
            xi: s.xi.iter().map(Jet::value).collect(),
            eta: s.eta.iter().map(Jet::value).collect(),
            g: s.g.values(),
        }
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(&mat_vec(&self.g, y), x)
    }

    pub fn apply_phi(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.phi, v)
    }

    pub fn axiom_residuals(&self) -> AxiomResiduals {
        let n = self.n;
        let p2 = mat_mul(&self.phi, &self.phi);
        let mut r = AxiomResiduals { eta_xi: (dot(&self.eta, &self.xi) - 1.0).abs(), ..Default::default() };
        for a in 0..n {
            for b in 0..n {
                let id = if a == b { 1.0 } else { 0.0 };
                r.phi_squared = r.phi_squared.max((p2[a][b] - (id - self.xi[a] * self.eta[b])).abs());
                let mut gg = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        gg += self.phi[i][a] * self.phi[j][b] * self.g[i][j];
                    }
                }
                r.metric = r.metric.max((gg + self.g[a][b] - self.eta[a] * self.eta[b]).abs());
            }
            let gx: f64 = (0..n).map(|b| self.g[a][b] * self.xi[b]).sum();
            r.eta_dual = r.eta_dual.max((gx - self.eta[a]).abs());
        }
        r
    }

    pub fn check(&self, tol: f64) -> Result<(), PacError> {
        let r = self.axiom_residuals();
        for (name, residual) in [
            ("phi^2 = Id - eta(x)xi", r.phi_squared),
            ("eta(xi) = 1", r.eta_xi),
            ("g(phi X, phi Y) = -g + eta eta", r.metric),
            ("eta = g(xi, .)", r.eta_dual),
        ] {
            if residual > tol {
                return Err(PacError::Axiom { name, residual });
            }
        }
        Ok(())
    }

    /// Projector onto the `±1` eigenspace of `φ`: `(Id ± φ − η⊗ξ)/2`.
    pub fn projector(&self, sign: f64) -> Mat {
        let n = self.n;
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let id = if a == b { 1.0 } else { 0.0 };
                        0.5 * (id + sign * self.phi[a][b] - self.xi[a] * self.eta[b])
                    })
                    .collect()
            })
            .collect()
    }

    /// Component sign flip `ξ → −ξ`, `η → −η`.
    pub fn flip_xi(&mut self) {
        self.xi.iter_mut().for_each(|v| *v = -*v);
        self.eta.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Pointwise type of `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    ParaCosymplecticPoint,
    Parabolic,
    Elliptic,
    Hyperbolic,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::ParaCosymplecticPoint => "para-cosymplectic-point",
            Kind::Parabolic => "parabolic",
            Kind::Elliptic => "elliptic",
            Kind::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ShapeClassification {
    pub rank: usize,
    pub kind: Kind,
    /// Isotropic vector with `φV₁ = −V₁`.
    pub v1: Option<Vec<f64>>,
    /// Isotropic vector with `φV₂ = V₂`.
    pub v2: Option<Vec<f64>>,
    pub epsilon: f64,
    /// `σ` for rank 2, 0 otherwise.
    pub sigma: f64,
    /// Rank decided by a singular value close to the threshold.
    pub boundary: bool,
    pub singular_values: Vec<f64>,
}

impl ShapeClassification {
    /// `AX = ε(g(X,V₁)V₁ + σ g(X,V₂)V₂)` as a matrix; rank 1 uses whichever
    /// vector is present with unit weight.
    pub fn reconstruct(&self, s: &StructureAtPoint) -> Mat {
        let n = s.n;
        let mut out = vec![vec![0.0; n]; n];
        let mut add = |v: &Vec<f64>, w: f64| {
            let gv = mat_vec(&s.g, v);
            for a in 0..n {
                for b in 0..n {
                    out[a][b] += w * v[a] * gv[b];
                }
            }
        };
        if let Some(v) = &self.v1 {
            add(v, self.epsilon);
        }
        if let Some(v) = &self.v2 {
            add(v, if self.rank == 2 { self.epsilon * self.sigma } else { self.epsilon });
        }
        out
    }
}

/// First nonzero component made positive.
pub fn normalize_sign(v: &mut [f64]) {
    let scale = max_abs(v.iter().copied());
    if let Some(x) = v.iter().find(|x| x.abs() > 1e-12 * scale.max(1e-300)) {
        if *x < 0.0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
    }
}

/// Residuals of the preconditions on `A`: g-symmetry, `Aφ + φA`, `A²`, `Aξ`.
pub fn a_preconditions(s: &StructureAtPoint, a: &Mat) -> [(&'static str, f64); 4] {
    let n = s.n;
    let ga = mat_mul(&s.g, a);
    let sym = max_abs((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| ga[i][j] - ga[j][i]));
    let ap = mat_mul(a, &s.phi);
    let pa = mat_mul(&s.phi, a);
    let anti = max_abs(ap.iter().flatten().zip(pa.iter().flatten()).map(|(x, y)| x + y));
    let sq = max_abs(mat_mul(a, a).into_iter().flatten());
    let axi = max_abs(mat_vec(a, &s.xi));
    [("g(AX,Y) symmetric", sym), ("A phi = -phi A", anti), ("A^2 = 0", sq), ("A xi = 0", axi)]
}

/// Singular values of a real matrix, descending.
pub fn singular_values(a: &Mat) -> Vec<f64> {
    let n = a.len();
    let m = DMatrix::from_fn(n, a[0].len(), |i, j| a[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Rank, kind and the isotropic vectors of `A`.
pub fn classify_a(s: &StructureAtPoint, a: &Mat, tol: f64) -> Result<ShapeClassification, PacError> {
    let scale = max_abs(a.iter().flatten().copied()).max(1.0);
    for (name, residual) in a_preconditions(s, a) {
        if residual > tol * scale {
            return Err(PacError::Precondition { name, residual });
        }
    }
    let sv = singular_values(a);
    let top = sv[0];
    let rel = 1e-7;
    let rank = if top < 1e-12 { 0 } else { sv.iter().filter(|&&x| x > rel * top).count() };
    let boundary = top >= 1e-12 && sv.iter().any(|&x| x <= rel * top && x > 1e-12 * top);
    if rank > 2 {
        return Err(PacError::Rank(rank));
    }
    if rank == 0 {
        return Ok(ShapeClassification {
            rank,
            kind: Kind::ParaCosymplecticPoint,
            v1: None,
            v2: None,
            epsilon: 0.0,
            sigma: 0.0,
            boundary,
            singular_values: sv,
        });
    }
    // A maps each φ-eigenspace to the opposite one, and the image of the
    // +1 eigenspace is spanned by V₁ alone.
    let extract = |sign: f64| -> Option<(Vec<f64>, f64)> {
        let p = s.projector(sign);
        let m = mat_mul(a, &p);
        let n = s.n;
        let (j, norm) = (0..n)
            .map(|j| (j, (0..n).map(|i| m[i][j] * m[i][j]).sum::<f64>().sqrt()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if norm <= rel * top {
            return None;
        }
        let c: Vec<f64> = (0..n).map(|i| m[i][j]).collect();
        let pe: Vec<f64> = (0..n).map(|i| p[i][j]).collect();
        let d = s.inner(&c, &pe);
        let mut v: Vec<f64> = c.iter().map(|x| x / d.abs().sqrt()).collect();
        normalize_sign(&mut v);
        Some((v, d.signum()))
    };
    let e1 = extract(1.0);
    let e2 = extract(-1.0);
    let (kind, epsilon, sigma, v1, v2) = match (rank, e1, e2) {
        (2, Some((v1, s1)), Some((v2, s2))) => {
            let sigma = s1 * s2;
            let kind = if sigma > 0.0 { Kind::Elliptic } else { Kind::Hyperbolic };
            (kind, s1, sigma, Some(v1), Some(v2))
        }
        (1, Some((v1, s1)), None) => (Kind::Parabolic, s1, 0.0, Some(v1), None),
        (1, None, Some((v2, s2))) => (Kind::Parabolic, s2, 0.0, None, Some(v2)),
        _ => return Err(PacError::Degenerate),
    };
    Ok(ShapeClassification { rank, kind, v1, v2, epsilon, sigma, boundary, singular_values: sv })
}

/// Adopted frame by the inductive construction: `E₀ = ξ`, `E₁…E_n` in the
/// `+1` eigenspace, `E_{n+1}…E_{2n}` in the `−1` eigenspace,
/// `g(E_i, E_{j+n}) = δ_ij`.
pub fn build_adopted_frame(s: &StructureAtPoint) -> Result<Vec<Vec<f64>>, PacError> {
    s.check(1e-9)?;
    let dim = s.n;
    let n = (dim - 1) / 2;
    let mut plus: Vec<Vec<f64>> = Vec::new();
    let mut minus: Vec<Vec<f64>> = Vec::new();
    let basis = |i: usize| -> Vec<f64> { (0..dim).map(|k| if k == i { 1.0 } else { 0.0 }).collect() };
    for _ in 0..n {
        let project = |x: &[f64]| -> Vec<f64> {
            let mut v = x.to_vec();
            let ex = dot(&s.eta, x);
            for k in 0..dim {
                v[k] -= ex * s.xi[k];
            }
            for (ep, em) in plus.iter().zip(&minus) {
                let cp = s.inner(x, em);
                let cm = s.inner(x, ep);
                for k in 0..dim {
                    v[k] -= cp * ep[k] + cm * em[k];
                }
            }
            v
        };
        let mut candidates: Vec<Vec<f64>> = (0..dim).map(|i| project(&basis(i))).collect();
        for i in 0..dim {
            for j in i + 1..dim {
                let mut b = basis(i);
                b[j] = 1.0;
                candidates.push(project(&b));
            }
        }
        let best = candidates
            .into_iter()
            .map(|v| (s.inner(&v, &v), v))
            .max_by(|x, y| x.0.abs().total_cmp(&y.0.abs()))
            .ok_or(PacError::Degenerate)?;
        if best.0.abs() < 1e-9 {
            return Err(PacError::Degenerate);
        }
        let eps = best.0.signum();
        let v: Vec<f64> = best.1.iter().map(|x| x / best.0.abs().sqrt()).collect();
        let pv = s.apply_phi(&v);
        let r2 = std::f64::consts::SQRT_2;
        plus.push(v.iter().zip(&pv).map(|(a, b)| (a + b) / (eps * r2)).collect());
        minus.push(v.iter().zip(&pv).map(|(a, b)| (a - b) / r2).collect());
    }
    let mut frame = vec![s.xi.clone()];
    frame.extend(plus);
    frame.extend(minus);
    Ok(frame)
}

/// Residuals of the adopted-frame postconditions.
pub fn adopted_frame_residual(s: &StructureAtPoint, frame: &[Vec<f64>]) -> f64 {
    let dim = s.n;
    let n = (dim - 1) / 2;
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let want = if (i == 0 && j == 0) || (i >= 1 && i <= n && j == i + n) || (j >= 1 && j <= n && i == j + n) {
                1.0
            } else {
                0.0
            };
            worst = worst.max((s.inner(&frame[i], &frame[j]) - want).abs());
        }
        let sign = if i == 0 { 0.0 } else if i <= n { 1.0 } else { -1.0 };
        let p = s.apply_phi(&frame[i]);
        worst = worst.max(max_abs(p.iter().zip(&frame[i]).map(|(a, b)| a - sign * b)));
    }
    worst
}

/// All derivative data at a point, computed once and shared by the suites.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub jets: StructureJets,
    pub structure: StructureAtPoint,
    pub curvature: Curvature,
    /// `a[a][b]`: component `a` of `A(∂_b)`, jets of order `k − 1`.
    pub a: JetMatrix,
    /// `(∇_c φ)^a_b` at flat index `(c, a, b)`, order `k − 1`.
    pub nabla_phi: Vec<Jet>,
    pub order: usize,
}

impl PointGeometry {
    pub fn new(model: &ChartModel, p: &[f64], order: usize) -> Result<PointGeometry, PacError> {
        let jets = model.structure_jets(p, order)?;
        PointGeometry::from_jets(jets)
    }

    pub fn from_jets(jets: StructureJets) -> Result<PointGeometry, PacError> {
        let order = jets.g.get(0, 0).order();
        let curvature = Curvature::from_metric(&jets.g)?;
        let n = jets.g.n;
        let xi: Vec<Jet> = jets.xi.clone();
        let nabla_xi = covariant(n, &xi, &[Slot::Up], &curvature.gamma);
        let a = JetMatrix::from_fn(n, |i, c| -nabla_xi[c * n + i].clone());
        let nabla_phi = covariant(n, &jets.phi.entries, &[Slot::Up, Slot::Down], &curvature.gamma);
        let structure = StructureAtPoint::from_jets(&jets);
        Ok(PointGeometry { jets, structure, curvature, a, nabla_phi, order })
    }

    pub fn n(&self) -> usize {
        self.structure.n
    }

    pub fn a_values(&self) -> Mat {
        self.a.values()
    }

    pub fn classify(&self, tol: f64) -> Result<ShapeClassification, PacError> {
        classify_a(&self.structure, &self.a_values(), tol)
    }

    /// `(R(∂x,∂y)∂z)^a` at flat index `(a, x, y, z)`.
    pub fn curvature_operator(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n.pow(4)];
        for a in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        out[idx(n, &[a, x, y, z])] = self.curvature.riemann[idx(n, &[a, z, x, y])].value();
                    }
                }
            }
        }
        out
    }

    /// Residuals `dη`, `dΦ` (max component).
    pub fn closedness(&self) -> (f64, f64) {
        let eta = Form::one_form(self.jets.eta.clone());
        let big_phi = ChartModel::fundamental_form(&self.jets);
        (eta.d().values().max_abs(), big_phi.d().values().max_abs())
    }
}

/// Contracts `m` into slot `slot` of a covariant rank-`k` tensor:
/// `t'(…, ∂_i, …) = Σ_j m[j][i] t(…, ∂_j, …)`.
pub fn plug(n: usize, t: &[f64], k: usize, slot: usize, m: &Mat) -> Vec<f64> {
    let mut out = vec![0.0; t.len()];
    let stride = n.pow((k - 1 - slot) as u32);
    for (flat, o) in out.iter_mut().enumerate() {
        let i = (flat / stride) % n;
        let base = flat - i * stride;
        *o = (0..n).map(|j| m[j][i] * t[base + j * stride]).sum();
    }
    out
}

/// Applies `m` to the leading contravariant slot: `t'^a = Σ m[a][b] t^b`.
pub fn push(n: usize, t: &[f64], k: usize, m: &Mat) -> Vec<f64> {
    plug(n, t, k, 0, &transpose(m))
}

pub fn transpose(m: &Mat) -> Mat {
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

fn diff_max(a: &[f64], b: &[f64], sign: f64) -> f64 {
    max_abs(a.iter().zip(b).map(|(x, y)| x - sign * y))
}

fn contract_vec(n: usize, t: &[f64], k: usize, slot: usize, v: &[f64]) -> Vec<f64> {
    let m: Mat = (0..n).map(|j| vec![v[j]; n]).collect();
    let p = plug(n, t, k, slot, &m);
    // Every value along `slot` is now the same contraction; keep index 0.
    let stride = n.pow((k - 1 - slot) as u32);
    p.iter().enumerate().filter(|(f, _)| (f / stride) % n == 0).map(|(_, x)| *x).collect()
}

/// Named residuals.
pub type Residuals = Vec<(String, f64)>;

/// Curvature identities satisfied on every weakly para-cosymplectic manifold.
pub fn prop1_identities(geo: &PointGeometry) -> Residuals {
    let n = geo.n();
    let phi = &geo.structure.phi;
    let xi = &geo.structure.xi;
    let op = geo.curvature_operator();
    let rm = geo.curvature.rm_values();
    let ric = geo.curvature.ricci_values();
    let mut out = Residuals::new();
    let mut push_r = |name: &str, r: f64| out.push((name.to_string(), r));

    // Operator form, slots (a; x, y, z).
    let phi_r = push(n, &op, 4, phi);
    let r_phi = plug(n, &op, 4, 3, phi);
    push_r("phi R(X,Y)Z = R(X,Y) phi Z", diff_max(&phi_r, &r_phi, 1.0));
    let r_pp = plug(n, &plug(n, &op, 4, 1, phi), 4, 2, phi);
    push_r("R(phi X, phi Y) = -R(X,Y)", diff_max(&r_pp, &op, -1.0));
    let r_px = plug(n, &op, 4, 1, phi);
    let r_py = plug(n, &op, 4, 2, phi);
    push_r("R(phi X, Y) = -R(X, phi Y)", diff_max(&r_px, &r_py, -1.0));
    push_r("R(X,Y) xi = 0", max_abs(contract_vec(n, &op, 4, 3, xi)));
    push_r("R(xi,X) Y = 0", max_abs(contract_vec(n, &op, 4, 1, xi)));

    // Covariant form R(X,Y,Z,W).
    let s: Vec<Vec<f64>> = (0..4).map(|k| plug(n, &rm, 4, k, phi)).collect();
    push_r("R(phi X,Y,Z,W) = -R(X,phi Y,Z,W)", diff_max(&s[0], &s[1], -1.0));
    push_r("R(X,Y,phi Z,W) = -R(X,Y,Z,phi W)", diff_max(&s[2], &s[3], -1.0));
    let s01 = plug(n, &s[0], 4, 1, phi);
    let s23 = plug(n, &s[2], 4, 3, phi);
    push_r("R(phi X,phi Y,Z,W) = -R(X,Y,Z,W)", diff_max(&s01, &rm, -1.0));
    push_r("R(X,Y,phi Z,phi W) = -R(X,Y,Z,W)", diff_max(&s23, &rm, -1.0));
    let xi_slots = (0..4).map(|k| max_abs(contract_vec(n, &rm, 4, k, xi))).fold(0.0, f64::max);
    push_r("R(xi,.,.,.) = 0 in every slot", xi_slots);

    let r0 = plug(n, &ric, 2, 0, phi);
    let r1 = plug(n, &ric, 2, 1, phi);
    push_r("Ric(phi X, Y) = -Ric(X, phi Y)", diff_max(&r0, &r1, -1.0));
    let r01 = plug(n, &r0, 2, 1, phi);
    push_r("Ric(phi X, phi Y) = -Ric(X,Y)", diff_max(&r01, &ric, -1.0));
    push_r("Ric(X, xi) = 0", max_abs(contract_vec(n, &ric, 2, 1, xi)));
    out
}

/// `|R(φX,Y,Z,W) − R(X,Y,φZ,W)|` relative to `|R|`. Sliding `φ` across the
/// two pairs is not a curvature identity: for `R = Θ¹²⊗Θ¹²` one side is
/// `(θ¹⊙θ²)⊗Θ¹²` and the other `Θ¹²⊗(θ¹⊙θ²)`. Reported as a finding.
pub fn cross_pair_sliding(geo: &PointGeometry) -> f64 {
    let n = geo.n();
    let rm = geo.curvature.rm_values();
    let phi = &geo.structure.phi;
    let scale = max_abs(rm.iter().copied());
    if scale == 0.0 {
        return 0.0;
    }
    diff_max(&plug(n, &rm, 4, 0, phi), &plug(n, &rm, 4, 2, phi), 1.0) / scale
}

/// Ricci form `ρ(X,Y) = Ric(φX, Y)` as jets of order `k − 2`.
pub fn ricci_form(geo: &PointGeometry) -> Form<Jet> {
    let n = geo.n();
    let ro = geo.order - 2;
    let m: Vec<Vec<Jet>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut acc = Jet::zero(n, ro);
                    for e in 0..n {
                        acc += &(geo.jets.phi.get(e, a).truncate(ro) * &geo.curvature.ricci[e * n + b]);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Form::two_form(&m)
}

/// Antisymmetry residual of `Ric(φX, Y)` and `|dρ|` (requires order 3).
pub fn ricci_form_check(geo: &PointGeometry) -> Result<(f64, f64, Form<f64>), PacError> {
    if geo.order < 3 {
        return Err(PacError::Order { have: geo.order, need: 3 });
    }
    let n = geo.n();
    let ric = geo.curvature.ricci_values();
    let rho = plug(n, &ric, 2, 0, &geo.structure.phi);
    let anti = max_abs((0..n * n).map(|f| rho[f] + rho[(f % n) * n + f / n]));
    let form = ricci_form(geo);
    Ok((anti, form.d().values().max_abs(), form.values()))
}

/// Para-Kähler leaf identity, Codazzi property of `A`, and the nilpotency
/// identities `A(∇A) = (∇A)A = ∇_{A·}A = 0`.
pub fn pk_leaves(geo: &PointGeometry) -> Residuals {
    let n = geo.n();
    let s = &geo.structure;
    let a = geo.a_values();
    let aphi = mat_mul(&a, &s.phi);
    let mut eq1 = 0.0f64;
    for c in 0..n {
        for b in 0..n {
            let gab = (0..n).map(|i| s.g[i][b] * aphi[i][c]).sum::<f64>();
            for i in 0..n {
                let lhs = geo.nabla_phi[idx(n, &[c, i, b])].value();
                let rhs = gab * s.xi[i] - s.eta[b] * aphi[i][c];
                eq1 = eq1.max((lhs - rhs).abs());
            }
        }
    }
    let mut out: Residuals = vec![("(nabla_X phi)Y = g(A phi X, Y) xi - eta(Y) A phi X".into(), eq1)];
    if geo.order >= 2 {
        let na: Vec<f64> = covariant(n, &geo.a.entries, &[Slot::Up, Slot::Down], &geo.curvature.gamma)
            .iter()
            .map(Jet::value)
            .collect();
        // na[(c, i, b)] = ((∇_c A) ∂_b)^i
        let at = |c: usize, i: usize, b: usize| na[idx(n, &[c, i, b])];
        let mut codazzi = 0.0f64;
        let mut l1 = 0.0f64;
        let mut l2 = 0.0f64;
        let mut l3 = 0.0f64;
        for c in 0..n {
            for b in 0..n {
                for i in 0..n {
                    codazzi = codazzi.max((at(c, i, b) - at(b, i, c)).abs());
                    let x1: f64 = (0..n).map(|e| a[i][e] * at(c, e, b)).sum();
                    let x2: f64 = (0..n).map(|e| at(c, i, e) * a[e][b]).sum();
                    let x3: f64 = (0..n).map(|e| a[e][b] * at(e, i, c)).sum();
                    l1 = l1.max(x1.abs());
                    l2 = l2.max(x2.abs());
                    l3 = l3.max(x3.abs());
                }
            }
        }
        out.push(("(nabla_X A)Y = (nabla_Y A)X".into(), codazzi));
        out.push(("A (nabla_X A) Y = 0".into(), l1));
        out.push(("(nabla_X A) A Y = 0".into(), l2));
        out.push(("(nabla_{AY} A) X = 0".into(), l3));
    }
    out
}

/// Curvature commutes with `φ` on basis pairs: `[R(X,Y), φ]`.
pub fn weak_paracosymplectic_residual(geo: &PointGeometry) -> f64 {
    let n = geo.n();
    let op = geo.curvature_operator();
    let phi = &geo.structure.phi;
    diff_max(&push(n, &op, 4, phi), &plug(n, &op, 4, 3, phi), 1.0)
}

/// Real parts of the eigenvalues of `Q = g⁻¹ Ric`, ascending.
pub fn ricci_spectrum(geo: &PointGeometry) -> Vec<f64> {
    let n = geo.n();
    let ric = geo.curvature.ricci_values();
    let gi = geo.curvature.ginv.values();
    let q = DMatrix::from_fn(n, n, |i, j| (0..n).map(|k| gi[i][k] * ric[k * n + j]).sum());
    let mut ev: Vec<f64> = q.complex_eigenvalues().iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Coefficients `c[k]` of `det(λ − Q) = Σ c[k] λ^(n−k)` for the Ricci
/// operator, by Faddeev-LeVerrier. Unlike eigenvalues these stay well
/// conditioned when roots repeat.
pub fn ricci_char_poly(geo: &PointGeometry) -> Vec<f64> {
    let n = geo.n();
    let ric = geo.curvature.ricci_values();
    let gi = geo.curvature.ginv.values();
    let q = DMatrix::from_fn(n, n, |i, j| (0..n).map(|k| gi[i][k] * ric[k * n + j]).sum());
    let mut c = vec![1.0];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        for i in 0..n {
            m[(i, i)] += c[k - 1];
        }
        m = &q * &m;
        c.push(-m.trace() / k as f64);
    }
    c
}

/// Coefficients of the monic polynomial with the given roots, in the
/// layout of [`ricci_char_poly`].
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = c.clone();
        next.push(0.0);
        for (k, x) in c.iter().enumerate() {
            next[k + 1] -= r * x;
        }
        c = next;
    }
    c
}

/// `|Ric − (r/(dim−1))(g − η⊗η)|`.
pub fn eta_einstein_residual(geo: &PointGeometry, r: f64) -> f64 {
    let n = geo.n();
    let s = &geo.structure;
    let ric = geo.curvature.ricci_values();
    max_abs((0..n * n).map(|f| {
        let (a, b) = (f / n, f % n);
        ric[f] - r / (n as f64 - 1.0) * (s.g[a][b] - s.eta[a] * s.eta[b])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Expr;

    #[test]
    fn poly_from_roots_expands() {
        assert_eq!(poly_from_roots(&[1.0, 2.0]), vec![1.0, -3.0, 2.0]);
    }

    fn flat_paracosymplectic() -> StructureAtPoint {
        // g = dt² + 2dx1dy1 + 2dx2dy2, φ = +1 on ∂x, −1 on ∂y.
        let mut g = vec![vec![0.0; 5]; 5];
        g[0][0] = 1.0;
        g[1][3] = 1.0;
        g[3][1] = 1.0;
        g[2][4] = 1.0;
        g[4][2] = 1.0;
        let mut phi = vec![vec![0.0; 5]; 5];
        phi[1][1] = 1.0;
        phi[2][2] = 1.0;
        phi[3][3] = -1.0;
        phi[4][4] = -1.0;
        let e0 = vec![1.0, 0.0, 0.0, 0.0, 0.0];
        StructureAtPoint { n: 5, phi, xi: e0.clone(), eta: e0, g }
    }

    #[test]
    fn adopted_frame_on_flat_structure() {
        let s = flat_paracosymplectic();
        let f = build_adopted_frame(&s).unwrap();
        // Exact up to the rounding of √2.
        assert!(adopted_frame_residual(&s, &f) < 1e-15);
    }

    #[test]
    fn zero_a_is_a_paracosymplectic_point() {
        let s = flat_paracosymplectic();
        let c = classify_a(&s, &vec![vec![0.0; 5]; 5], 1e-9).unwrap();
        assert_eq!(c.rank, 0);
        assert_eq!(c.kind, Kind::ParaCosymplecticPoint);
    }

    #[test]
    fn plug_contracts_the_right_slot() {
        let n = 2;
        let t = vec![1.0, 2.0, 3.0, 4.0];
        let m = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(plug(n, &t, 2, 1, &m), vec![2.0, 1.0, 4.0, 3.0]);
        assert_eq!(plug(n, &t, 2, 0, &m), vec![3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn example1_is_elliptic_with_listed_a() {
        let geo = PointGeometry::new(&ChartModel::example1(), &[0.2, -0.1, 0.3, 0.4, -0.5], 2).unwrap();
        let a = geo.a_values();
        // A = 2du1⊗∂v1 + 2du2⊗∂v2.
        for (i, row) in a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if (i, j) == (3, 1) || (i, j) == (4, 2) { 2.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12, "A[{i}][{j}] = {v}");
            }
        }
        let c = geo.classify(1e-9).unwrap();
        assert_eq!((c.rank, c.kind), (2, Kind::Elliptic));
        let r = c.reconstruct(&geo.structure);
        assert!(max_abs(r.iter().flatten().zip(a.iter().flatten()).map(|(x, y)| x - y)) < 1e-12);
    }

    #[test]
    fn dim3_is_parabolic() {
        let m = ChartModel::dim3(Expr::var(0).pow(2), 1.0, 1.0).unwrap();
        let geo = PointGeometry::new(&m, &[0.3, -0.2, 0.1], 2).unwrap();
        let c = geo.classify(1e-9).unwrap();
        assert_eq!((c.rank, c.kind), (1, Kind::Parabolic));
        let f = build_adopted_frame(&geo.structure).unwrap();
        assert!(adopted_frame_residual(&geo.structure, &f) < 1e-12);
    }
}
