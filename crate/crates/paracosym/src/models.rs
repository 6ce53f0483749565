//! Explicit model manifolds in coordinates.
//!
//! Five-dimensional families are given by an adopted coframe
//! `θ⁰ = dt, θ¹ = dx¹, θ² = dx², θ³, θ⁴` with metric
//! `g = θ⁰⊗θ⁰ + 2θ¹⊙θ³ + 2θ²⊙θ⁴` and `φ` diagonal on the coframe.
//! Example 1 and the 3-dimensional family are given directly by their
//! coordinate tensors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::fields::expr::{NAMES3, NAMES5};
use crate::fields::{Expr, ExprError, Form};
use crate::jets::{Jet, JetMatrix};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parameter `{0}`: {1}")]
    Param(String, String),
    #[error("expression error: {0}")]
    Expr(#[from] ExprError),
    #[error("r0 must be nonzero for the eta-Einstein family")]
    ZeroScalarCurvature,
    #[error("{what} vanishes in the sampling domain (|value| = {value:.3e} at {at:?})")]
    Domain { what: String, value: f64, at: Vec<f64> },
    #[error("flatness constraint ∂²A/∂x2² + ∂²B/∂x1² + α2 ∂A/∂x2 + α1 ∂B/∂x1 + σ = 0 violated: residual {residual:.3e} at {at:?}")]
    Constraint { residual: f64, at: Vec<f64> },
    #[error("{0} must depend only on {1}")]
    Dependency(String, String),
    #[error("unknown family `{0}`")]
    Family(String),
    #[error("sigma must be +1 or -1, got {0}")]
    Sigma(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    EtaEinstein,
    ContactPotential,
    GeneralizedEe,
    Flat,
    Example1,
    Dim3,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::EtaEinstein => "eta_einstein",
            Family::ContactPotential => "contact_potential",
            Family::GeneralizedEe => "generalized_ee",
            Family::Flat => "flat",
            Family::Example1 => "example1",
            Family::Dim3 => "dim3",
        }
    }

    pub fn parse(s: &str) -> Result<Family, ModelError> {
        Ok(match s {
            "eta_einstein" => Family::EtaEinstein,
            "contact_potential" => Family::ContactPotential,
            "generalized_ee" => Family::GeneralizedEe,
            "flat" => Family::Flat,
            "example1" => Family::Example1,
            "dim3" => Family::Dim3,
            other => return Err(ModelError::Family(other.to_string())),
        })
    }
}

/// How the structure tensors are specified.
#[derive(Clone, Debug)]
pub enum Presentation {
    /// `theta[i][a] = θ^i(∂_a)`; `signs[i]` gives `θ^i ∘ φ = signs[i] θ^i`;
    /// `g = Σ frame_metric[i][j] θ^i θ^j`; `η = θ⁰` and `ξ` is dual to `θ⁰`.
    Coframe { theta: Vec<Vec<Expr>>, signs: Vec<f64>, frame_metric: Vec<Vec<f64>> },
    /// Coordinate tensors; `phi[a][b]` is the `a`-th component of `φ(∂_b)`.
    Coordinates { g: Vec<Vec<Expr>>, phi: Vec<Vec<Expr>>, xi: Vec<Expr>, eta: Vec<Expr> },
}

/// Symbolic connection forms of a coframe model, as given by its
/// construction; checked against the oracle, never trusted.
#[derive(Clone, Debug)]
pub struct ConnectionForms {
    pub tau1: Form<Expr>,
    pub tau2: Form<Expr>,
    pub omega: Form<Expr>,
}

/// Sampling box and point count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    #[serde(rename = "box", default = "default_box")]
    pub bounds: [f64; 2],
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_box() -> [f64; 2] {
    [-0.9, 0.9]
}
fn default_seed() -> u64 {
    42
}
fn default_points() -> usize {
    100
}

impl Default for Domain {
    fn default() -> Domain {
        Domain { bounds: default_box(), seed: default_seed(), points: default_points() }
    }
}

/// Model configuration file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub family: String,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub domain: Domain,
}

fn default_sigma() -> f64 {
    1.0
}

/// Jets of the structure tensors at one point.
#[derive(Clone, Debug)]
pub struct StructureJets {
    pub point: Vec<f64>,
    pub g: JetMatrix,
    /// `phi[a][b]`: component `a` of `φ(∂_b)`.
    pub phi: JetMatrix,
    pub xi: Vec<Jet>,
    pub eta: Vec<Jet>,
    /// Coframe components `θ^i(∂_a)` for coframe models.
    pub coframe: Option<JetMatrix>,
    /// Dual frame components: column `i` is the vector `e_i` with `θ^j(e_i) = δ`.
    pub dual_frame: Option<JetMatrix>,
}

/// A chart carrying an almost para-contact metric structure.
#[derive(Clone, Debug)]
pub struct ChartModel {
    pub family: Family,
    pub dim: usize,
    pub coords: Vec<&'static str>,
    pub sigma: f64,
    pub presentation: Presentation,
    pub connection: Option<ConnectionForms>,
    /// Functions that must stay away from zero on sampled points.
    pub guards: Vec<(String, Expr)>,
    pub params: Map<String, Value>,
    /// Human-readable description of the instance.
    pub label: String,
}

const EXAMPLE1_NAMES: [&str; 5] = ["z", "u1", "u2", "v1", "v2"];

fn x(i: usize) -> Expr {
    Expr::var(i)
}

fn c(v: f64) -> Expr {
    Expr::constant(v)
}

/// Frame metric of an adopted coframe: `g(ξ,ξ) = g₁₃ = g₂₄ = 1`.
pub fn adopted_frame_metric() -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; 5]; 5];
    m[0][0] = 1.0;
    m[1][3] = 1.0;
    m[3][1] = 1.0;
    m[2][4] = 1.0;
    m[4][2] = 1.0;
    m
}

/// Pullback signs of φ on an adopted coframe `θ^i = g(·, V_i)` whose frame
/// has eigenvalues `(0, −1, +1, +1, −1)`.
pub const COFRAME_SIGNS: [f64; 5] = [0.0, 1.0, -1.0, -1.0, 1.0];

fn one_form(comps: [Expr; 5]) -> Form<Expr> {
    Form::one_form(comps.to_vec())
}

fn check_sigma(s: f64) -> Result<f64, ModelError> {
    if s == 1.0 || s == -1.0 {
        Ok(s)
    } else {
        Err(ModelError::Sigma(s))
    }
}

fn only_on(e: &Expr, allowed: &[usize], name: &str, vars: &str) -> Result<(), ModelError> {
    if (0..5).any(|v| !allowed.contains(&v) && e.depends_on(v)) {
        return Err(ModelError::Dependency(name.into(), vars.into()));
    }
    Ok(())
}

/// Grid used to screen domain conditions at construction time.
fn screening_grid(dim: usize, bounds: [f64; 2]) -> Vec<Vec<f64>> {
    let ticks = [bounds[0], 0.5 * (bounds[0] + bounds[1]), bounds[1]];
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                ticks.iter().map(move |t| {
                    let mut q = p.clone();
                    q.push(*t);
                    q
                })
            })
            .collect();
    }
    out
}

impl ChartModel {
    fn coframe_model(
        family: Family,
        sigma: f64,
        theta: Vec<Vec<Expr>>,
        connection: ConnectionForms,
        params: Map<String, Value>,
        label: String,
    ) -> ChartModel {
        ChartModel {
            family,
            dim: 5,
            coords: NAMES5.to_vec(),
            sigma,
            presentation: Presentation::Coframe {
                theta,
                signs: COFRAME_SIGNS.to_vec(),
                frame_metric: adopted_frame_metric(),
            },
            connection: Some(connection),
            guards: Vec::new(),
            params,
            label,
        }
    }

    /// η-Einstein family with scalar curvature `r0`:
    /// `θ³ = df + u dx¹`, `f = f⁰(x¹) − y¹`, `u = u⁰ − t + (r₀/8)(y¹)²`;
    /// `θ⁴ = dh + v dx²`, `h = h⁰(x²) + y²`, `v = v⁰ − σt + (r₀/8)(y²)²`.
    pub fn eta_einstein(f0: Expr, u0: Expr, h0: Expr, v0: Expr, r0: f64, sigma: f64) -> Result<ChartModel, ModelError> {
        let sigma = check_sigma(sigma)?;
        if r0 == 0.0 {
            return Err(ModelError::ZeroScalarCurvature);
        }
        only_on(&f0, &[1], "f0", "x1")?;
        only_on(&h0, &[2], "h0", "x2")?;
        only_on(&u0, &[1, 2], "u0", "x1, x2")?;
        only_on(&v0, &[1, 2], "v0", "x1, x2")?;
        let u = Expr::sum([u0.clone(), x(0).neg(), x(3).pow(2).scale(r0 / 8.0)]);
        let v = Expr::sum([v0.clone(), x(0).scale(-sigma), x(4).pow(2).scale(r0 / 8.0)]);
        let z = Expr::zero;
        let theta = vec![
            vec![c(1.0), z(), z(), z(), z()],
            vec![z(), c(1.0), z(), z(), z()],
            vec![z(), z(), c(1.0), z(), z()],
            vec![z(), f0.diff(1) + u, z(), c(-1.0), z()],
            vec![z(), z(), h0.diff(2) + v, z(), c(1.0)],
        ];
        let connection = ConnectionForms {
            tau1: one_form([z(), x(3).scale(-r0 / 4.0), z(), z(), z()]),
            tau2: one_form([z(), z(), x(4).scale(r0 / 4.0), z(), z()]),
            omega: one_form([z(), u0.diff(2).neg(), v0.diff(1), z(), z()]),
        };
        let mut params = Map::new();
        for (k, e) in [("f0", &f0), ("u0", &u0), ("h0", &h0), ("v0", &v0)] {
            params.insert(k.into(), e.to_json(&NAMES5));
        }
        params.insert("r0".into(), r0.into());
        let label = format!("eta-Einstein r0 = {r0}, sigma = {sigma}");
        Ok(ChartModel::coframe_model(Family::EtaEinstein, sigma, theta, connection, params, label))
    }

    /// Family with a contact Ricci potential. `u` and `v` are completed from
    /// the free parts so that `∂u/∂y¹ + y¹∂f₁/∂y¹ = 0` and
    /// `∂v/∂y² − y²∂f₂/∂y² = 0`.
    pub fn contact_potential(
        f1: Expr,
        f2: Expr,
        f3: Expr,
        u_free: Expr,
        v_free: Expr,
        sigma: f64,
    ) -> Result<ChartModel, ModelError> {
        let sigma = check_sigma(sigma)?;
        only_on(&f1, &[1, 2, 3], "f1", "x1, x2, y1")?;
        only_on(&f2, &[1, 2, 4], "f2", "x1, x2, y2")?;
        only_on(&f3, &[1, 2], "f3", "x1, x2")?;
        only_on(&u_free, &[1, 2], "u", "x1, x2")?;
        only_on(&v_free, &[1, 2], "v", "x1, x2")?;
        let u = u_free.clone() - f1.moment_integral(3)?;
        let v = v_free.clone() + f2.moment_integral(4)?;
        let mut params = Map::new();
        for (k, e) in [("f1", &f1), ("f2", &f2), ("f3", &f3), ("u", &u_free), ("v", &v_free)] {
            params.insert(k.into(), e.to_json(&NAMES5));
        }
        let label = format!("contact potential, sigma = {sigma}");
        ChartModel::contact_from_parts(Family::ContactPotential, f1, f2, f3, u, v, sigma, params, label)
    }

    #[allow(clippy::too_many_arguments)]
    fn contact_from_parts(
        family: Family,
        f1: Expr,
        f2: Expr,
        f3: Expr,
        u: Expr,
        v: Expr,
        sigma: f64,
        params: Map<String, Value>,
        label: String,
    ) -> Result<ChartModel, ModelError> {
        let z = Expr::zero;
        let f1y = f1.diff(3);
        let f2y = f2.diff(4);
        let theta = vec![
            vec![c(1.0), z(), z(), z(), z()],
            vec![z(), c(1.0), z(), z(), z()],
            vec![z(), z(), c(1.0), z(), z()],
            vec![z(), Expr::sum([u.clone(), x(0).neg(), f1.diff(1)]), f3.clone() + f1.diff(2), f1y.clone(), z()],
            vec![z(), f2.diff(1) - f3.clone(), Expr::sum([v.clone(), x(0).scale(-sigma), f2.diff(2)]), z(), f2y.clone()],
        ];
        let u3 = Expr::sum([u.diff(2).neg(), (x(3) * (f1.diff(2) + f3.clone())).neg()]);
        let v3 = Expr::sum([v.diff(1), (x(4) * (f2.diff(1) - f3.clone())).neg()]);
        let connection = ConnectionForms {
            tau1: one_form([z(), x(3).neg(), z(), z(), z()]),
            tau2: one_form([z(), z(), x(4), z(), z()]),
            omega: one_form([f3.diff(0), f3.diff(1) + u3, f3.diff(2) + v3, f3.diff(3), f3.diff(4)]),
        };
        let mut m = ChartModel::coframe_model(family, sigma, theta, connection, params, label);
        m.guards = vec![("df1/dy1".into(), f1y), ("df2/dy2".into(), f2y)];
        Ok(m)
    }

    /// Generalized η-Einstein specialization:
    /// `f₁ = A₁ + By¹`, `u = C₁ − B(y¹)²/2`, `f₂ = A₂ − By²`, `v = C₂ − B(y²)²/2`.
    pub fn generalized_eta_einstein(a1: Expr, c1: Expr, a2: Expr, c2: Expr, b: Expr, sigma: f64) -> Result<ChartModel, ModelError> {
        let sigma = check_sigma(sigma)?;
        for (name, e) in [("A1", &a1), ("C1", &c1), ("A2", &a2), ("C2", &c2), ("B", &b)] {
            only_on(e, &[1, 2], name, "x1, x2")?;
        }
        let f1 = a1.clone() + b.clone() * x(3);
        let f2 = a2.clone() - b.clone() * x(4);
        let u = c1.clone() - (b.clone() * x(3).pow(2)).scale(0.5);
        let v = c2.clone() - (b.clone() * x(4).pow(2)).scale(0.5);
        let mut params = Map::new();
        for (k, e) in [("A1", &a1), ("C1", &c1), ("A2", &a2), ("C2", &c2), ("B", &b)] {
            params.insert(k.into(), e.to_json(&NAMES5));
        }
        let label = format!("generalized eta-Einstein, sigma = {sigma}");
        let mut m = ChartModel::contact_from_parts(Family::GeneralizedEe, f1, f2, Expr::zero(), u, v, sigma, params, label)?;
        m.guards = vec![("B".into(), b)];
        Ok(m)
    }

    /// Flat family: `θ³ = u dx¹ + dy¹`, `θ⁴ = v dx² + dy²`,
    /// `u = α₁y¹ − t + A`, `v = α₂y² − σt + B`. With `preset_zero_alpha`
    /// the α's are zero and `A = −σ(x²)²/2 + A₀` with `∂²A₀/∂x2² = −∂²B/∂x1²`.
    pub fn flat(alpha1: Expr, alpha2: Expr, a: Expr, b: Expr, sigma: f64, preset_zero_alpha: bool) -> Result<ChartModel, ModelError> {
        let sigma = check_sigma(sigma)?;
        let (alpha1, alpha2, a) = if preset_zero_alpha {
            let bxx = b.diff(1).diff(1);
            let a0 = bxx.double_antiderivative(2)?.neg();
            (Expr::zero(), Expr::zero(), Expr::sum([x(2).pow(2).scale(-sigma / 2.0), a0]))
        } else {
            (alpha1, alpha2, a)
        };
        only_on(&alpha1, &[1], "alpha1", "x1")?;
        only_on(&alpha2, &[2], "alpha2", "x2")?;
        only_on(&a, &[1, 2], "A", "x1, x2")?;
        only_on(&b, &[1, 2], "B", "x1, x2")?;
        let constraint = Expr::sum([
            a.diff(2).diff(2),
            b.diff(1).diff(1),
            alpha2.clone() * a.diff(2),
            alpha1.clone() * b.diff(1),
            c(sigma),
        ]);
        for p in screening_grid(5, default_box()) {
            let r = constraint.eval(&p);
            if r.abs() > 1e-10 {
                return Err(ModelError::Constraint { residual: r, at: p });
            }
        }
        let z = Expr::zero;
        let u = Expr::sum([alpha1.clone() * x(3), x(0).neg(), a.clone()]);
        let v = Expr::sum([alpha2.clone() * x(4), x(0).scale(-sigma), b.clone()]);
        let theta = vec![
            vec![c(1.0), z(), z(), z(), z()],
            vec![z(), c(1.0), z(), z(), z()],
            vec![z(), z(), c(1.0), z(), z()],
            vec![z(), u, z(), c(1.0), z()],
            vec![z(), z(), v, z(), c(1.0)],
        ];
        let connection = ConnectionForms {
            tau1: one_form([z(), alpha1.clone(), z(), z(), z()]),
            tau2: one_form([z(), z(), alpha2.clone(), z(), z()]),
            omega: one_form([z(), a.diff(2).neg(), b.diff(1), z(), z()]),
        };
        let mut params = Map::new();
        for (k, e) in [("alpha1", &alpha1), ("alpha2", &alpha2), ("A", &a), ("B", &b)] {
            params.insert(k.into(), e.to_json(&NAMES5));
        }
        params.insert("mode".into(), "verify".into());
        let label = format!("flat, sigma = {sigma}");
        Ok(ChartModel::coframe_model(Family::Flat, sigma, theta, connection, params, label))
    }

    /// Residual of the flatness constraint at a point.
    pub fn flat_constraint_residual(&self, p: &[f64]) -> Option<f64> {
        if self.family != Family::Flat {
            return None;
        }
        let get = |k: &str| Expr::from_json(&self.params[k]).ok();
        let (a1, a2, a, b) = (get("alpha1")?, get("alpha2")?, get("A")?, get("B")?);
        let e = Expr::sum([a.diff(2).diff(2), b.diff(1).diff(1), a2 * a.diff(2), a1 * b.diff(1), c(self.sigma)]);
        Some(e.eval(p))
    }

    /// The structure on `(z, u₁, u₂, v₁, v₂)` with `g = dz² + 2du₁dv₁ + 2du₂dv₂`.
    pub fn example1() -> ChartModel {
        let (zc, u1, u2, v1, v2) = (0, 1, 2, 3, 4);
        let z = Expr::zero;
        let mut g = vec![vec![z(); 5]; 5];
        g[zc][zc] = c(1.0);
        g[u1][v1] = c(1.0);
        g[v1][u1] = c(1.0);
        g[u2][v2] = c(1.0);
        g[v2][u2] = c(1.0);
        // Columns are the images φ(∂_b).
        let mut phi = vec![vec![z(); 5]; 5];
        phi[v1][zc] = x(u1).scale(2.0);
        phi[v2][zc] = x(u2).scale(-2.0);
        phi[v1][v1] = c(1.0);
        phi[v2][v2] = c(-1.0);
        phi[zc][u1] = x(u1).scale(-2.0);
        phi[u1][u1] = c(-1.0);
        phi[v2][u1] = (x(u1) * x(u2)).scale(4.0);
        phi[zc][u2] = x(u2).scale(2.0);
        phi[u2][u2] = c(1.0);
        phi[v1][u2] = (x(u1) * x(u2)).scale(-4.0);
        let xi = vec![c(1.0), z(), z(), x(u1).scale(-2.0), x(u2).scale(-2.0)];
        let eta = vec![c(1.0), x(u1).scale(-2.0), x(u2).scale(-2.0), z(), z()];
        ChartModel {
            family: Family::Example1,
            dim: 5,
            coords: EXAMPLE1_NAMES.to_vec(),
            sigma: 1.0,
            presentation: Presentation::Coordinates { g, phi, xi, eta },
            connection: None,
            guards: Vec::new(),
            params: Map::new(),
            label: "Example 1".into(),
        }
    }

    /// Explicit adopted frame of Example 1, `(ξ, V₁, …, V₄)`.
    pub fn example1_frame() -> Vec<Vec<Expr>> {
        let s = std::f64::consts::SQRT_2;
        let z = Expr::zero;
        let (u1, u2) = (x(1), x(2));
        vec![
            vec![c(1.0), z(), z(), u1.scale(-2.0), u2.scale(-2.0)],
            vec![z(), z(), z(), z(), c(s)],
            vec![z(), z(), z(), c(s), z()],
            vec![u2.scale(s), z(), c(1.0 / s), z(), u2.pow(2).scale(-s)],
            vec![u1.scale(s), c(1.0 / s), z(), u1.pow(2).scale(-s), z()],
        ]
    }

    /// Three-dimensional family on `(x, y, z)`:
    /// `g_xy = 1`, `g_yy = 2(b − ε₁z)`, `g_zz = 1`, `ξ = ∂_z`, `η = dz`,
    /// `φ∂_x = ε₂∂_x`, `φ∂_y = 2ε₂(b − ε₁z)∂_x − ε₂∂_y`.
    pub fn dim3(b: Expr, eps1: f64, eps2: f64) -> Result<ChartModel, ModelError> {
        check_sigma(eps1)?;
        check_sigma(eps2)?;
        if b.depends_on(2) {
            return Err(ModelError::Dependency("b".into(), "x, y".into()));
        }
        let z = Expr::zero;
        let w = (b.clone() - x(2).scale(eps1)).scale(2.0);
        let g = vec![vec![z(), c(1.0), z()], vec![c(1.0), w.clone(), z()], vec![z(), z(), c(1.0)]];
        let phi = vec![vec![c(eps2), w.scale(eps2), z()], vec![z(), c(-eps2), z()], vec![z(), z(), z()]];
        let xi = vec![z(), z(), c(1.0)];
        let eta = vec![z(), z(), c(1.0)];
        let mut params = Map::new();
        params.insert("b".into(), b.to_json(&NAMES3));
        params.insert("eps1".into(), eps1.into());
        params.insert("eps2".into(), eps2.into());
        Ok(ChartModel {
            family: Family::Dim3,
            dim: 3,
            coords: NAMES3.to_vec(),
            sigma: 1.0,
            presentation: Presentation::Coordinates { g, phi, xi, eta },
            connection: None,
            guards: Vec::new(),
            params,
            label: format!("dim3 b = {}", b.render(&NAMES3)),
        })
    }

    /// Builds a model from a configuration.
    pub fn from_config(cfg: &ModelConfig) -> Result<ChartModel, ModelError> {
        let family = Family::parse(&cfg.family)?;
        let p = &cfg.params;
        let expr = |k: &str| -> Result<Expr, ModelError> {
            match p.get(k) {
                None => Ok(Expr::zero()),
                Some(v) => Expr::from_json(v).map_err(|e| ModelError::Param(k.into(), e.to_string())),
            }
        };
        let num = |k: &str, default: Option<f64>| -> Result<f64, ModelError> {
            match p.get(k) {
                Some(v) => v.as_f64().ok_or_else(|| ModelError::Param(k.into(), "expected a number".into())),
                None => default.ok_or_else(|| ModelError::Param(k.into(), "missing".into())),
            }
        };
        let mut m = match family {
            Family::EtaEinstein => {
                ChartModel::eta_einstein(expr("f0")?, expr("u0")?, expr("h0")?, expr("v0")?, num("r0", None)?, cfg.sigma)?
            }
            Family::ContactPotential => {
                let f1 = if p.contains_key("f1") { expr("f1")? } else { x(3) };
                let f2 = if p.contains_key("f2") { expr("f2")? } else { x(4) };
                ChartModel::contact_potential(f1, f2, expr("f3")?, expr("u")?, expr("v")?, cfg.sigma)?
            }
            Family::GeneralizedEe => {
                let b = if p.contains_key("B") { expr("B")? } else { c(1.0) };
                ChartModel::generalized_eta_einstein(expr("A1")?, expr("C1")?, expr("A2")?, expr("C2")?, b, cfg.sigma)?
            }
            Family::Flat => {
                let preset = match p.get("mode").and_then(Value::as_str) {
                    None | Some("verify") => false,
                    Some("preset-zero-alpha") => true,
                    Some(other) => return Err(ModelError::Param("mode".into(), format!("unknown mode `{other}`"))),
                };
                ChartModel::flat(expr("alpha1")?, expr("alpha2")?, expr("A")?, expr("B")?, cfg.sigma, preset)?
            }
            Family::Example1 => ChartModel::example1(),
            Family::Dim3 => ChartModel::dim3(expr("b")?, num("eps1", Some(1.0))?, num("eps2", Some(1.0))?)?,
        };
        m.check_guards(cfg.domain.bounds)?;
        Ok(m)
    }

    /// Configuration reproducing this model.
    pub fn to_config(&self, domain: Domain) -> ModelConfig {
        ModelConfig { family: self.family.tag().into(), sigma: self.sigma, params: self.params.clone(), domain }
    }

    /// Rejects domains on which a guard function has a zero.
    pub fn check_guards(&mut self, bounds: [f64; 2]) -> Result<(), ModelError> {
        for (name, e) in &self.guards {
            let grid = screening_grid(self.dim, bounds);
            let first = e.eval(&grid[0]);
            for p in &grid {
                let v = e.eval(p);
                if v.abs() < 1e-3 || v.signum() != first.signum() {
                    return Err(ModelError::Domain { what: name.clone(), value: v.abs(), at: p.clone() });
                }
            }
        }
        Ok(())
    }

    /// Seeded uniform sample of the box, rejecting points within `1e−3` of a
    /// guard's zero set.
    pub fn sample_points(&self, count: usize, seed: u64, bounds: [f64; 2]) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let p: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(bounds[0]..bounds[1])).collect();
            if self.guards.iter().all(|(_, e)| e.eval(&p).abs() >= 1e-3) {
                out.push(p);
            }
        }
        out
    }

    /// Structure tensor jets of the given order at `p`.
    pub fn structure_jets(&self, p: &[f64], order: usize) -> Result<StructureJets, ModelError> {
        let n = self.dim;
        let lift = |e: &Expr| e.jet(p, order);
        match &self.presentation {
            Presentation::Coordinates { g, phi, xi, eta } => {
                let gj = lift_matrix(g, p, order)?;
                let pj = lift_matrix(phi, p, order)?;
                Ok(StructureJets {
                    point: p.to_vec(),
                    g: gj,
                    phi: pj,
                    xi: xi.iter().map(lift).collect::<Result<_, _>>()?,
                    eta: eta.iter().map(lift).collect::<Result<_, _>>()?,
                    coframe: None,
                    dual_frame: None,
                })
            }
            Presentation::Coframe { theta, signs, frame_metric } => {
                let t = lift_matrix(theta, p, order)?;
                let tinv = t.inverse().ok_or_else(|| ModelError::Domain {
                    what: "coframe determinant".into(),
                    value: 0.0,
                    at: p.to_vec(),
                })?;
                let g = JetMatrix::from_fn(n, |a, b| {
                    let mut acc = Jet::zero(n, order);
                    for i in 0..n {
                        for j in 0..n {
                            if frame_metric[i][j] != 0.0 {
                                acc += &(t.get(i, a) * t.get(j, b)).scale(frame_metric[i][j]);
                            }
                        }
                    }
                    acc
                });
                let phi = JetMatrix::from_fn(n, |a, b| {
                    let mut acc = Jet::zero(n, order);
                    for i in 0..n {
                        if signs[i] != 0.0 {
                            acc += &(tinv.get(a, i) * t.get(i, b)).scale(signs[i]);
                        }
                    }
                    acc
                });
                let xi = (0..n).map(|a| tinv.get(a, 0).clone()).collect();
                let eta = (0..n).map(|a| t.get(0, a).clone()).collect();
                Ok(StructureJets { point: p.to_vec(), g, phi, xi, eta, coframe: Some(t), dual_frame: Some(tinv) })
            }
        }
    }

    /// The fundamental form `Φ(X, Y) = g(φX, Y)` as jets.
    pub fn fundamental_form(s: &StructureJets) -> Form<Jet> {
        let n = s.g.n;
        let m: Vec<Vec<Jet>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let mut acc = Jet::zero(n, s.g.get(0, 0).order());
                        for cc in 0..n {
                            acc += &(s.phi.get(cc, a) * s.g.get(cc, b));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Form::two_form(&m)
    }
}

fn lift_matrix(m: &[Vec<Expr>], p: &[f64], order: usize) -> Result<JetMatrix, ExprError> {
    let n = m.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in m {
        for e in row {
            entries.push(e.jet(p, order)?);
        }
    }
    Ok(JetMatrix { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contact_potential_completion() {
        let m = ChartModel::contact_potential(x(3), x(4), Expr::zero(), Expr::zero(), Expr::zero(), 1.0).unwrap();
        let Presentation::Coframe { theta, .. } = &m.presentation else { panic!() };
        // θ³(∂x1) = u − t with u = −(y¹)²/2.
        let p = [0.3, 0.1, -0.2, 0.5, 0.7];
        assert!((theta[3][1].eval(&p) - (-0.125 - 0.3)).abs() < 1e-15);
        assert!((theta[4][2].eval(&p) - (0.245 - 0.3)).abs() < 1e-15);
    }

    #[test]
    fn negative_flat_control_is_rejected() {
        let r = ChartModel::flat(Expr::zero(), Expr::zero(), Expr::zero(), Expr::zero(), 1.0, false);
        assert!(matches!(r, Err(ModelError::Constraint { .. })));
    }

    #[test]
    fn zero_r0_is_rejected() {
        let z = Expr::zero;
        assert!(matches!(ChartModel::eta_einstein(z(), z(), z(), z(), 0.0, 1.0), Err(ModelError::ZeroScalarCurvature)));
    }

    #[test]
    fn vanishing_derivative_guard() {
        let cfg: ModelConfig = serde_json::from_value(serde_json::json!({
            "family": "contact_potential",
            "params": {"f1": {"op": "pow", "args": [{"op": "var", "name": "y1"}], "exp": 2}}
        }))
        .unwrap();
        assert!(matches!(ChartModel::from_config(&cfg), Err(ModelError::Domain { .. })));
    }

    #[test]
    fn coframe_structure_axioms_at_a_point() {
        let m = ChartModel::eta_einstein(Expr::zero(), Expr::zero(), Expr::zero(), Expr::zero(), 4.0, 1.0).unwrap();
        let s = m.structure_jets(&[0.1, 0.2, -0.3, 0.4, 0.5], 2).unwrap();
        let xi: Vec<f64> = s.xi.iter().map(Jet::value).collect();
        let eta: Vec<f64> = s.eta.iter().map(Jet::value).collect();
        let dot: f64 = xi.iter().zip(&eta).map(|(a, b)| a * b).sum();
        assert!((dot - 1.0).abs() < 1e-15);
    }
}
