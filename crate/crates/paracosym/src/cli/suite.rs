//! The default verification suite run by `verify`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::report::{CheckReport, Environment, ModelDescriptor, Suite};
use crate::fields::{Expr, Form};
use crate::frame::{
    cartan_consequences, cartan_residuals, claimed_forms_residual, connection_matrix, connection_skew_residual,
    extract_coeffs, frame_from_coframe, frame_from_model, gauge_action_matrix, gauge_relations, gauge_transform,
    invariants, isotropic_duals_closed, reconstruct_curvature, ricci_from_coeffs, ricci_potential_check,
    weyl_frame_components, CurvatureCoeffs, FrameState,
};
use crate::jets::JetMatrix;
use crate::lie::isotropy::{example1_field, isotropy_algebra_s, isotropy_generator, killing_at};
use crate::models::{ChartModel, Family, StructureJets};
use crate::pac::{
    cross_pair_sliding, eta_einstein_residual, max_abs, pk_leaves, poly_from_roots, prop1_identities, ricci_char_poly, ricci_form_check,
    Kind, PacError, PointGeometry,
};
use crate::riemann::idx;

/// Tolerance of the structure axioms and closedness checks.
pub const AXIOM_TOL: f64 = 1e-10;
/// Tolerance of the frame/oracle comparisons.
pub const FRAME_TOL: f64 = 1e-7;
/// Tolerance of the flatness checks.
pub const FLAT_TOL: f64 = 1e-9;
/// Frame-change checks run at this many points.
pub const GAUGE_POINTS: usize = 10;
/// Lie-derivative checks run at this many points.
pub const KILLING_POINTS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub order: usize,
    pub bounds: [f64; 2],
    pub normalize_xi: bool,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions { points: 100, seed: 42, tol: 1e-8, order: 3, bounds: [-0.9, 0.9], normalize_xi: false }
    }
}

/// The deformation `ξ → −ξ`, `η → −η` applied to structure jets.
pub fn flip_xi(s: &mut StructureJets) {
    s.xi.iter_mut().for_each(|j| *j = -j.clone());
    s.eta.iter_mut().for_each(|j| *j = -j.clone());
    if let Some(t) = &s.coframe {
        s.coframe = Some(JetMatrix::from_fn(t.n, |i, a| if i == 0 { -t.get(i, a).clone() } else { t.get(i, a).clone() }));
    }
    if let Some(d) = &s.dual_frame {
        s.dual_frame = Some(JetMatrix::from_fn(d.n, |a, i| if i == 0 { -d.get(a, i).clone() } else { d.get(a, i).clone() }));
    }
}

/// Point geometry, optionally reoriented so that `A` has `ε = +1`.
/// Returns whether the orientation was flipped.
pub fn point_geometry(model: &ChartModel, p: &[f64], order: usize, normalize_xi: bool) -> Result<(PointGeometry, bool), PacError> {
    let jets = model.structure_jets(p, order)?;
    if !normalize_xi {
        return Ok((PointGeometry::from_jets(jets)?, false));
    }
    let geo = PointGeometry::from_jets(jets.clone())?;
    match geo.classify(1e-8) {
        Ok(c) if c.epsilon < 0.0 => {
            let mut jets = jets;
            flip_xi(&mut jets);
            Ok((PointGeometry::from_jets(jets)?, true))
        }
        _ => Ok((geo, false)),
    }
}

fn param_expr(model: &ChartModel, key: &str) -> Option<Expr> {
    model.params.get(key).and_then(|v| Expr::from_json(v).ok())
}

fn param_num(model: &ChartModel, key: &str) -> Option<f64> {
    model.params.get(key).and_then(Value::as_f64)
}

/// Gauge function used at the `k`-th gauge point.
pub fn gauge_function(seed: u64, k: usize) -> Expr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(k as u64));
    let mut c = || rng.gen_range(-1.0..1.0);
    let x = Expr::var;
    Expr::sum([Expr::constant(c()), x(1).scale(c()), (x(2) * x(3)).scale(c()), x(0).sin().scale(c())])
}

fn sym_chart(n: usize, i: usize, j: usize, w: f64) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    m[i * n + j] += w / 2.0;
    m[j * n + i] += w / 2.0;
    m
}

fn coeff_diff(a: &CurvatureCoeffs, b: &CurvatureCoeffs) -> f64 {
    [a.a1 - b.a1, a.a2 - b.a2, a.b1 - b.b1, a.b2 - b.b2, a.gamma - b.gamma].into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Extremes {
    min: f64,
    max: f64,
}

impl Extremes {
    fn new() -> Extremes {
        Extremes { min: f64::INFINITY, max: f64::NEG_INFINITY }
    }
    fn push(&mut self, x: f64) {
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }
    fn json(&self) -> Value {
        if self.min > self.max {
            Value::Null
        } else {
            json!([self.min, self.max])
        }
    }
}

/// Running state for findings.
struct Observed {
    kinds: BTreeMap<&'static str, usize>,
    flips: usize,
    sliding: f64,
    c12_fit: f64,
    c12_alt: f64,
    i1_alt_drift: f64,
    contact: Extremes,
    scalar: Extremes,
}

pub fn verify(model: &ChartModel, opts: &VerifyOptions) -> CheckReport {
    let mut suite = Suite::default();
    let mut obs = Observed {
        kinds: BTreeMap::new(),
        flips: 0,
        sliding: 0.0,
        c12_fit: 0.0,
        c12_alt: 0.0,
        i1_alt_drift: 0.0,
        contact: Extremes::new(),
        scalar: Extremes::new(),
    };
    let points = model.sample_points(opts.points, opts.seed, opts.bounds);
    symbolic_checks(model, &mut suite);
    let s_fields = if model.family == Family::Example1 {
        isotropy_algebra_s().ok().map(|s| s.fields.iter().map(example1_field).collect::<Vec<_>>())
    } else {
        None
    };
    let generator = if model.family == Family::Flat { isotropy_generator(model).ok() } else { None };
    for (k, p) in points.iter().enumerate() {
        let (geo, flipped) = match point_geometry(model, p, opts.order, opts.normalize_xi) {
            Ok(g) => g,
            Err(e) => {
                suite.error(format!("point {k} {p:?}: {e}"));
                continue;
            }
        };
        obs.flips += flipped as usize;
        obs.scalar.push(geo.curvature.scalar.value());
        structure_checks(&geo, opts, &mut suite, &mut obs);
        if model.dim == 5 {
            frame_checks(model, &geo, k, p, opts, &mut suite, &mut obs);
        }
        family_checks(model, &geo, p, opts, &mut suite);
        if k < KILLING_POINTS {
            let anchor = "infinitesimal automorphisms";
            if let Some(fields) = &s_fields {
                for (i, f) in fields.iter().enumerate() {
                    let r = killing_at(model, f, p).map(|r| r.max()).unwrap_or(f64::INFINITY);
                    suite.add(&format!("K̃{} preserves (g, φ, ξ, η)", i + 1), anchor, FLAT_TOL, r);
                }
            }
            if let Some(f) = &generator {
                let r = killing_at(model, f, p).map(|r| r.max()).unwrap_or(f64::INFINITY);
                suite.add("isotropy generator preserves (g, φ, ξ, η)", anchor, FLAT_TOL, r);
                if k == 0 {
                    suite.add("isotropy generator vanishes at the origin", anchor, FLAT_TOL, max_abs(f.iter().map(|e| e.eval(&[0.0; 5]))));
                }
            }
        }
    }
    findings(model, opts, &mut suite, &obs);
    let descriptor = ModelDescriptor {
        family: model.family.tag().into(),
        label: model.label.clone(),
        dim: model.dim,
        sigma: model.sigma,
        params: model.params.clone(),
    };
    let env = Environment {
        seed: opts.seed,
        bounds: opts.bounds,
        points: opts.points,
        jet_order: opts.order,
        tolerance: opts.tol,
        normalize_xi: opts.normalize_xi,
    };
    suite.finish(descriptor, env)
}

/// Checks on the symbolic construction data, run once.
fn symbolic_checks(model: &ChartModel, suite: &mut Suite) {
    if !matches!(model.family, Family::ContactPotential | Family::GeneralizedEe) {
        return;
    }
    let Some(forms) = &model.connection else { return };
    let x = Expr::var;
    let dt = Form::one_form(vec![Expr::one(), Expr::zero(), Expr::zero(), Expr::zero(), Expr::zero()]);
    let pot = dt.sub(&forms.tau1).add(&forms.tau2);
    let want = Form::one_form(vec![Expr::one(), x(3), x(4), Expr::zero(), Expr::zero()]);
    let diff = pot.sub(&want);
    let r = diff
        .comps
        .values()
        .map(|e| e.to_poly().map(|p| p.max_abs()).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    // Exact polynomial identity: only an exactly vanishing difference passes.
    suite.add("η − τ₁ + τ₂ = dt + y¹dx¹ + y²dx² (symbolic)", "contact Ricci potential", 0.0, r);
}

fn structure_checks(geo: &PointGeometry, opts: &VerifyOptions, suite: &mut Suite, obs: &mut Observed) {
    let ax = geo.structure.axiom_residuals();
    let a = "structure axioms";
    suite.add("φ² = Id − η⊗ξ", a, AXIOM_TOL, ax.phi_squared);
    suite.add("η(ξ) = 1", a, AXIOM_TOL, ax.eta_xi);
    suite.add("g(φX, φY) = −g(X, Y) + η(X)η(Y)", a, AXIOM_TOL, ax.metric);
    suite.add("η = g(·, ξ)", a, AXIOM_TOL, ax.eta_dual);
    let (de, dphi) = geo.closedness();
    suite.add("dη = 0", a, AXIOM_TOL, de);
    suite.add("dΦ = 0", a, AXIOM_TOL, dphi);
    for (name, r) in prop1_identities(geo) {
        suite.add(&name, "curvature identities", opts.tol, r);
    }
    for (name, r) in pk_leaves(geo) {
        suite.add(&name, "para-Kähler leaves", opts.tol, r);
    }
    if geo.order >= 3 {
        if let Ok((anti, drho, _)) = ricci_form_check(geo) {
            suite.add("ρ(X, Y) = Ric(φX, Y) is skew", "Ricci form", opts.tol, anti);
            suite.add("dρ = 0", "Ricci form", opts.tol, drho);
        }
    }
    obs.sliding = obs.sliding.max(cross_pair_sliding(geo));
    match geo.classify(1e-8) {
        Ok(c) => *obs.kinds.entry(c.kind.name()).or_default() += 1,
        Err(_) => *obs.kinds.entry("unclassified").or_default() += 1,
    }
}

#[allow(clippy::too_many_arguments)]
fn frame_checks(
    model: &ChartModel,
    geo: &PointGeometry,
    k: usize,
    p: &[f64],
    opts: &VerifyOptions,
    suite: &mut Suite,
    obs: &mut Observed,
) {
    let rank2 = geo.classify(1e-8).map(|c| c.rank == 2).unwrap_or(false);
    if !rank2 {
        return;
    }
    let fs = match frame_from_model(geo, 1e-8) {
        Ok(fs) => {
            suite.add("adopted frame from the isotropic vectors of A", "adopted frame", opts.tol, 0.0);
            fs
        }
        Err(e) => {
            suite.add("adopted frame from the isotropic vectors of A", "adopted frame", opts.tol, f64::INFINITY);
            suite.error(format!("frame at {p:?}: {e}"));
            return;
        }
    };
    generic_frame_checks(geo, &fs, opts, suite, obs);
    // The construction's own frame, for coframe models.
    if let (Some(claimed), Some(cf)) = (&model.connection, frame_from_coframe(geo, model.sigma)) {
        let [t1, t2, om] = claimed_forms_residual(&cf, claimed, p);
        let a = "construction";
        suite.add("construction τ₁ matches the coframe connection", a, opts.tol, t1);
        suite.add("construction τ₂ matches the coframe connection", a, opts.tol, t2);
        suite.add("construction ω matches the coframe connection", a, opts.tol, om);
        let [closed, eqs] = cartan_residuals(&cf);
        suite.add("construction coframe: dθ⁰ = dθ¹ = dθ² = 0", a, opts.tol, closed);
        suite.add("construction coframe: dθ³, dθ⁴ structure equations", a, opts.tol, eqs);
        coframe_family_checks(model, geo, &cf, p, opts, suite);
    }
    if k < GAUGE_POINTS {
        gauge_checks(geo, &fs, &gauge_function(opts.seed, k), opts, suite, obs);
    }
}

fn generic_frame_checks(geo: &PointGeometry, fs: &FrameState, opts: &VerifyOptions, suite: &mut Suite, obs: &mut Observed) {
    let a = "adopted frame";
    for (name, r) in fs.invariant_residuals(geo) {
        suite.add(&format!("frame: {name}"), a, opts.tol, r);
    }
    suite.add("frame: connection matrix is g-skew", a, opts.tol, connection_skew_residual(&connection_matrix(fs)));
    let (_, _, prop) = fs.alpha_fns();
    suite.add("τ₁ ∝ θ¹, τ₂ ∝ θ²", "connection forms", opts.tol, prop);
    suite.add("dθ¹ = dθ² = 0", "connection forms", opts.tol, isotropic_duals_closed(fs));
    let [closed, eqs] = cartan_residuals(fs);
    let s = "structure equations";
    suite.add("dθ⁰ = dθ¹ = dθ² = 0 (frame)", s, opts.tol, closed);
    suite.add("dθ³, dθ⁴ structure equations", s, opts.tol, eqs);
    suite.add("θ¹∧dθ³ = θ²∧dθ⁴ = 0", s, opts.tol, cartan_consequences(fs));

    let ex = extract_coeffs(fs);
    let c = ex.coeffs;
    let cc = "curvature coefficients";
    suite.add("dτ₁, dτ₂, Dω on their coefficient pattern", cc, opts.tol, ex.residual);
    suite.add("coefficient Bianchi relations", cc, opts.tol, ex.bianchi);
    let rec = reconstruct_curvature(geo, fs, &c);
    let rc = "curvature reconstruction";
    suite.add("R from τ₁, τ₂, Dω equals the oracle", rc, FRAME_TOL, rec.forms_residual);
    suite.add("R from (a1, a2, b1, b2, γ) equals the oracle", rc, FRAME_TOL, rec.coeffs_residual);
    suite.add("R supported on the five Θ products", rc, FRAME_TOL, rec.off_support);
    suite.add("σΘ¹²⊗Θ¹² = g(AX,Z)g(AY,W) − g(AX,W)g(AY,Z)", rc, FRAME_TOL, rec.aa_identity);
    obs.c12_fit = obs.c12_fit.max((rec.fitted_c12 - (c.sigma + c.gamma)).abs());
    obs.c12_alt = obs.c12_alt.max((rec.fitted_c12 - (c.sigma + 2.0 * c.gamma)).abs());
    let (ric, r) = ricci_from_coeffs(fs, &c);
    let oracle = geo.curvature.ricci_values();
    suite.add("Ric from coefficients equals the oracle", rc, FRAME_TOL, max_abs(ric.iter().zip(&oracle).map(|(x, y)| x - y)));
    suite.add("r = −2(a2 + b2)", rc, FRAME_TOL, (r - geo.curvature.scalar.value()).abs());
    let pot = ricci_potential_check(geo, fs);
    suite.add("ρ = d(−τ₁ + τ₂)", "Ricci form", FRAME_TOL, pot.residual);
    obs.contact.push(pot.contact);

    let w = weyl_frame_components(geo, fs, &c);
    let wa = "Weyl tensor";
    suite.add("Weyl tensor from coefficients equals the oracle", wa, FRAME_TOL, w.decomposition_residual);
    for (label, got, want) in &w.labeled {
        suite.add(&format!("Weyl {label} component"), wa, FRAME_TOL, (got - want).abs());
    }
    let implied = if w.commutator < 1e-9 { w.ricci_norm } else { 0.0 };
    suite.add("[C, φ] = 0 implies Ric = 0", wa, opts.tol, implied);
}

fn gauge_checks(geo: &PointGeometry, fs: &FrameState, alpha: &Expr, opts: &VerifyOptions, suite: &mut Suite, obs: &mut Observed) {
    let a = "gauge";
    let after = match gauge_transform(geo, fs, alpha) {
        Ok(f) => f,
        Err(e) => {
            suite.add("gauge transform", a, opts.tol, f64::INFINITY);
            suite.error(format!("gauge at {:?}: {e}", geo.jets.point));
            return;
        }
    };
    let inv = after.invariant_residuals(geo).into_iter().map(|(_, r)| r).fold(0.0, f64::max);
    suite.add("gauged frame is adopted", a, opts.tol, inv);
    match gauge_relations(geo, fs, &after, alpha) {
        Ok([tau, om, dw]) => {
            suite.add("τᵢ' = τᵢ", a, opts.tol, tau);
            suite.add("ω' = ω + α(τ₁ + τ₂) + dα", a, opts.tol, om);
            suite.add("Dω' = Dω + α(dτ₁ + dτ₂)", a, opts.tol, dw);
        }
        Err(e) => {
            suite.add("τᵢ' = τᵢ", a, opts.tol, f64::INFINITY);
            suite.error(format!("gauge relations: {e}"));
        }
    }
    let c0 = extract_coeffs(fs).coeffs;
    let c1 = extract_coeffs(&after).coeffs;
    let av = alpha.eval(&geo.jets.point);
    suite.add("coefficients follow the gauge action", a, opts.tol, coeff_diff(&c1, &gauge_action_matrix(&c0, av)));
    let (i0, i1) = (invariants(&c0), invariants(&c1));
    suite.add("I₁, I₂, det R̄ gauge invariant", a, opts.tol, (i0.i1 - i1.i1).abs().max((i0.i2 - i1.i2).abs()).max((i0.det - i1.det).abs()));
    obs.i1_alt_drift = obs.i1_alt_drift.max((i0.i1_alt - i1.i1_alt).abs());
}

/// Claims about the coefficients in the construction frame.
fn coframe_family_checks(model: &ChartModel, geo: &PointGeometry, cf: &FrameState, p: &[f64], opts: &VerifyOptions, suite: &mut Suite) {
    let c = extract_coeffs(cf).coeffs;
    match model.family {
        Family::EtaEinstein => {
            let r0 = param_num(model, "r0").unwrap_or(f64::NAN);
            let r = [c.a1, c.b1, c.a2 + r0 / 4.0, c.b2 + r0 / 4.0].into_iter().fold(0.0f64, |m, x: f64| m.max(x.abs()));
            suite.add("construction frame: a1 = b1 = 0, a2 = b2 = −r₀/4", "η-Einstein family", opts.tol, r);
        }
        Family::ContactPotential | Family::GeneralizedEe => {
            let (f1y, f2y) = contact_derivatives(model, p);
            let a = "contact Ricci potential";
            suite.add("a2 = (∂f₁/∂y¹)⁻¹", a, opts.tol, (c.a2 - 1.0 / f1y).abs());
            suite.add("b2 = −(∂f₂/∂y²)⁻¹", a, opts.tol, (c.b2 + 1.0 / f2y).abs());
            let want = poly_from_roots(&[0.0, -c.a2, -c.a2, -c.b2, -c.b2]);
            let got = ricci_char_poly(geo);
            suite.add("Ricci operator spectrum {0, −a2, −a2, −b2, −b2}", a, opts.tol, max_abs(got.iter().zip(&want).map(|(x, y)| x - y)));
        }
        _ => {}
    }
}

/// `(∂f₁/∂y¹, ∂f₂/∂y²)` at `p` for the contact families.
fn contact_derivatives(model: &ChartModel, p: &[f64]) -> (f64, f64) {
    if model.family == Family::GeneralizedEe {
        let b = param_expr(model, "B").map(|e| e.eval(p)).unwrap_or(f64::NAN);
        return (b, -b);
    }
    let f1 = param_expr(model, "f1").unwrap_or_else(|| Expr::var(3));
    let f2 = param_expr(model, "f2").unwrap_or_else(|| Expr::var(4));
    (f1.diff(3).eval(p), f2.diff(4).eval(p))
}

fn family_checks(model: &ChartModel, geo: &PointGeometry, p: &[f64], opts: &VerifyOptions, suite: &mut Suite) {
    let n = geo.n();
    let r = geo.curvature.scalar.value();
    match model.family {
        Family::EtaEinstein => {
            let r0 = param_num(model, "r0").unwrap_or(f64::NAN);
            let a = "η-Einstein family";
            suite.add("Ric = (r₀/4)(g − η⊗η)", a, opts.tol, eta_einstein_residual(geo, r0));
            suite.add("r = r₀", a, opts.tol, (r - r0).abs());
            suite.add("dr = 0", a, opts.tol, max_abs(geo.curvature.scalar_gradient()));
        }
        Family::ContactPotential | Family::GeneralizedEe => {
            let a = "contact Ricci potential";
            if let Ok(fs) = frame_from_model(geo, 1e-8) {
                let pot = ricci_potential_check(geo, &fs).potential;
                let want = Form::one_form(vec![1.0, p[3], p[4], 0.0, 0.0]);
                suite.add("η − τ₁ + τ₂ = dt + y¹dx¹ + y²dx² (numeric)", a, opts.tol, pot.sub(&want).max_abs());
            }
            let (f1y, f2y) = contact_derivatives(model, p);
            suite.add("r = 2(f₁_y − f₂_y)/(f₁_y f₂_y)", a, opts.tol, (r - 2.0 * (f1y - f2y) / (f1y * f2y)).abs());
            if model.family == Family::GeneralizedEe {
                let b = f1y;
                let g = "generalized η-Einstein family";
                suite.add("r = −4/B", g, opts.tol, (r + 4.0 / b).abs());
                let e = |k: &str| param_expr(model, k).unwrap_or_else(Expr::zero);
                let x = Expr::var;
                let f1 = e("A1") + e("B") * x(3);
                let f2 = e("A2") - e("B") * x(4);
                let w = 2.0 / b * (f1.diff(2).eval(p) + f2.diff(1).eval(p));
                let expect = sym_chart(n, 1, 2, w);
                let ric = geo.curvature.ricci_values();
                let s = &geo.structure;
                let res = max_abs((0..n * n).map(|f| {
                    let (i, j) = (f / n, f % n);
                    ric[f] - r / 4.0 * (s.g[i][j] - s.eta[i] * s.eta[j]) - expect[f]
                }));
                suite.add("Ric − (r/4)(g − η⊗η) = (2/B)(f₁_x² + f₂_x¹) dx¹⊙dx²", g, opts.tol, res);
            }
        }
        Family::Flat | Family::Example1 => {
            let a = "flat models";
            suite.add("R = 0", a, FLAT_TOL, geo.curvature.max_abs_riemann());
            if let Some(res) = model.flat_constraint_residual(p) {
                suite.add("flatness constraint on A, B", a, AXIOM_TOL, res.abs());
            }
            if model.family == Family::Example1 {
                let av = geo.a_values();
                let res = max_abs((0..5).flat_map(|i| (0..5).map(move |j| (i, j))).map(|(i, j)| {
                    let want = if (i, j) == (3, 1) || (i, j) == (4, 2) { 2.0 } else { 0.0 };
                    av[i][j] - want
                }));
                suite.add("A = 2du₁⊗∂v₁ + 2du₂⊗∂v₂", a, AXIOM_TOL, res);
                let elliptic = geo.classify(1e-8).map(|c| c.kind == Kind::Elliptic).unwrap_or(false);
                suite.add("A is elliptic", a, 0.5, if elliptic { 0.0 } else { 1.0 });
            }
        }
        Family::Dim3 => {
            let a = "three-dimensional family";
            let b = param_expr(model, "b").unwrap_or_else(Expr::zero);
            let bxx = b.diff(0).diff(0).eval(p);
            suite.add("r = 2∂²b/∂x²", a, FLAT_TOL, (r - 2.0 * bxx).abs());
            let op = geo.curvature_operator();
            let s = &geo.structure;
            let big_phi = |x: usize, y: usize| (0..n).map(|c| s.phi[c][x] * s.g[c][y]).sum::<f64>();
            let mut worst = 0.0f64;
            for i in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            let want = r / 2.0 * big_phi(x, y) * s.phi[i][z];
                            worst = worst.max((op[idx(n, &[i, x, y, z])] - want).abs());
                        }
                    }
                }
            }
            suite.add("R(X, Y) = (r/2)Φ(X, Y)φ", a, opts.tol, worst);
            suite.add("Ric = (r/2)(g − η⊗η)", a, opts.tol, eta_einstein_residual(geo, r));
        }
    }
}

fn findings(model: &ChartModel, opts: &VerifyOptions, suite: &mut Suite, obs: &Observed) {
    let kinds: serde_json::Map<String, Value> = obs.kinds.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    suite.finding("types of A", Value::Object(kinds), "pointwise classification counts");
    if opts.normalize_xi {
        suite.finding("orientation flips", json!(obs.flips), "points where ξ → −ξ was applied");
    }
    suite.finding("scalar curvature range", obs.scalar.json(), "[min, max] of the oracle r");
    suite.finding(
        "cross-pair φ sliding",
        json!(obs.sliding),
        "max |R(φX,Y,Z,W) − R(X,Y,φZ,W)| / |R|; not a curvature identity",
    );
    if model.dim == 5 && obs.kinds.get("elliptic").or(obs.kinds.get("hyperbolic")).is_some() {
        suite.finding("Θ¹²⊗Θ¹² coefficient vs σ + γ", json!(obs.c12_fit), "max deviation of the oracle fit");
        suite.finding("Θ¹²⊗Θ¹² coefficient vs σ + 2γ", json!(obs.c12_alt), "max deviation of the oracle fit");
        suite.finding("I₁ with s = σ + 2γ under frame change", json!(obs.i1_alt_drift), "max drift; not an invariant");
        if matches!(model.family, Family::ContactPotential | Family::GeneralizedEe) {
            suite.finding("|η∧ρ∧ρ| range", obs.contact.json(), "contact condition on the Ricci potential");
        }
    }
}
