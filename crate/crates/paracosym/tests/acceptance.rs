//! Acceptance run. Each criterion prints one pass/fail line; the process
//! exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use paracosym::cli::load_config;
use paracosym::fields::{Expr, Form};
use paracosym::frame::{
    curvature_matrix, extract_coeffs, frame_from_coframe, frame_from_model, gauge_action_matrix, gauge_relations,
    gauge_transform, invariants, reconstruct_curvature, ricci_from_coeffs, ricci_potential_check, weyl_frame_components,
    CurvatureCoeffs,
};
use paracosym::jets::JetMatrix;
use paracosym::lie::isotropy::{example1_field, isotropy_algebra_s, killing_residuals, AffineField};
use paracosym::lie::koszul::koszul;
use paracosym::lie::{classify_algebra, example1_algebra, family_algebra, q, q_f64, qi, Algebra, Classification, Family as LieFamily, FamilyParams, Q};
use paracosym::models::{ChartModel, Family, ModelConfig};
use paracosym::pac::{max_abs, pk_leaves, poly_from_roots, prop1_identities, ricci_char_poly, ricci_form_check, PointGeometry};
use paracosym::riemann::{idx, Curvature};

struct Outcome {
    pass: bool,
    detail: String,
}

/// Collects named conditions into one outcome.
#[derive(Default)]
struct Conditions {
    parts: Vec<(String, bool)>,
}

impl Conditions {
    fn below(&mut self, name: &str, value: f64, tol: f64) {
        self.parts.push((format!("{name} {value:.1e} < {tol:.0e}"), value < tol));
    }

    fn holds(&mut self, name: &str, ok: bool) {
        self.parts.push((name.to_string(), ok));
    }

    fn outcome(self) -> Outcome {
        let pass = self.parts.iter().all(|(_, ok)| *ok);
        let detail = self
            .parts
            .iter()
            .map(|(s, ok)| if *ok { s.clone() } else { format!("{s} [FAILED]") })
            .collect::<Vec<_>>()
            .join("; ");
        Outcome { pass, detail }
    }
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn bundled() -> Vec<(String, ModelConfig, ChartModel)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(config_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let (cfg, model) = load_config(&p).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), cfg, model)
        })
        .collect()
}

fn points(cfg: &ModelConfig, model: &ChartModel, n: usize) -> Vec<Vec<f64>> {
    model.sample_points(n, cfg.domain.seed, cfg.domain.bounds)
}

fn param(model: &ChartModel, key: &str) -> Option<Expr> {
    model.params.get(key).and_then(|v| Expr::from_json(v).ok())
}

fn is_contact(f: Family) -> bool {
    matches!(f, Family::ContactPotential | Family::GeneralizedEe)
}

fn axioms() -> Outcome {
    let mut c = Conditions::default();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, cfg, m) in bundled() {
        for p in points(&cfg, &m, 100) {
            let geo = PointGeometry::new(&m, &p, 2).unwrap();
            let (de, dphi) = geo.closedness();
            worst = worst.max(geo.structure.axiom_residuals().max()).max(de).max(dphi);
            count += 1;
        }
    }
    c.below(&format!("max axiom/closedness residual over {count} points"), worst, 1e-10);
    c.outcome()
}

fn curvature_identities() -> Outcome {
    let mut c = Conditions::default();
    for (name, cfg, m) in bundled() {
        if !matches!(m.family, Family::EtaEinstein | Family::ContactPotential | Family::GeneralizedEe | Family::Flat | Family::Example1) {
            continue;
        }
        let mut worst = 0.0f64;
        for p in points(&cfg, &m, 20) {
            let geo = PointGeometry::new(&m, &p, 3).unwrap();
            for (_, r) in prop1_identities(&geo).into_iter().chain(pk_leaves(&geo)) {
                worst = worst.max(r);
            }
        }
        c.below(&name, worst, 1e-8);
    }
    c.outcome()
}

fn ricci_form_closed() -> Outcome {
    let mut c = Conditions::default();
    for (name, cfg, m) in bundled() {
        if !is_contact(m.family) {
            continue;
        }
        let mut worst = 0.0f64;
        for p in points(&cfg, &m, 50) {
            let geo = PointGeometry::new(&m, &p, 3).unwrap();
            let (_, drho, _) = ricci_form_check(&geo).unwrap();
            worst = worst.max(drho);
        }
        c.below(&format!("{name} dρ"), worst, 1e-8);
    }
    c.outcome()
}

fn eta_einstein() -> Outcome {
    let mut c = Conditions::default();
    let mut seen = Vec::new();
    for (name, cfg, m) in bundled() {
        if m.family != Family::EtaEinstein {
            continue;
        }
        let r0 = m.params["r0"].as_f64().unwrap();
        seen.push(r0);
        let (mut ric_res, mut dr) = (0.0f64, 0.0f64);
        for p in points(&cfg, &m, 100) {
            let geo = PointGeometry::new(&m, &p, 3).unwrap();
            let ric = geo.curvature.ricci_values();
            let s = &geo.structure;
            for a in 0..5 {
                for b in 0..5 {
                    let want = r0 / 4.0 * (s.g[a][b] - s.eta[a] * s.eta[b]);
                    ric_res = ric_res.max((ric[a * 5 + b] - want).abs());
                }
            }
            dr = dr.max(max_abs(geo.curvature.scalar_gradient()));
        }
        c.below(&format!("{name} Ric"), ric_res, 1e-8);
        c.below(&format!("{name} |dr|"), dr, 1e-8);
    }
    let n4 = seen.iter().filter(|&&r| r == 4.0).count();
    let n2 = seen.iter().filter(|&&r| r == -2.0).count();
    c.holds(&format!("three models each for r0 = 4 ({n4}) and r0 = -2 ({n2})"), n4 >= 3 && n2 >= 3);
    c.outcome()
}

fn contact_potential() -> Outcome {
    let mut c = Conditions::default();
    for (name, cfg, m) in bundled() {
        if !is_contact(m.family) {
            continue;
        }
        // η − τ₁ + τ₂ as an exact polynomial identity, η = dt.
        let forms = m.connection.as_ref().unwrap();
        let want = vec![Expr::one(), Expr::var(3), Expr::var(4), Expr::zero(), Expr::zero()];
        let mut exact = true;
        for (a, w) in want.iter().enumerate() {
            let comp = |f: &Form<Expr>| f.comps.get(&(1u8 << a)).cloned().unwrap_or_else(Expr::zero);
            let d = Expr::sum([
                if a == 0 { Expr::one() } else { Expr::zero() },
                comp(&forms.tau1).neg(),
                comp(&forms.tau2),
                w.neg(),
            ]);
            exact &= d.to_poly().map(|p| p.is_zero()).unwrap_or(false);
        }
        c.holds(&format!("{name} potential symbolic"), exact);

        let (mut numeric, mut a2_res, mut b2_res, mut spectrum) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in points(&cfg, &m, 50) {
            let geo = PointGeometry::new(&m, &p, 3).unwrap();
            let fs = frame_from_model(&geo, 1e-8).unwrap();
            let pot = ricci_potential_check(&geo, &fs).potential;
            let target = [1.0, p[3], p[4], 0.0, 0.0];
            for (a, t) in target.iter().enumerate() {
                numeric = numeric.max((pot.comps.get(&(1u8 << a)).copied().unwrap_or(0.0) - t).abs());
            }
            let (f1y, f2y) = if m.family == Family::GeneralizedEe {
                let b = param(&m, "B").unwrap().eval(&p);
                (b, -b)
            } else {
                (param(&m, "f1").unwrap().diff(3).eval(&p), param(&m, "f2").unwrap().diff(4).eval(&p))
            };
            let cf = frame_from_coframe(&geo, m.sigma).unwrap();
            let k = extract_coeffs(&cf).coeffs;
            a2_res = a2_res.max((k.a2 - 1.0 / f1y).abs());
            b2_res = b2_res.max((k.b2 + 1.0 / f2y).abs());
            let chi = ricci_char_poly(&geo);
            let want = poly_from_roots(&[0.0, -k.a2, -k.a2, -k.b2, -k.b2]);
            spectrum = spectrum.max(max_abs(chi.iter().zip(&want).map(|(x, y)| x - y)));
        }
        c.below(&format!("{name} potential numeric"), numeric, 1e-8);
        c.below(&format!("{name} eigen-pair (a2, b2)"), a2_res.max(b2_res), 1e-8);
        c.below(&format!("{name} Ricci spectrum"), spectrum, 1e-8);
    }
    let path = config_dir().join("contact_potential_r_minus_one.json");
    let (cfg, m) = load_config(&path).unwrap();
    let r = points(&cfg, &m, 20)
        .iter()
        .map(|p| (PointGeometry::new(&m, p, 3).unwrap().curvature.scalar.value() + 1.0).abs())
        .fold(0.0, f64::max);
    c.below("f1 = y1, f2 = 2y2: |r + 1|", r, 1e-8);
    c.outcome()
}

fn flatness() -> Outcome {
    let mut c = Conditions::default();
    for (name, cfg, m) in bundled() {
        if !matches!(m.family, Family::Flat | Family::Example1) {
            continue;
        }
        let worst = points(&cfg, &m, 50)
            .iter()
            .map(|p| PointGeometry::new(&m, p, 3).unwrap().curvature.max_abs_riemann())
            .fold(0.0, f64::max);
        c.below(&format!("{name} max |R|"), worst, 1e-9);
    }
    let neg = load_config(&config_dir().join("invalid/flat_negative.json"));
    c.holds("negative control rejected", matches!(neg, Err(paracosym::cli::CliError::Model(_))));
    c.outcome()
}

fn frame_oracle() -> Outcome {
    let mut c = Conditions::default();
    for (name, cfg, m) in bundled() {
        if m.dim != 5 {
            continue;
        }
        let (mut rec, mut off, mut ric_res, mut r_res) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in points(&cfg, &m, 50) {
            let geo = PointGeometry::new(&m, &p, 3).unwrap();
            let fs = frame_from_model(&geo, 1e-8).unwrap();
            let k = extract_coeffs(&fs).coeffs;
            let rc = reconstruct_curvature(&geo, &fs, &k);
            rec = rec.max(rc.forms_residual).max(rc.coeffs_residual);
            off = off.max(rc.off_support);
            let (ric, r) = ricci_from_coeffs(&fs, &k);
            ric_res = ric_res.max(max_abs(ric.iter().zip(geo.curvature.ricci_values()).map(|(a, b)| a - b)));
            let oracle_r = geo.curvature.scalar.value();
            r_res = r_res.max((r - oracle_r).abs()).max((-2.0 * (k.a2 + k.b2) - oracle_r).abs());
        }
        c.below(&format!("{name} R"), rec, 1e-7);
        c.below(&format!("{name} off-support"), off, 1e-7);
        c.below(&format!("{name} Ric/r"), ric_res.max(r_res), 1e-7);
    }
    c.outcome()
}

fn random_gauge(rng: &mut ChaCha8Rng) -> Expr {
    let mut k = || rng.gen_range(-1.0..1.0);
    let x = Expr::var;
    Expr::sum([
        Expr::constant(k()),
        x(2).scale(k()),
        x(3).sin().scale(k()),
        Expr::product([x(0), x(1)]).scale(k()),
    ])
}

fn random_coeffs(rng: &mut ChaCha8Rng) -> CurvatureCoeffs {
    let mut k = || rng.gen_range(-1.0..1.0);
    CurvatureCoeffs { a1: k(), a2: k(), b1: k(), b2: k(), gamma: k(), sigma: if rng.gen_bool(0.5) { 1.0 } else { -1.0 } }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn gauge() -> Outcome {
    let mut c = Conditions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let models: Vec<_> = bundled().into_iter().filter(|(_, _, m)| m.dim == 5).collect();
    let mut rel = [0.0f64; 3];
    for k in 0..10 {
        let (_, cfg, m) = &models[(3 * k) % models.len()];
        let p = points(cfg, m, k + 1).pop().unwrap();
        let geo = PointGeometry::new(m, &p, 3).unwrap();
        let fs = frame_from_model(&geo, 1e-8).unwrap();
        let alpha = random_gauge(&mut rng);
        let after = gauge_transform(&geo, &fs, &alpha).unwrap();
        let r = gauge_relations(&geo, &fs, &after, &alpha).unwrap();
        for i in 0..3 {
            rel[i] = rel[i].max(r[i]);
        }
    }
    c.below("τ' = τ", rel[0], 1e-8);
    c.below("ω' law", rel[1], 1e-8);
    c.below("Dω' law", rel[2], 1e-8);

    // Invariants against independent formulas, relative to their size.
    let mut inv = 0.0f64;
    for _ in 0..100 {
        let k0 = random_coeffs(&mut rng);
        let alpha = rng.gen_range(-1.0..1.0);
        let k1 = gauge_action_matrix(&k0, alpha);
        let i1 = |k: &CurvatureCoeffs| (k.sigma + k.gamma) * (k.a2 + k.b2) + (k.a1 + k.b1).powi(2);
        let i2 = |k: &CurvatureCoeffs| k.a1 * k.b2 - k.a2 * k.b1;
        let d = |k: &CurvatureCoeffs| det3(&curvature_matrix(k));
        for (f, lib) in [(i1(&k0), invariants(&k0).i1), (i2(&k0), invariants(&k0).i2), (d(&k0), invariants(&k0).det)] {
            inv = inv.max((f - lib).abs() / f.abs().max(1.0));
        }
        for (a, b) in [(i1(&k0), i1(&k1)), (i2(&k0), i2(&k1)), (d(&k0), d(&k1))] {
            inv = inv.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    c.below("I1, I2, det R̄ drift over 100 draws", inv, 1e-12);

    // Group law on dyadic values, where every floating-point step is exact.
    let mut exact = true;
    for _ in 0..100 {
        let mut d = || rng.gen_range(-8i32..=8) as f64 / 4.0;
        let k = CurvatureCoeffs { a1: d(), a2: d(), b1: d(), b2: d(), gamma: d(), sigma: 1.0 };
        let (a, b) = (d(), d());
        exact &= gauge_action_matrix(&gauge_action_matrix(&k, a), b) == gauge_action_matrix(&k, a + b);
        exact &= gauge_action_matrix(&k, 0.0) == k;
        exact &= gauge_action_matrix(&gauge_action_matrix(&k, a), -a) == k;
    }
    c.holds("group law, identity and inverses exact", exact);
    c.outcome()
}

fn weyl() -> Outcome {
    let mut c = Conditions::default();
    let path = config_dir().join("contact_potential_twisted.json");
    let (cfg, m) = load_config(&path).unwrap();
    let mut worst = 0.0f64;
    for p in points(&cfg, &m, 20) {
        let geo = PointGeometry::new(&m, &p, 3).unwrap();
        let fs = frame_from_model(&geo, 1e-8).unwrap();
        let w = weyl_frame_components(&geo, &fs, &extract_coeffs(&fs).coeffs);
        let (_, oracle, _) = w.labeled.iter().find(|(l, _, _)| l == "Θ14-Θ23").unwrap();
        worst = worst.max((oracle + geo.curvature.scalar.value() / 12.0).abs());
    }
    c.below("Θ14-Θ23 + r/12", worst, 1e-7);

    let (mut commuting, mut violations) = (0, 0);
    for (_, cfg, m) in bundled() {
        if m.dim != 5 {
            continue;
        }
        for p in points(&cfg, &m, 20) {
            let geo = PointGeometry::new(&m, &p, 3).unwrap();
            let fs = frame_from_model(&geo, 1e-8).unwrap();
            let w = weyl_frame_components(&geo, &fs, &extract_coeffs(&fs).coeffs);
            if w.commutator < 1e-9 {
                commuting += 1;
                if w.ricci_norm >= 1e-8 {
                    violations += 1;
                }
            }
        }
    }
    c.holds(&format!("[C, φ] = 0 at {commuting} points, Ric ≠ 0 at {violations} of them"), violations == 0);
    c.outcome()
}

/// Jacobi identity from the raw structure constants.
fn jacobi_zero(a: &Algebra) -> bool {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = Q::zero();
                    for m in 0..n {
                        s += a.constant(i, j, m) * a.constant(m, k, l)
                            + a.constant(j, k, m) * a.constant(m, i, l)
                            + a.constant(k, i, m) * a.constant(m, j, l);
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Q {
    loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 || !nonzero {
            return q(n, rng.gen_range(1i64..=9));
        }
    }
}

fn lie() -> Outcome {
    let mut c = Conditions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for family in LieFamily::ALL {
        let mut good = 0;
        for _ in 0..200 {
            let mut p = FamilyParams { sigma: if rng.gen_bool(0.5) { 1 } else { -1 }, ..Default::default() };
            p.beta1 = rational(&mut rng, false);
            p.beta2 = rational(&mut rng, false);
            match family {
                LieFamily::A | LieFamily::B => {
                    p.alpha1 = rational(&mut rng, true);
                    p.alpha2 = rational(&mut rng, true);
                }
                LieFamily::C1 => p.alpha0 = rational(&mut rng, true),
                LieFamily::C2 => {
                    p.alpha1 = rational(&mut rng, false);
                    p.alpha2 = rational(&mut rng, false);
                }
            }
            if family_algebra(family, &p).is_ok_and(|alg| jacobi_zero(&alg.algebra)) {
                good += 1;
            }
        }
        c.holds(&format!("{family}: Jacobi exact for {good}/200 draws"), good == 200);
    }

    let ex = classify_algebra(&example1_algebra());
    c.holds("Example 1 constants classify as C2", matches!(ex, Classification::Family { family: LieFamily::C2, .. }));

    let zero_c2 = family_algebra(LieFamily::C2, &FamilyParams { sigma: 1, ..Default::default() }).unwrap();
    let k = koszul(&zero_c2).unwrap();
    let largest = k.rm_all().iter().map(q_f64).fold(0.0, |m: f64, x| m.max(x.abs()));
    c.holds(&format!("zero-parameter C2 Koszul curvature exactly 0 (max |R| = {largest})"), k.is_flat());

    let s = isotropy_algebra_s().unwrap();
    let table: [(usize, usize, usize, i64); 5] = [(1, 4, 2, -1), (1, 5, 3, -1), (4, 5, 6, 1), (4, 6, 3, -1), (5, 6, 2, 1)];
    let scaled = |f: &AffineField, c: i64| AffineField {
        linear: f.linear.iter().map(|r| r.iter().map(|x| x * qi(c)).collect()).collect(),
        translation: f.translation.iter().map(|x| x * qi(c)).collect(),
    };
    let mut matches = true;
    for i in 0..6 {
        for j in i + 1..6 {
            let want = match table.iter().find(|t| t.0 == i + 1 && t.1 == j + 1) {
                Some(&(_, _, k, c)) => scaled(&s.fields[k - 1], c),
                None => AffineField::zero(5),
            };
            matches &= s.fields[i].bracket(&s.fields[j]) == want;
        }
    }
    c.holds("𝔰 bracket table", matches);

    let m = ChartModel::example1();
    let pts = m.sample_points(20, 42, [-0.9, 0.9]);
    let worst = s.fields.iter().map(|f| killing_residuals(&m, &example1_field(f), &pts).unwrap().max()).fold(0.0, f64::max);
    c.below("six fields Killing and structure-preserving", worst, 1e-9);
    c.outcome()
}

fn dim3() -> Outcome {
    let mut c = Conditions::default();
    for (name, cfg, m) in bundled() {
        if m.family != Family::Dim3 {
            continue;
        }
        let b = param(&m, "b").unwrap();
        let (mut r_res, mut op_res) = (0.0f64, 0.0f64);
        for p in points(&cfg, &m, 100) {
            let geo = PointGeometry::new(&m, &p, 3).unwrap();
            let r = geo.curvature.scalar.value();
            r_res = r_res.max((r - 2.0 * b.diff(0).diff(0).eval(&p)).abs());
            let s = &geo.structure;
            let op = geo.curvature_operator();
            for a in 0..3 {
                for x in 0..3 {
                    for y in 0..3 {
                        let big_phi: f64 = (0..3).map(|e| s.phi[e][x] * s.g[e][y]).sum();
                        for z in 0..3 {
                            op_res = op_res.max((op[idx(3, &[a, x, y, z])] - r / 2.0 * big_phi * s.phi[a][z]).abs());
                        }
                    }
                }
            }
        }
        c.below(&format!("{name} |r − 2b_xx|"), r_res, 1e-9);
        c.below(&format!("{name} R − (r/2)Φφ"), op_res, 1e-8);
    }
    c.outcome()
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> Expr {
    let mut terms = vec![Expr::constant(rng.gen_range(-0.2..0.2))];
    for a in 0..n {
        terms.push(Expr::var(a).scale(rng.gen_range(-0.3..0.3)));
        for b in a..n {
            terms.push(Expr::product([Expr::var(a), Expr::var(b)]).scale(rng.gen_range(-0.3..0.3)));
        }
        let e = rng.gen_range(0..n);
        terms.push(Expr::product([Expr::var(a), Expr::var(e), Expr::var(a)]).scale(rng.gen_range(-0.2..0.2)));
    }
    Expr::sum(terms)
}

fn fd_christoffel() -> Outcome {
    let mut c = Conditions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let n = 3 + k % 3;
        let mut g = vec![vec![Expr::zero(); n]; n];
        for a in 0..n {
            for b in a..n {
                let base = if a == b { if rng.gen_bool(0.5) { 2.0 } else { -2.0 } } else { 0.0 };
                let e = Expr::sum([Expr::constant(base), random_poly(&mut rng, n)]);
                g[a][b] = e.clone();
                g[b][a] = e;
            }
        }
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let jets = JetMatrix::from_fn(n, |a, b| g[a][b].jet(&p, 2).unwrap());
        let gamma = Curvature::from_metric(&jets).unwrap().christoffel_values();

        let h = 1e-4;
        let at = |q: &[f64]| DMatrix::from_fn(n, n, |a, b| g[a][b].eval(q));
        let dg: Vec<DMatrix<f64>> = (0..n)
            .map(|c| {
                let (mut up, mut dn) = (p.clone(), p.clone());
                up[c] += h;
                dn[c] -= h;
                (at(&up) - at(&dn)) / (2.0 * h)
            })
            .collect();
        let ginv = at(&p).try_inverse().unwrap();
        let mut scale = 0.0f64;
        let mut diff = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    let fd: f64 = (0..n).map(|d| 0.5 * ginv[(a, d)] * (dg[b][(d, cc)] + dg[cc][(d, b)] - dg[d][(b, cc)])).sum();
                    let jet = gamma[idx(n, &[a, b, cc])];
                    scale = scale.max(fd.abs());
                    diff = diff.max((fd - jet).abs());
                }
            }
        }
        worst = worst.max(diff / scale.max(1.0));
    }
    c.below("max relative Christoffel difference over 20 metrics", worst, 1e-5);
    c.outcome()
}

fn cli_suite() -> Outcome {
    let mut c = Conditions::default();
    let bin = env!("CARGO_BIN_EXE_paracosym");
    let tmp = std::env::temp_dir().join(format!("paracosym-acceptance-{}", std::process::id()));
    let configs: Vec<PathBuf> = bundled().iter().map(|(n, _, _)| config_dir().join(format!("{n}.json"))).collect();
    let run_all = |dir: &Path| -> (Vec<(String, i32)>, f64) {
        std::fs::create_dir_all(dir).unwrap();
        let start = Instant::now();
        let codes = configs
            .iter()
            .map(|cfg| {
                let name = cfg.file_stem().unwrap().to_string_lossy().into_owned();
                let out = Command::new(bin)
                    .arg("verify")
                    .arg(cfg)
                    .arg("--report")
                    .arg(dir.join(format!("{name}.json")))
                    .env_remove("PCG_SEED")
                    .output()
                    .unwrap();
                (name, out.status.code().unwrap_or(-1))
            })
            .collect();
        (codes, start.elapsed().as_secs_f64())
    };
    let (first, secs) = run_all(&tmp.join("a"));
    let (_, _) = run_all(&tmp.join("b"));
    let failed: Vec<&str> = first.iter().filter(|(_, code)| *code != 0).map(|(n, _)| n.as_str()).collect();
    c.holds(&format!("{} configs exit 0 (failing: {failed:?})", first.len()), failed.is_empty());
    c.below("wall-clock seconds", secs, 60.0);
    let unstable: Vec<&str> = first
        .iter()
        .map(|(n, _)| n.as_str())
        .filter(|n| {
            let a = std::fs::read(tmp.join("a").join(format!("{n}.json"))).ok();
            let b = std::fs::read(tmp.join("b").join(format!("{n}.json"))).ok();
            a.is_none() || a != b
        })
        .collect();
    c.holds(&format!("byte-stable reports (unstable: {unstable:?})"), unstable.is_empty());
    let neg = Command::new(bin).arg("verify").arg(config_dir().join("invalid/flat_negative.json")).output().unwrap();
    c.holds("negative control exits 2", neg.status.code() == Some(2));
    let _ = std::fs::remove_dir_all(&tmp);
    c.outcome()
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("structure axioms on every bundled model", axioms),
        ("curvature identities", curvature_identities),
        ("Ricci form is closed", ricci_form_closed),
        ("η-Einstein family", eta_einstein),
        ("contact Ricci potential family", contact_potential),
        ("flat family and negative control", flatness),
        ("frame reconstruction against the oracle", frame_oracle),
        ("frame changes", gauge),
        ("Weyl components", weyl),
        ("Lie algebra module", lie),
        ("three-dimensional family", dim3),
        ("jets against finite differences", fd_christoffel),
        ("command-line suite", cli_suite),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Outcome { pass: false, detail: format!("panicked: {}", msg.unwrap_or_default()) }
        });
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "[{:>2}/13] {} {name} ({:.1}s): {}",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    std::process::exit(if failed == 0 { 0 } else { 1 });
}
