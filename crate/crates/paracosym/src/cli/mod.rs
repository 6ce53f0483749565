//! Command-line front end. The binary only forwards its arguments to [`run`].
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input (usage, config,
//! parameters).

pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::fields::{Expr, Form};
use crate::frame::{
    extract_coeffs, frame_from_model, gauge_action_matrix, gauge_relations, gauge_transform, invariants,
    weyl_frame_components, CurvatureCoeffs, FrameError, FrameState,
};
use crate::lie::isotropy::{example1_field, isotropy_algebra_s, killing_residuals, S_TABLE};
use crate::lie::koszul::curvature_report;
use crate::lie::{
    classify_algebra, example1_algebra, family_algebra, omega_constraints, parse_q, q_f64, structure_equation_residual,
    Classification, Family as LieFamily, FamilyParams, LieAlgebra5, LieError, Q,
};
use crate::models::{ChartModel, ModelConfig, ModelError};
use crate::pac::PacError;

pub use report::{diff_reports, CheckRecord, CheckReport, Finding, ReportDiff};
pub use suite::{point_geometry, verify, VerifyOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid JSON: {msg}")]
    Json { path: PathBuf, msg: String },
    #[error("config error: {0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Pac(#[from] PacError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Pac(_) | CliError::Frame(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "paracosym", version, about = "Checks weakly para-cosymplectic model manifolds against a coordinate curvature oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full check suite on a model config.
    Verify(VerifyArgs),
    /// Classify the tensor A at a point.
    Classify(PointArgs),
    /// Print the adopted frame, connection forms and curvature coefficients at a point.
    Frame(PointArgs),
    /// Apply a frame change to coefficients or to a model frame.
    Gauge(GaugeArgs),
    /// Labeled Weyl components at a point.
    Weyl(PointArgs),
    /// Exact computations on left-invariant structures.
    Lie {
        #[command(subcommand)]
        command: LieCommand,
    },
    /// Compare two verification reports.
    ReportDiff(DiffArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub points: Option<usize>,
    /// Overridden by the PCG_SEED environment variable.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Apply ξ → −ξ, η → −η at points where A has ε = −1.
    #[arg(long)]
    pub normalize_xi: bool,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    pub config: PathBuf,
    /// Comma-separated chart coordinates; defaults to the origin.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long)]
    pub normalize_xi: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct GaugeArgs {
    /// Model config; without it `--coeffs` is required.
    pub config: Option<PathBuf>,
    /// `a1,a2,b1,b2,gamma,sigma`
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// Constant gauge parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Gauge function as an expression JSON object.
    #[arg(long)]
    pub alpha_expr: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct DiffArgs {
    pub left: PathBuf,
    pub right: PathBuf,
    /// Relative change in a residual that is reported.
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum LieCommand {
    /// Jacobi identity, d² = 0, structure equations and integrability branch.
    Check(LieSource),
    /// Decide which family an algebra belongs to.
    Classify(LieSource),
    /// Exact Levi-Civita curvature of the left-invariant metric.
    Curvature(LieSource),
    /// The isotropy algebra of Example 1 and its Killing checks.
    Isotropy {
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args, Debug, Default)]
pub struct LieSource {
    /// A, B, C1 or C2.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<String>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub sigma: i64,
    /// Structure constants as JSON.
    #[arg(long)]
    pub constants: Option<PathBuf>,
    /// Use Example 1's structure constants.
    #[arg(long)]
    pub example1: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Classify(a) => cmd_classify(&a, out),
        Command::Frame(a) => cmd_frame(&a, out),
        Command::Gauge(a) => cmd_gauge(&a, out),
        Command::Weyl(a) => cmd_weyl(&a, out),
        Command::Lie { command } => cmd_lie(command, out),
        Command::ReportDiff(a) => cmd_report_diff(&a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) {
    let _ = out.write_all(text.as_bytes());
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json { path: path.into(), msg: e.to_string() })
}

/// Reads a config file and builds its model.
pub fn load_config(path: &Path) -> Result<(ModelConfig, ChartModel), CliError> {
    let v = read_json(path)?;
    let cfg: ModelConfig = serde_json::from_value(v).map_err(|e| CliError::Json { path: path.into(), msg: e.to_string() })?;
    let model = ChartModel::from_config(&cfg)?;
    Ok((cfg, model))
}

/// Verification options from a config's domain, command-line flags and the
/// `PCG_SEED` override (passed in by the caller).
pub fn verify_options(cfg: &ModelConfig, a: &VerifyArgs, env_seed: Option<&str>) -> Result<VerifyOptions, CliError> {
    let mut seed = a.seed.unwrap_or(cfg.domain.seed);
    if let Some(s) = env_seed {
        seed = s.trim().parse().map_err(|_| CliError::Usage(format!("PCG_SEED must be an unsigned integer, got `{s}`")))?;
    }
    if a.order < 2 {
        return Err(CliError::Usage("jet order must be at least 2".into()));
    }
    if !(a.tol > 0.0) {
        return Err(CliError::Usage("tolerance must be positive".into()));
    }
    Ok(VerifyOptions {
        points: a.points.unwrap_or(cfg.domain.points),
        seed,
        tol: a.tol,
        order: a.order,
        bounds: cfg.domain.bounds,
        normalize_xi: a.normalize_xi,
    })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (cfg, model) = load_config(&a.config)?;
    let env_seed = std::env::var("PCG_SEED").ok();
    let opts = verify_options(&cfg, a, env_seed.as_deref())?;
    let report = verify(&model, &opts);
    let json = report.to_json();
    if let Some(path) = &a.report {
        std::fs::write(path, &json).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    if a.json {
        emit(out, &json);
    } else {
        emit(out, &report.table());
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{what}: `{x}` is not a number"))))
        .collect()
}

/// The requested point, or the origin when the model's guards allow it and
/// the first sampled point otherwise.
pub fn choose_point(model: &ChartModel, cfg: &ModelConfig, point: Option<&str>) -> Result<Vec<f64>, CliError> {
    if let Some(s) = point {
        let p = parse_list(s, "point")?;
        if p.len() != model.dim {
            return Err(CliError::Usage(format!("point needs {} coordinates ({})", model.dim, model.coords.join(","))));
        }
        return Ok(p);
    }
    let origin = vec![0.0; model.dim];
    if model.guards.iter().all(|(_, e)| e.eval(&origin).abs() >= 1e-3) {
        Ok(origin)
    } else {
        Ok(model.sample_points(1, cfg.domain.seed, cfg.domain.bounds).remove(0))
    }
}

fn form1(f: &Form<f64>) -> Vec<f64> {
    (0..f.dim).map(|a| f.comps.get(&(1u8 << a)).copied().unwrap_or(0.0)).collect()
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_classify(a: &PointArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (cfg, model) = load_config(&a.config)?;
    let p = choose_point(&model, &cfg, a.point.as_deref())?;
    let (geo, flipped) = point_geometry(&model, &p, a.order.max(2), a.normalize_xi)?;
    let c = geo.classify(1e-8)?;
    if a.json {
        let v = json!({
            "model": model.label,
            "point": p,
            "kind": c.kind.name(),
            "rank": c.rank,
            "epsilon": c.epsilon,
            "sigma": c.sigma,
            "v1": c.v1,
            "v2": c.v2,
            "singular_values": c.singular_values,
            "boundary": c.boundary,
            "flipped": flipped,
        });
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&v).unwrap()));
    } else {
        let mut s = format!("model: {}\npoint: {}\nkind: {}\nrank: {}\n", model.label, fmt_vec(&p), c.kind.name(), c.rank);
        s += &format!("epsilon: {}\n", c.epsilon);
        if c.rank == 2 {
            s += &format!("sigma: {}\n", c.sigma);
        }
        if let Some(v) = &c.v1 {
            s += &format!("V1: {}\n", fmt_vec(v));
        }
        if let Some(v) = &c.v2 {
            s += &format!("V2: {}\n", fmt_vec(v));
        }
        s += &format!("singular values: {}\n", fmt_vec(&c.singular_values));
        if c.boundary {
            s += "warning: rank decided by a singular value near the threshold\n";
        }
        if flipped {
            s += "orientation: xi -> -xi applied\n";
        }
        emit(out, &s);
    }
    Ok(0)
}

fn frame_at(a: &PointArgs) -> Result<(ChartModel, Vec<f64>, crate::pac::PointGeometry, FrameState), CliError> {
    let (cfg, model) = load_config(&a.config)?;
    if model.dim != 5 {
        return Err(CliError::Usage("adopted frames are only defined in dimension 5".into()));
    }
    let p = choose_point(&model, &cfg, a.point.as_deref())?;
    let (geo, _) = point_geometry(&model, &p, a.order.max(3), a.normalize_xi)?;
    let fs = frame_from_model(&geo, 1e-8)?;
    Ok((model, p, geo, fs))
}

fn coeffs_json(c: &CurvatureCoeffs) -> Value {
    serde_json::to_value(c).unwrap()
}

fn cmd_frame(a: &PointArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (model, p, geo, fs) = frame_at(a)?;
    let ex = extract_coeffs(&fs);
    let inv = invariants(&ex.coeffs);
    let residuals: serde_json::Map<String, Value> =
        fs.invariant_residuals(&geo).into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let v = json!({
        "model": model.label,
        "point": p,
        "sigma": fs.sigma,
        "vectors": fs.vector_values(),
        "tau1": form1(&fs.tau1.values()),
        "tau2": form1(&fs.tau2.values()),
        "omega": form1(&fs.omega.values()),
        "coefficients": coeffs_json(&ex.coeffs),
        "invariants": inv,
        "pattern_residual": ex.residual,
        "residuals": residuals,
    });
    if a.json {
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&v).unwrap()));
        return Ok(0);
    }
    let names = ["xi", "V1", "V2", "V3", "V4"];
    let mut s = format!("model: {}\npoint: {}\nsigma: {}\n", model.label, fmt_vec(&p), fs.sigma);
    for (n, vec) in names.iter().zip(fs.vector_values()) {
        s += &format!("{n:>4} = {}\n", fmt_vec(&vec));
    }
    s += &format!("tau1 = {}\ntau2 = {}\nomega = {}\n", fmt_vec(&form1(&fs.tau1.values())), fmt_vec(&form1(&fs.tau2.values())), fmt_vec(&form1(&fs.omega.values())));
    let c = &ex.coeffs;
    s += &format!("a1 = {:.6}, a2 = {:.6}, b1 = {:.6}, b2 = {:.6}, gamma = {:.6}\n", c.a1, c.a2, c.b1, c.b2, c.gamma);
    s += &format!("I1 = {:.6}, I2 = {:.6}, det = {:.6}\n", inv.i1, inv.i2, inv.det);
    s += &format!("coefficient pattern residual: {:.3e}\n", ex.residual);
    for (k, r) in fs.invariant_residuals(&geo) {
        s += &format!("{k}: {r:.3e}\n");
    }
    emit(out, &s);
    Ok(0)
}

fn cmd_gauge(a: &GaugeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    match (&a.config, &a.coeffs) {
        (None, Some(cs)) => {
            let v = parse_list(cs, "coeffs")?;
            if v.len() != 6 {
                return Err(CliError::Usage("coeffs needs a1,a2,b1,b2,gamma,sigma".into()));
            }
            let c = CurvatureCoeffs { a1: v[0], a2: v[1], b1: v[2], b2: v[3], gamma: v[4], sigma: v[5] };
            let alpha = a.alpha.ok_or_else(|| CliError::Usage("--alpha is required with --coeffs".into()))?;
            let d = gauge_action_matrix(&c, alpha);
            let r = json!({
                "alpha": alpha,
                "before": coeffs_json(&c),
                "after": coeffs_json(&d),
                "invariants_before": invariants(&c),
                "invariants_after": invariants(&d),
            });
            emit(out, &format!("{}\n", serde_json::to_string_pretty(&r).unwrap()));
            Ok(0)
        }
        (Some(config), _) => {
            let alpha = match (&a.alpha_expr, a.alpha) {
                (Some(s), _) => {
                    let v: Value = serde_json::from_str(s).map_err(|e| CliError::Usage(format!("alpha-expr: {e}")))?;
                    Expr::from_json(&v).map_err(|e| CliError::Usage(format!("alpha-expr: {e}")))?
                }
                (None, Some(c)) => Expr::constant(c),
                (None, None) => return Err(CliError::Usage("--alpha or --alpha-expr is required".into())),
            };
            let pa = PointArgs { config: config.clone(), point: a.point.clone(), order: 3, normalize_xi: false, json: true };
            let (model, p, geo, fs) = frame_at(&pa)?;
            let after = gauge_transform(&geo, &fs, &alpha)?;
            let rel = gauge_relations(&geo, &fs, &after, &alpha)?;
            let c0 = extract_coeffs(&fs).coeffs;
            let c1 = extract_coeffs(&after).coeffs;
            let predicted = gauge_action_matrix(&c0, alpha.eval(&p));
            let r = json!({
                "model": model.label,
                "point": p,
                "alpha": alpha.eval(&p),
                "relations": {"tau": rel[0], "omega": rel[1], "d_omega": rel[2]},
                "before": coeffs_json(&c0),
                "after": coeffs_json(&c1),
                "predicted_after": coeffs_json(&predicted),
                "invariants_before": invariants(&c0),
                "invariants_after": invariants(&c1),
            });
            emit(out, &format!("{}\n", serde_json::to_string_pretty(&r).unwrap()));
            Ok(0)
        }
        (None, None) => Err(CliError::Usage("gauge needs a config or --coeffs".into())),
    }
}

fn cmd_weyl(a: &PointArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (model, p, geo, fs) = frame_at(a)?;
    let c = extract_coeffs(&fs).coeffs;
    let w = weyl_frame_components(&geo, &fs, &c);
    if a.json {
        let labeled: Vec<Value> =
            w.labeled.iter().map(|(l, got, want)| json!({"label": l, "oracle": got, "predicted": want})).collect();
        let v = json!({
            "model": model.label,
            "point": p,
            "labeled": labeled,
            "decomposition_residual": w.decomposition_residual,
            "commutator": w.commutator,
            "ricci_norm": w.ricci_norm,
        });
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&v).unwrap()));
        return Ok(0);
    }
    let mut s = format!("model: {}\npoint: {}\n", model.label, fmt_vec(&p));
    for (l, got, want) in &w.labeled {
        s += &format!("{l}: oracle {got:.9}, from coefficients {want:.9}\n");
    }
    s += &format!("decomposition residual: {:.3e}\n[C, phi]: {:.3e}\n|Ric|: {:.3e}\n", w.decomposition_residual, w.commutator, w.ricci_norm);
    emit(out, &s);
    Ok(0)
}

fn param_q(s: &Option<String>) -> Result<Q, CliError> {
    match s {
        None => Ok(Q::zero()),
        Some(t) => Ok(parse_q(t)?),
    }
}

/// The algebra named by the source arguments, with its family parameters
/// when it was built from a family.
fn lie_algebra(src: &LieSource) -> Result<(LieAlgebra5, Option<(LieFamily, FamilyParams)>), CliError> {
    if src.example1 {
        return Ok((example1_algebra(), None));
    }
    if let Some(path) = &src.constants {
        return Ok((LieAlgebra5::from_json(&read_json(path)?)?, None));
    }
    let name = src.family.as_deref().ok_or_else(|| CliError::Usage("give --family, --constants or --example1".into()))?;
    let family = LieFamily::parse(name).ok_or_else(|| CliError::Usage(format!("unknown family `{name}` (A, B, C1, C2)")))?;
    let p = FamilyParams {
        alpha0: param_q(&src.alpha0)?,
        alpha1: param_q(&src.alpha1)?,
        alpha2: param_q(&src.alpha2)?,
        beta1: param_q(&src.beta1)?,
        beta2: param_q(&src.beta2)?,
        sigma: src.sigma,
        ..Default::default()
    };
    let full = p.completed(family)?;
    let alg = family_algebra(family, &p)?;
    Ok((alg, Some((family, full))))
}

fn cmd_lie(cmd: LieCommand, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        LieCommand::Check(src) => {
            let (alg, fam) = match lie_algebra(&src) {
                Err(CliError::Lie(LieError::Jacobi(i, j, k))) => {
                    emit(out, &format!("Jacobi: FAIL on basis triple ({i}, {j}, {k})\n"));
                    return Ok(1);
                }
                r => r?,
            };
            let a = &alg.algebra;
            let mut s = String::from("brackets:\n");
            for b in alg.render_brackets() {
                s += &format!("  {b}\n");
            }
            let jac = a.jacobi_residual();
            let d2 = a.d_squared_residual();
            let mut ok = jac.is_zero() && d2.is_zero();
            s += &format!("Jacobi: {}\n", if jac.is_zero() { "pass (exact)" } else { "FAIL" });
            s += &format!("d^2 = 0: {}\n", if d2.is_zero() { "pass (exact)" } else { "FAIL" });
            if let Some((family, p)) = &fam {
                let se = structure_equation_residual(&alg, p);
                let cons = omega_constraints(p);
                ok &= se.is_zero() && cons.branch == Some(*family);
                s += &format!("structure equations: {}\n", if se.is_zero() { "pass (exact)" } else { "FAIL" });
                let branch = cons.branch.map(|b| b.to_string()).unwrap_or_else(|| "none".into());
                s += &format!("integrability branch: {branch}\n");
                s += &format!("omega = ({}, {}, {}, {}, {}) on (xi, V1, V2, V3, V4)\n", p.alpha0, p.beta1, p.beta2, p.alpha3, p.alpha4);
            }
            if let Some(step) = a.nilpotency_step() {
                s += &format!("nilpotent of step {step}\n");
            }
            emit(out, &s);
            Ok(if ok { 0 } else { 1 })
        }
        LieCommand::Classify(src) => {
            let (alg, _) = lie_algebra(&src)?;
            match classify_algebra(&alg) {
                Classification::Family { family, params } => {
                    emit(
                        out,
                        &format!(
                            "family: {family}\nalpha0 = {}, alpha1 = {}, alpha2 = {}, alpha3 = {}, alpha4 = {}, beta1 = {}, beta2 = {}, sigma = {}\n",
                            params.alpha0, params.alpha1, params.alpha2, params.alpha3, params.alpha4, params.beta1, params.beta2, params.sigma
                        ),
                    );
                    Ok(0)
                }
                Classification::Rejected(why) => {
                    emit(out, &format!("rejected: {why}\n"));
                    Ok(1)
                }
            }
        }
        LieCommand::Curvature(src) => {
            let (alg, _) = lie_algebra(&src)?;
            let r = curvature_report(&alg)?;
            let c = &r.coeffs;
            let mut s = format!("flat: {}\n", if r.flat { "yes" } else { "no" });
            s += &format!("a1 = {}, a2 = {}, b1 = {}, b2 = {}, gamma = {}\n", c.a1, c.a2, c.b1, c.b2, c.gamma);
            s += &format!("scalar curvature: {} (trace), {} (-2(a2 + b2))\n", r.scalar_trace, r.scalar_formula);
            s += &format!("template residual: {}\n", r.template_residual);
            s += &format!("nabla xi + A: {}\n", r.nabla_xi);
            let mut ok = r.template_residual.is_zero() && r.nabla_xi.is_zero() && r.scalar_trace == r.scalar_formula;
            for (name, v) in &r.identities {
                s += &format!("{name}: {}\n", if v.is_zero() { "0".to_string() } else { format!("{} (FAIL)", q_f64(v)) });
                ok &= v.is_zero();
            }
            emit(out, &s);
            Ok(if ok { 0 } else { 1 })
        }
        LieCommand::Isotropy { points, seed } => {
            let sa = isotropy_algebra_s()?;
            let mut s = String::from("nonzero brackets:\n");
            for (i, j, k, c) in S_TABLE {
                let sign = if c < 0 { "-" } else { "" };
                s += &format!("  [K{i}, K{j}] = {sign}K{k}\n");
            }
            let series: Vec<usize> = sa.algebra.lower_central_series().iter().map(Vec::len).collect();
            s += &format!("lower central series dimensions: {series:?}\n");
            let model = ChartModel::example1();
            let pts = model.sample_points(points, seed, [-0.9, 0.9]);
            let mut ok = true;
            for (i, f) in sa.fields.iter().enumerate() {
                let r = killing_residuals(&model, &example1_field(f), &pts)?;
                ok &= r.max() < 1e-9;
                s += &format!("K{}: L g {:.1e}, L phi {:.1e}, L eta {:.1e}, L xi {:.1e}\n", i + 1, r.metric, r.phi, r.eta, r.xi);
            }
            emit(out, &s);
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn read_report(path: &Path) -> Result<CheckReport, CliError> {
    serde_json::from_value(read_json(path)?).map_err(|e| CliError::Json { path: path.into(), msg: e.to_string() })
}

fn cmd_report_diff(a: &DiffArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let l = read_report(&a.left)?;
    let r = read_report(&a.right)?;
    let d = diff_reports(&l, &r, a.rel_tol);
    emit(out, &d.render());
    Ok(if d.is_regression() { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["paracosym"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lie_check_c2() {
        let (code, out, _) = run_str(&["lie", "check", "--family", "C2", "--alpha1", "0"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("Jacobi: pass"));
        assert!(out.contains("integrability branch: C2"));
    }

    #[test]
    fn lie_family_a_needs_alpha2() {
        let (code, _, err) = run_str(&["lie", "check", "--family", "A", "--alpha1", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("alpha2"), "{err}");
    }

    #[test]
    fn lie_classify_example1() {
        let (code, out, _) = run_str(&["lie", "classify", "--example1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("family: C2"));
    }

    #[test]
    fn gauge_coefficients() {
        let (code, out, _) = run_str(&["gauge", "--coeffs", "1,2,3,4,5,1", "--alpha", "0.5"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["after"]["a1"], json!(0.0));
        assert_eq!(v["invariants_before"]["i1"], v["invariants_after"]["i1"]);
    }

    #[test]
    fn usage_error_exit_code() {
        let (code, _, _) = run_str(&["verify"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_str(&["verify", "/nonexistent/config.json"]);
        assert_eq!(code, 2);
        assert!(err.contains("nonexistent"));
    }

    #[test]
    fn env_seed_overrides_flag() {
        let cfg: ModelConfig = serde_json::from_value(json!({"family": "example1"})).unwrap();
        let a = VerifyArgs {
            config: PathBuf::new(),
            points: None,
            seed: Some(5),
            tol: 1e-8,
            order: 3,
            report: None,
            normalize_xi: false,
            json: false,
        };
        assert_eq!(verify_options(&cfg, &a, None).unwrap().seed, 5);
        assert_eq!(verify_options(&cfg, &a, Some("77")).unwrap().seed, 77);
        assert!(verify_options(&cfg, &a, Some("x")).is_err());
    }
}
