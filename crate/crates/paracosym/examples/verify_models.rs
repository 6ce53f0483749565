//! Runs the default check suite on every bundled config and prints one
//! summary line per model, plus the failing checks if any.

use paracosym::cli::{load_config, verify, VerifyOptions};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    paths.sort();
    let mut all = true;
    for path in paths {
        let (cfg, model) = load_config(&path).unwrap();
        let opts = VerifyOptions { points: 20, seed: cfg.domain.seed, bounds: cfg.domain.bounds, ..Default::default() };
        let report = verify(&model, &opts);
        let worst = report.checks.iter().filter_map(|c| c.max_residual.map(|r| r / c.tolerance.max(f64::MIN_POSITIVE))).fold(0.0f64, f64::max);
        println!(
            "{:<32} {} checks  {}  worst residual/tolerance {:.1e}",
            path.file_stem().unwrap().to_string_lossy(),
            report.checks.len(),
            if report.pass { "pass" } else { "FAIL" },
            worst
        );
        for c in report.failing() {
            println!("    {} ({:?} > {:e})", c.name, c.max_residual, c.tolerance);
        }
        all &= report.pass;
    }

    // A flat config that violates the flatness constraint is refused.
    match load_config(format!("{dir}/invalid/flat_negative.json").as_ref()) {
        Err(e) => println!("negative control rejected: {e}"),
        Ok(_) => println!("negative control accepted"),
    }
    std::process::exit(if all { 0 } else { 1 });
}
