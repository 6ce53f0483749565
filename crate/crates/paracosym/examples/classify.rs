//! Pointwise type of the tensor `A = −∇ξ` across the bundled models.

use paracosym::cli::load_config;
use paracosym::pac::PointGeometry;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    paths.sort();
    for path in paths {
        let (cfg, model) = load_config(&path).unwrap();
        let p = model.sample_points(1, cfg.domain.seed, cfg.domain.bounds).remove(0);
        let geo = PointGeometry::new(&model, &p, 2).unwrap();
        let c = geo.classify(1e-8).unwrap();
        let sv: Vec<String> = c.singular_values.iter().take(3).map(|s| format!("{s:.3}")).collect();
        println!(
            "{:<32} {:<10} rank {}  eps {:+}  sigma {:+}  singular values [{}]",
            path.file_stem().unwrap().to_string_lossy(),
            c.kind.name(),
            c.rank,
            c.epsilon,
            c.sigma,
            sv.join(", ")
        );
    }
}
