//! Weyl tensor of a contact-potential model in the dual adopted coframe:
//! the labeled components predicted from the curvature coefficients against
//! the oracle's conformal decomposition.

use paracosym::cli::load_config;
use paracosym::frame::{extract_coeffs, frame_from_model, weyl_frame_components};
use paracosym::pac::PointGeometry;

fn main() {
    for name in ["contact_potential_r_minus_one", "contact_potential_twisted", "flat_zero_alpha"] {
        let path = format!("{}/configs/{name}.json", env!("CARGO_MANIFEST_DIR"));
        let (cfg, model) = load_config(path.as_ref()).unwrap();
        let p = model.sample_points(1, cfg.domain.seed, cfg.domain.bounds).remove(0);
        let geo = PointGeometry::new(&model, &p, 3).unwrap();
        let fs = frame_from_model(&geo, 1e-8).unwrap();
        let c = extract_coeffs(&fs).coeffs;
        let w = weyl_frame_components(&geo, &fs, &c);
        println!("{name}: r = {:.6}", geo.curvature.scalar.value());
        for (label, oracle, predicted) in &w.labeled {
            println!("  {label:<9} oracle {oracle:+.9}  predicted {predicted:+.9}");
        }
        println!("  full decomposition residual {:.1e}, |[C, phi]| {:.3e}, |Ric| {:.3e}", w.decomposition_residual, w.commutator, w.ricci_norm);
    }
}
