//! Adopted frame, connection forms and the five curvature coefficients of a
//! contact-potential model, with the curvature rebuilt from them.

use paracosym::cli::load_config;
use paracosym::frame::{extract_coeffs, frame_from_model, reconstruct_curvature, ricci_from_coeffs};
use paracosym::pac::{max_abs, PointGeometry};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/contact_potential_twisted.json");
    let (_, model) = load_config(path.as_ref()).unwrap();
    let p = [0.1, -0.2, 0.4, 0.3, -0.5];
    let geo = PointGeometry::new(&model, &p, 3).unwrap();
    let fs = frame_from_model(&geo, 1e-8).unwrap();

    for (name, v) in ["xi", "V1", "V2", "V3", "V4"].iter().zip(fs.vector_values()) {
        let v: Vec<String> = v.iter().map(|x| format!("{x:+.4}")).collect();
        println!("{name:>3} = [{}]", v.join(", "));
    }
    // Connection forms evaluated on the frame vectors.
    let vs = fs.vector_values();
    for (name, f) in [("tau1", &fs.tau1), ("tau2", &fs.tau2), ("omega", &fs.omega)] {
        let f = f.values();
        let on: Vec<String> = vs.iter().map(|v| format!("{:+.4}", f.eval(std::slice::from_ref(v)))).collect();
        println!("{name:>5}(xi, V1..V4) = [{}]", on.join(", "));
    }

    let ex = extract_coeffs(&fs);
    let c = &ex.coeffs;
    println!("a1 {:+.6}  a2 {:+.6}  b1 {:+.6}  b2 {:+.6}  gamma {:+.6}  sigma {:+}", c.a1, c.a2, c.b1, c.b2, c.gamma, c.sigma);
    println!("pattern residual {:.1e}", ex.residual);

    let rec = reconstruct_curvature(&geo, &fs, c);
    println!("reconstruction vs oracle: from forms {:.1e}, from coefficients {:.1e}, off support {:.1e}", rec.forms_residual, rec.coeffs_residual, rec.off_support);
    let (ric, r) = ricci_from_coeffs(&fs, c);
    let oracle = geo.curvature.ricci_values();
    println!("Ricci from coefficients vs oracle {:.1e}; r = {:.12} (oracle {:.12})", max_abs(ric.iter().zip(&oracle).map(|(a, b)| a - b)), r, geo.curvature.scalar.value());
}
