//! The six-dimensional isotropy algebra of the flat Example 1 model: its
//! bracket table, lower central series and Lie-derivative checks.

use paracosym::lie::isotropy::{example1_field, isotropy_algebra_s, isotropy_generator, killing_residuals};
use num_traits::Zero;
use paracosym::models::ChartModel;

fn main() {
    let s = isotropy_algebra_s().unwrap();
    for (i, j, b) in s.algebra.nonzero_brackets() {
        let terms: Vec<String> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| format!("{c} K{}", k + 1)).collect();
        println!("[K{}, K{}] = {}", i + 1, j + 1, terms.join(" + "));
    }
    let dims: Vec<usize> = s.algebra.lower_central_series().iter().map(Vec::len).collect();
    println!("lower central series dimensions {dims:?}");

    let model = ChartModel::example1();
    let pts = model.sample_points(20, 42, [-0.9, 0.9]);
    for (i, f) in s.fields.iter().enumerate() {
        let r = killing_residuals(&model, &example1_field(f), &pts).unwrap();
        println!("K{}: max |L g|, |L phi|, |L eta|, |L xi| = {:.1e}", i + 1, r.max());
    }

    // On the flat family the isotropy is generated by one explicit field.
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/flat_unit_alpha.json");
    let (_, flat) = paracosym::cli::load_config(path.as_ref()).unwrap();
    let k = isotropy_generator(&flat).unwrap();
    let pts = flat.sample_points(20, 42, [-0.9, 0.9]);
    println!("flat generator: max Lie-derivative residual {:.1e}", killing_residuals(&flat, &k, &pts).unwrap().max());
}
