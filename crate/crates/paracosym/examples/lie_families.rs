//! The four families of left-invariant structures: exact Jacobi checks,
//! classification of the resulting algebras and their Koszul curvature.

use paracosym::lie::koszul::curvature_report;
use paracosym::lie::{classify_algebra, example1_algebra, family_algebra, q, qi, Classification, Family, FamilyParams};

fn main() {
    let instances = [
        (Family::A, FamilyParams { alpha1: q(1, 2), alpha2: qi(2), sigma: 1, ..Default::default() }),
        (Family::B, FamilyParams { alpha1: qi(3), alpha2: q(-1, 3), beta1: qi(1), sigma: -1, ..Default::default() }),
        (Family::C1, FamilyParams { alpha0: qi(2), beta2: q(5, 7), sigma: 1, ..Default::default() }),
        (Family::C2, FamilyParams { alpha1: qi(1), alpha2: qi(-2), beta1: qi(1), beta2: qi(4), sigma: 1, ..Default::default() }),
        // σ + α₁β₂ − α₂β₁ = 0 makes a C2 algebra flat.
        (Family::C2, FamilyParams { alpha1: qi(1), beta2: qi(-1), sigma: 1, ..Default::default() }),
    ];
    for (family, params) in instances {
        let alg = family_algebra(family, &params).unwrap();
        println!("{family}: Jacobi residual {}, d^2 residual {}", alg.algebra.jacobi_residual(), alg.algebra.d_squared_residual());
        for b in alg.render_brackets() {
            println!("    {b}");
        }
        match classify_algebra(&alg) {
            Classification::Family { family: found, .. } => println!("  classified as {found}"),
            Classification::Rejected(why) => println!("  rejected: {why}"),
        }
        let r = curvature_report(&alg).unwrap();
        let c = &r.coeffs;
        println!(
            "  flat {}, a1 {} a2 {} b1 {} b2 {} gamma {}, r {}",
            r.flat, c.a1, c.a2, c.b1, c.b2, c.gamma, r.scalar_trace
        );
    }

    let ex = example1_algebra();
    match classify_algebra(&ex) {
        Classification::Family { family, params } => println!("Example 1 constants: {family} with sigma {}", params.sigma),
        Classification::Rejected(why) => println!("Example 1 constants rejected: {why}"),
    }
}
