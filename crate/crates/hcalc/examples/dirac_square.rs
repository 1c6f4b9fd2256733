//! Squares of Dirac operators: generalized Laplacian check and curvature.

use hcalc::opalg::random::random_christoffel;
use hcalc::opalg::{
    curvature_tensor, dirac, dirac_square, is_generalized_laplacian, DiracDescriptor,
};
use hcalc::symbols::FoliationShape;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let shape = FoliationShape::new(2, 0);
    let flat = dirac_square(&DiracDescriptor::DeRham { bar: vec![] }, shape, 3, -12).unwrap();
    println!(
        "de Rham: -D² generalized Laplacian: {}",
        is_generalized_laplacian(&flat)
    );

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_christoffel(&mut rng, shape.n());
    let desc = DiracDescriptor::Affine {
        christoffel: g.clone(),
        s: vec![],
        bar: vec![],
    };
    let sq = dirac_square(&desc, shape, 3, -12).unwrap();
    let r = curvature_tensor(&g).unwrap();
    println!(
        "affine: -D² generalized Laplacian: {}",
        is_generalized_laplacian(&sq)
    );
    println!(
        "ε² curvature coefficients match R^k_lij: {}",
        dirac::curvature_from_square(&sq) == r
    );
    println!(
        "Clifford curvature term matches R^k_lij: {}",
        dirac::clifford_curvature_from_square(&sq) == r
    );
    for (k, a) in r.iter().enumerate() {
        for (l, b) in a.iter().enumerate() {
            for (i, c) in b.iter().enumerate() {
                for (j, f) in c.iter().enumerate() {
                    if i < j && !f.is_zero() {
                        println!("  R^{}_{}{}{} = {}", k + 1, l + 1, i + 1, j + 1, f);
                    }
                }
            }
        }
    }
}
