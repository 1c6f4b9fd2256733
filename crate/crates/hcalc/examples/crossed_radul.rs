//! The crossed product by isometries, the Radul cocycle and the index on the circle.

use hcalc::crossed::radul::at_unit;
use hcalc::crossed::{
    crossed_star, fundamental_pairing_1d, localized_residue, radul_cocycle,
    toeplitz_index_oracle_1d, winding_lift, CrossedSymbol,
};
use hcalc::symbols::random::{random_symbol, RandomSpec};
use hcalc::symbols::FoliationShape;
use hcalc::verify::group_samples;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let shape = FoliationShape::new(2, 1);
    let group = group_samples(&shape).pop().unwrap();
    println!("group of order {}", group.len());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = RandomSpec {
        top: 0,
        depth: shape.q() + 2,
        ..RandomSpec::default()
    };
    let mut a = CrossedSymbol::zero(shape);
    let mut b = CrossedSymbol::zero(shape);
    for g in group.iter().take(3) {
        a.insert(g.clone(), random_symbol(&mut rng, shape, &spec));
        b.insert(g.clone(), random_symbol(&mut rng, shape, &spec));
    }
    let ab = crossed_star(&a, &b).unwrap();
    let ba = crossed_star(&b, &a).unwrap();
    println!(
        "localized residue of AB = {}",
        localized_residue(&ab).unwrap()
    );
    println!(
        "localized residue of AB - BA = {}",
        localized_residue(&ab.sub(&ba).unwrap()).unwrap()
    );

    for w in -2..=2 {
        let (a0, a1) = winding_lift(w, -3);
        let phi = radul_cocycle(&at_unit(a0.clone()), &at_unit(a1.clone())).unwrap();
        let pairing = fundamental_pairing_1d(&a0, &a1).unwrap();
        let index = toeplitz_index_oracle_1d(&a1, 48).unwrap();
        println!(
            "winding {:>2}: phi = {:<12} pairing = {:<12} Toeplitz index = {}",
            w,
            phi.to_string(),
            pairing.to_string(),
            index
        );
    }
}
