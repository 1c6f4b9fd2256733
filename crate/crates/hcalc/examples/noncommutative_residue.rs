//! Residues of symbols and the residue of a log commutator.

use hcalc::residue::wres;
use hcalc::scalar::{ExactScalar, FourierFunction};
use hcalc::symbols::builders::{p, rho_power};
use hcalc::symbols::{log_commutator, FoliationShape};

fn main() {
    for shape in [
        FoliationShape::new(1, 0),
        FoliationShape::new(1, 1),
        FoliationShape::new(2, 1),
    ] {
        let q = shape.q();
        let a = rho_power(shape, -q, -q - 2);
        let r = wres(&a).unwrap();
        println!(
            "{}: wres(ρ^(-Q/4)) = {}  ≈ {}",
            shape,
            r,
            r.numeric_eval(15)
        );
    }

    let shape = FoliationShape::new(1, 1);
    let s =
        p(shape, 0, -8).mul_fourier(&FourierFunction::character(vec![1, 0], ExactScalar::one()));
    let b = rho_power(shape, -3, -8)
        .mul_fourier(&FourierFunction::character(vec![-1, 0], ExactScalar::one()));
    let c = log_commutator(&s).unwrap();
    let r = wres(&b.star(&c).unwrap()).unwrap();
    println!("wres(b ⋆ [log ρ, s]) = {}", r);
}
