//! Star products on a (1,1) torus: associativity, leading terms and a parametrix.

use hcalc::scalar::{ExactScalar, FourierFunction};
use hcalc::symbols::builders::{p, rho_power};
use hcalc::symbols::elliptic::parametrix;
use hcalc::symbols::{CliffordWord, FoliationShape, HSymbol};

fn main() {
    let shape = FoliationShape::new(1, 1);
    let floor = -6;

    // a = e^{2πi x_1} ρ^{1/4} + p_2, b = e^{-2πi x_2} p_1
    let mut a = rho_power(shape, 1, floor);
    a = a.mul_fourier(&FourierFunction::character(vec![1, 0], ExactScalar::one()));
    a = a.add(&p(shape, 1, floor)).unwrap();
    let b = p(shape, 0, floor)
        .mul_fourier(&FourierFunction::character(vec![0, -1], ExactScalar::one()));

    let ab = a.star(&b).unwrap();
    println!("a ⋆ b =\n{}", ab);
    println!("[a, b] =\n{}", a.commutator(&b).unwrap());
    let c = rho_power(shape, -2, floor);
    let assoc = ab
        .star(&c)
        .unwrap()
        .trusted_eq(&a.star(&b.star(&c).unwrap()).unwrap());
    println!("(a ⋆ b) ⋆ c = a ⋆ (b ⋆ c): {}", assoc);

    // A Heisenberg-elliptic symbol with lower-order terms and its parametrix.
    let mut e = rho_power(shape, 4, floor);
    e.add_term(
        FourierFunction::character(vec![1, 1], ExactScalar::ratio(1, 3)),
        hcalc::symbols::monomial::Monomial::rho_power(2, 2),
        CliffordWord::ONE,
    );
    let q = parametrix(&e, floor - 4).unwrap();
    let one = e.star(&q).unwrap();
    println!(
        "e ⋆ parametrix(e) - 1 vanishes to degree {}: {}",
        one.floor(),
        one.sub(&HSymbol::one(shape, one.floor()))
            .unwrap()
            .is_zero()
    );
}
