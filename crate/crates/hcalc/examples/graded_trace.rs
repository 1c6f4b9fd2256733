//! The graded trace on heat-type elements and its reduction to the residue.

use hcalc::opalg::{
    duhamel_exp, op_compose, tr_s, GeneralizedLaplacian, OpKey, OpSeries, TraceClassElement,
};
use hcalc::residue::wres;
use hcalc::scalar::{ExactScalar, FourierFunction};
use hcalc::symbols::builders::{p, rho_power};
use hcalc::symbols::{CliffordWord, FoliationShape};

fn main() {
    let shape = FoliationShape::new(1, 1);
    let n = shape.n();
    let q = shape.q();
    let trunc = n as u32 + 2;
    let floor = -q - 3;

    // exp(Δ + ε p·∂_p) relative to the flat Laplacian.
    let flat = GeneralizedLaplacian::flat(shape, trunc, floor);
    let mut pdp = OpSeries::zero(shape, trunc);
    for j in 0..n {
        let mut dp = vec![0; n];
        dp[j] = 1;
        pdp.insert(
            OpKey {
                eps: 1,
                right: CliffordWord::ONE,
                dx: vec![0; n],
                dp,
            },
            p(shape, j, floor),
        );
    }
    let heat = duhamel_exp(&flat, &pdp, floor).unwrap();

    let a = rho_power(shape, -q, floor)
        .add(
            &rho_power(shape, -q + 1, floor).mul_fourier(&FourierFunction::character(
                vec![0, 1],
                ExactScalar::ratio(2, 3),
            )),
        )
        .unwrap();
    let mut pre = OpSeries::zero(shape, trunc);
    pre.insert(
        OpKey {
            eps: n as u32,
            right: CliffordWord::top(n),
            ..OpKey::plain(n)
        },
        a.clone(),
    );
    let t = TraceClassElement::new(op_compose(&pre, &heat.prefactor).unwrap());
    println!("Tr_s = {}", tr_s(&t).unwrap());
    println!("wres = {}", wres(&a).unwrap());

    let d = OpSeries::left(p(shape, 0, floor), trunc);
    println!(
        "Tr_s([p_1, t]) = {}",
        tr_s(&t.commutator_with(&d, floor).unwrap()).unwrap()
    );
}
