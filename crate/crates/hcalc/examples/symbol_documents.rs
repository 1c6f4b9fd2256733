//! Writes a few symbol documents and reads them back.

use hcalc::io::{parse_symbol, serialize_symbol};
use hcalc::symbols::builders::{chi_plus, rho_power};
use hcalc::symbols::FoliationShape;

fn main() {
    let shape = FoliationShape::new(1, 0);
    for (name, a) in [
        ("rho^(-1/4)", rho_power(shape, -1, -1)),
        ("chi_plus", chi_plus(shape, 0, -4)),
    ] {
        let text = serialize_symbol(&a);
        assert_eq!(parse_symbol(&text).unwrap(), a);
        println!("# {}\n{}", name, text);
    }
}
