//! The Mehler contraction against the Todd series for random rational matrices.

use std::time::Instant;

use hcalc::opalg::{mehler_bracket, todd_series};
use hcalc::verify::eps_matrix;
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    let order = 6;
    for d in 1..=3usize {
        let r0: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        BigRational::new(
                            BigInt::from((i * 3 + j * 5) as i64 % 7 - 3),
                            BigInt::from(2),
                        )
                    })
                    .collect()
            })
            .collect();
        let r = eps_matrix(&r0, order);
        let t = Instant::now();
        let m = mehler_bracket(&r, order).expect("mehler");
        let tm = t.elapsed();
        let t = Instant::now();
        let td = todd_series(&r, order).expect("todd");
        println!(
            "{}x{}: equal {}  (mehler {:.2?}, todd {:.2?})",
            d,
            d,
            m == td,
            tm,
            t.elapsed()
        );
        for (k, c) in td.coeffs.iter().enumerate() {
            println!("  eps^{}: {}", k, c);
        }
    }
}
