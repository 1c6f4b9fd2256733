//! Exact Heisenberg sphere moments against the annulus cubature oracle.

use hcalc::residue::{annulus_oracle, sphere_moment};
use hcalc::symbols::FoliationShape;

fn even_multi_indices(shape: &FoliationShape, max: i64) -> Vec<Vec<u32>> {
    hcalc::symbols::shape::multi_indices(shape, max)
        .into_iter()
        .filter(|g| g.iter().all(|x| x % 2 == 0))
        .collect()
}

fn main() {
    for shape in [
        FoliationShape::new(1, 0),
        FoliationShape::new(1, 1),
        FoliationShape::new(2, 1),
    ] {
        for gamma in even_multi_indices(&shape, 8) {
            let exact = sphere_moment(&gamma, &shape);
            let t = std::time::Instant::now();
            let num = annulus_oracle(&gamma, &shape, 1e-9).expect("cubature");
            let ev: f64 = exact.numeric_eval(20).re.parse().unwrap();
            println!(
                "{} γ={:?}: {}  ≈ {:.12}  oracle {:.12}  |Δ|={:.1e}  ({:.2?})",
                shape,
                gamma,
                exact,
                ev,
                num,
                (ev - num).abs(),
                t.elapsed()
            );
        }
    }
}
