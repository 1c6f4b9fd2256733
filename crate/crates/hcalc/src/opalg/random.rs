//! Seeded random operators for property checks.

use rand::Rng;

use super::dirac::{BarCorrection, DiracDescriptor};
use super::series::{OpKey, OpSeries};
use crate::scalar::FourierFunction;
use crate::symbols::random::{random_fourier, random_symbol, random_word, RandomSpec};
use crate::symbols::{CliffordWord, FoliationShape};

#[derive(Clone, Copy, Debug)]
pub struct RandomOpSpec {
    pub symbol: RandomSpec,
    pub terms: usize,
    pub max_deriv: u32,
    pub max_eps: u32,
    pub right_words: bool,
    pub eps_trunc: u32,
}

impl Default for RandomOpSpec {
    fn default() -> Self {
        RandomOpSpec {
            symbol: RandomSpec::default(),
            terms: 3,
            max_deriv: 1,
            max_eps: 1,
            right_words: true,
            eps_trunc: 3,
        }
    }
}

pub fn random_op(rng: &mut impl Rng, shape: FoliationShape, spec: &RandomOpSpec) -> OpSeries {
    let n = shape.n();
    let mut s = OpSeries::zero(shape, spec.eps_trunc);
    for _ in 0..rng.gen_range(1..=spec.terms.max(1)) {
        let dx = (0..n).map(|_| rng.gen_range(0..=spec.max_deriv)).collect();
        let dp = (0..n).map(|_| rng.gen_range(0..=spec.max_deriv)).collect();
        let right = if spec.right_words {
            random_word(rng, n, false)
        } else {
            CliffordWord::ONE
        };
        let key = OpKey {
            eps: rng.gen_range(0..=spec.max_eps),
            right,
            dx,
            dp,
        };
        s.insert(key, random_symbol(rng, shape, &spec.symbol));
    }
    s
}

/// Trigonometric Christoffel symbols, symmetric in the lower indices.
pub fn random_christoffel(rng: &mut impl Rng, n: usize) -> Vec<Vec<Vec<FourierFunction>>> {
    let mut g = vec![vec![vec![FourierFunction::zero(n); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                if rng.gen_bool(0.5) {
                    let f = random_fourier(rng, n, 1);
                    g[k][i][j] = f.clone();
                    g[k][j][i] = f;
                }
            }
        }
    }
    g
}

fn random_bar(rng: &mut impl Rng, n: usize) -> Vec<BarCorrection> {
    (0..rng.gen_range(0..=2))
        .map(|_| {
            let mut alpha = vec![0; n];
            for _ in 0..rng.gen_range(2..=3) {
                alpha[rng.gen_range(0..n)] += 1;
            }
            BarCorrection {
                index: rng.gen_range(0..n),
                alpha,
                coeff: random_fourier(rng, n, 1),
            }
        })
        .collect()
}

pub fn random_descriptor(
    rng: &mut impl Rng,
    shape: FoliationShape,
    affine: bool,
) -> DiracDescriptor {
    let n = shape.n();
    let bar = random_bar(rng, n);
    if affine {
        DiracDescriptor::Affine {
            christoffel: random_christoffel(rng, n),
            s: vec![],
            bar,
        }
    } else {
        DiracDescriptor::DeRham { bar }
    }
}
