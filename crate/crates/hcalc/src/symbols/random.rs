//! Seeded random symbols for property checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::clifford::CliffordWord;
use super::monomial::Monomial;
use super::shape::FoliationShape;
use super::symbol::HSymbol;
use crate::scalar::{ExactScalar, FourierFunction};

#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub top: i64,
    /// floor = top − depth.
    pub depth: i64,
    pub max_terms: usize,
    pub max_freq: i64,
    pub max_gamma: u32,
    /// Clifford words allowed; `even_words` restricts to even ones.
    pub words: bool,
    pub even_words: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            top: 0,
            depth: 3,
            max_terms: 3,
            max_freq: 1,
            max_gamma: 2,
            words: false,
            even_words: false,
        }
    }
}

/// Small nonzero Gaussian rational.
pub fn random_scalar(rng: &mut impl Rng) -> ExactScalar {
    let re = BigRational::new(
        BigInt::from(rng.gen_range(-4i64..=4)),
        BigInt::from(rng.gen_range(1i64..=3)),
    );
    let mut s = ExactScalar::from_rational(re);
    if rng.gen_bool(0.3) {
        s = s.add_ref(&ExactScalar::i().scale_int(rng.gen_range(-2i64..=2)));
    }
    if s.is_zero() {
        ExactScalar::one()
    } else {
        s
    }
}

pub fn random_fourier(rng: &mut impl Rng, n: usize, max_freq: i64) -> FourierFunction {
    let mut f = FourierFunction::zero(n);
    for _ in 0..rng.gen_range(1..=2) {
        let k: Vec<i64> = (0..n)
            .map(|_| rng.gen_range(-max_freq..=max_freq))
            .collect();
        f.add_term(k, random_scalar(rng));
    }
    if f.is_zero() {
        FourierFunction::one(n)
    } else {
        f
    }
}

pub fn random_word(rng: &mut impl Rng, n: usize, even: bool) -> CliffordWord {
    loop {
        let w = CliffordWord::new(rng.gen_range(0..1u32 << n), rng.gen_range(0..1u32 << n));
        if w.len() <= 2 && (!even || !w.is_odd()) {
            return w;
        }
    }
}

pub fn random_symbol(rng: &mut impl Rng, shape: FoliationShape, spec: &RandomSpec) -> HSymbol {
    let n = shape.n();
    let floor = spec.top - spec.depth;
    let mut s = HSymbol::zero(shape, spec.top, floor);
    let count = rng.gen_range(1..=spec.max_terms.max(1));
    for t in 0..count {
        let d = if t == 0 {
            spec.top
        } else {
            rng.gen_range(floor..=spec.top)
        };
        let bound = if n == 1 { 2 } else { 4 };
        let gamma: Vec<u32> = (0..n)
            .map(|i| {
                rng.gen_range(
                    0..=spec
                        .max_gamma
                        .min(if i == 0 { bound - 1 } else { u32::MAX }),
                )
            })
            .collect();
        let mono = Monomial {
            rho_q: d - shape.weighted(&gamma),
            gamma,
            log_pow: 0,
        };
        let word = if spec.words {
            random_word(rng, n, spec.even_words)
        } else {
            CliffordWord::ONE
        };
        s.add_term(random_fourier(rng, n, spec.max_freq), mono, word);
    }
    s
}
