use num_bigint::BigInt;
use num_rational::BigRational;

use super::clifford::CliffordWord;
use super::monomial::Monomial;
use super::shape::FoliationShape;
use super::symbol::HSymbol;
use super::SymbolError;
use crate::scalar::{ExactScalar, FourierFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuilderKind {
    Rho,
    Q1,
    /// One-based coordinate index.
    ChiPlus(usize),
    SubLaplacian,
}

/// Standard symbols, exact down to `floor`.
pub fn build(kind: BuilderKind, shape: FoliationShape, floor: i64) -> Result<HSymbol, SymbolError> {
    match kind {
        BuilderKind::Rho | BuilderKind::SubLaplacian => Ok(rho_power(shape, 4, floor)),
        BuilderKind::Q1 => Ok(rho_power(shape, 1, floor)),
        BuilderKind::ChiPlus(i) => {
            if i == 0 || i > shape.n() {
                return Err(SymbolError::BadIndex {
                    index: i,
                    n: shape.n(),
                });
            }
            Ok(chi_plus(shape, i - 1, floor))
        }
    }
}

/// ρ^{q/4}.
pub fn rho_power(shape: FoliationShape, q: i64, floor: i64) -> HSymbol {
    let mut s = HSymbol::zero(shape, q, floor.min(q));
    s.add_term(
        FourierFunction::one(shape.n()),
        Monomial::rho_power(shape.n(), q),
        CliffordWord::ONE,
    );
    s
}

/// c · p^γ ρ^{q/4} · w with constant coefficient.
pub fn monomial(
    shape: FoliationShape,
    c: ExactScalar,
    gamma: Vec<u32>,
    q: i64,
    w: CliffordWord,
    floor: i64,
) -> HSymbol {
    let m = Monomial {
        gamma,
        rho_q: q,
        log_pow: 0,
    };
    let d = m.degree(&shape);
    let mut s = HSymbol::zero(shape, d, floor.min(d));
    s.add_term(FourierFunction::constant(shape.n(), c), m, w);
    s
}

/// p_i, zero-based.
pub fn p(shape: FoliationShape, i: usize, floor: i64) -> HSymbol {
    let mut g = vec![0; shape.n()];
    g[i] = 1;
    monomial(shape, ExactScalar::one(), g, 0, CliffordWord::ONE, floor)
}

/// e^{2πik·x}.
pub fn character(shape: FoliationShape, k: Vec<i64>, floor: i64) -> HSymbol {
    HSymbol::from_fourier(
        FourierFunction::character(k, ExactScalar::one()),
        shape,
        floor,
    )
}

/// (1 + p_i ρ^{−w_i/4})/2, zero-based i.
pub fn chi_plus(shape: FoliationShape, i: usize, floor: i64) -> HSymbol {
    let half = ExactScalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
    let n = shape.n();
    let mut s = HSymbol::zero(shape, 0, floor.min(0));
    s.add_term(
        FourierFunction::constant(n, half.clone()),
        Monomial::one(n),
        CliffordWord::ONE,
    );
    let mut g = vec![0; n];
    g[i] = 1;
    let m = Monomial {
        gamma: g,
        rho_q: -shape.weight(i),
        log_pow: 0,
    };
    s.add_term(FourierFunction::constant(n, half), m, CliffordWord::ONE);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_quartic_plus_quadratic() {
        let s = FoliationShape::new(1, 1);
        let r = build(BuilderKind::Rho, s, 0).unwrap();
        // p_1^4 + p_2^2 reduces to the single canonical term ρ.
        let mut direct = monomial(s, ExactScalar::one(), vec![4, 0], 0, CliffordWord::ONE, 0);
        direct = direct
            .add(&monomial(
                s,
                ExactScalar::one(),
                vec![0, 2],
                0,
                CliffordWord::ONE,
                0,
            ))
            .unwrap();
        assert!(direct.trusted_eq(&r));
        assert_eq!(r.num_terms(), 1);
    }

    #[test]
    fn q1_fourth_power() {
        for s in [
            FoliationShape::new(1, 0),
            FoliationShape::new(1, 1),
            FoliationShape::new(2, 1),
        ] {
            let q1 = build(BuilderKind::Q1, s, -6).unwrap();
            let p4 = q1.pow(4).unwrap();
            assert!(p4.trusted_eq(&build(BuilderKind::Rho, s, -3).unwrap()));
        }
    }

    #[test]
    fn chi_plus_idempotent_in_one_dimension() {
        let s = FoliationShape::new(1, 0);
        let c = build(BuilderKind::ChiPlus(1), s, -4).unwrap();
        assert!(c.star(&c).unwrap().trusted_eq(&c));
        assert_eq!(
            build(BuilderKind::ChiPlus(2), s, 0),
            Err(SymbolError::BadIndex { index: 2, n: 1 })
        );
    }
}
