//! [L, b]_⋆ with L = (1/4) log ρ, the formal symbol of log Δ_H^{1/4}.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::clifford::CliffordWord;
use super::monomial::Monomial;
use super::shape::FoliationShape;
use super::symbol::HSymbol;
use super::SymbolError;
use crate::scalar::{ExactScalar, FourierFunction};

/// (1/4) log ρ as a symbol nominally of degree 0.
pub fn log_symbol(shape: FoliationShape, floor: i64) -> HSymbol {
    let mut s = HSymbol::zero(shape, 0, floor.min(0));
    let quarter = ExactScalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(4)));
    s.add_term(
        FourierFunction::constant(shape.n(), quarter),
        Monomial::log_rho(shape.n()),
        CliffordWord::ONE,
    );
    s
}

/// L ⋆ b − b ⋆ L; classical, of top b.top and floor b.floor.
pub fn log_commutator(b: &HSymbol) -> Result<HSymbol, SymbolError> {
    if !b.is_classical() {
        return Err(SymbolError::NotClassical);
    }
    let l = log_symbol(b.shape(), b.floor() - b.top());
    let c = l.star(b)?.sub(&b.star(&l)?)?;
    if !c.is_classical() {
        return Err(SymbolError::NotClassical);
    }
    Ok(c.truncate(b.floor()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::builders::{build, character, BuilderKind};

    /// Σ_{|α|≥1} ((−i)^{|α|}/α!) ∂_p^α L ∂_x^α b by repeated single derivatives (1-D).
    fn direct_1d(b: &HSymbol, max: u32) -> HSymbol {
        let s = b.shape();
        let mut out = HSymbol::zero(s, b.top(), b.floor());
        let mut dl = log_symbol(s, b.floor() - b.top());
        let mut db = b.clone();
        let mut fact = 1i64;
        for k in 1..=max {
            dl = dl.deriv_p(0);
            db = db.deriv_x(0);
            fact *= k as i64;
            let c = ExactScalar::i()
                .neg_ref()
                .pow(k)
                .scale(&BigRational::new(1.into(), fact.into()));
            let term = dl.pointwise_mul(&db).unwrap().scale(&c);
            out = out.add(&term.with_top(b.top())).unwrap();
        }
        out
    }

    #[test]
    fn constants_and_x_independent() {
        let s = FoliationShape::new(1, 1);
        assert!(log_commutator(&HSymbol::one(s, -4)).unwrap().is_zero());
        let q = build(BuilderKind::Q1, s, -4).unwrap();
        assert!(log_commutator(&q).unwrap().is_zero());
    }

    #[test]
    fn character_in_one_dimension() {
        let s = FoliationShape::new(1, 0);
        let b = character(s, vec![1], -3);
        let c = log_commutator(&b).unwrap();
        let pi = ExactScalar::pi();
        let e = |k: &ExactScalar| FourierFunction::character(vec![1], k.clone());
        let mut expect = HSymbol::zero(s, 0, -3);
        // 2π e p^3 ρ^{-1} and −2π² e p^2 ρ^{-1}
        expect.add_term(
            e(&pi.scale_int(2)),
            Monomial {
                gamma: vec![3],
                rho_q: -4,
                log_pow: 0,
            },
            CliffordWord::ONE,
        );
        expect.add_term(
            e(&pi.pow(2).scale_int(-2)),
            Monomial {
                gamma: vec![2],
                rho_q: -4,
                log_pow: 0,
            },
            CliffordWord::ONE,
        );
        assert!(c.truncate(-2).trusted_eq(&expect.truncate(-2)), "{}", c);
        assert!(c.trusted_eq(&direct_1d(&b, 4)));
    }
}
