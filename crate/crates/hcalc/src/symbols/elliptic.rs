//! Heisenberg ellipticity of monomial leading symbols and Neumann parametrices.

use super::clifford::CliffordWord;
use super::monomial::Monomial;
use super::symbol::HSymbol;
use super::SymbolError;
use crate::scalar::FourierFunction;

/// Single-term leading data (character, scalar, monomial), or an error when
/// the leading component is outside the decidable class.
fn leading_monomial(
    a: &HSymbol,
) -> Result<Option<(Vec<i64>, crate::scalar::ExactScalar, Monomial)>, SymbolError> {
    if !a.is_classical() {
        return Err(SymbolError::NotClassical);
    }
    let terms: Vec<_> = a.component_terms(a.top()).collect();
    match terms.as_slice() {
        [] => Ok(None),
        [(k, f)] => {
            if !k.word.is_one() {
                return Err(SymbolError::UnsupportedLeading);
            }
            let (freq, c) = f.as_character().ok_or(SymbolError::UnsupportedLeading)?;
            let cinv = c.inv().map_err(|_| SymbolError::UnsupportedLeading)?;
            Ok(Some((freq.to_vec(), cinv, k.mono.clone())))
        }
        _ => Err(SymbolError::UnsupportedLeading),
    }
}

/// Whether the principal symbol is invertible away from p = 0.
pub fn is_heisenberg_elliptic(a: &HSymbol) -> Result<bool, SymbolError> {
    let Some((_, _, m)) = leading_monomial(a)? else {
        return Ok(false);
    };
    // In one dimension p = ±ρ^{1/4} is invertible; otherwise p_i vanishes on the sphere.
    Ok(a.shape().n() == 1 || m.gamma.iter().all(|&g| g == 0))
}

/// Inverse of the leading term, a one-term symbol of degree −top.
pub fn leading_inverse(a: &HSymbol, floor: i64) -> Result<HSymbol, SymbolError> {
    let shape = a.shape();
    let Some((freq, cinv, m)) = leading_monomial(a)? else {
        return Err(SymbolError::NotElliptic);
    };
    let inv_mono = if m.gamma.iter().all(|&g| g == 0) {
        Monomial::rho_power(shape.n(), -m.rho_q)
    } else if shape.n() == 1 {
        // (p ρ^{q/4})^{-1} = p ρ^{-(q+2)/4}
        Monomial {
            gamma: vec![1],
            rho_q: -m.rho_q - 2,
            log_pow: 0,
        }
    } else {
        return Err(SymbolError::NotElliptic);
    };
    let neg: Vec<i64> = freq.iter().map(|k| -k).collect();
    let top = -a.top();
    let mut b = HSymbol::zero(shape, top, floor.min(top));
    b.add_term(
        FourierFunction::character(neg, cinv),
        inv_mono,
        CliffordWord::ONE,
    );
    Ok(b)
}

/// b with a ⋆ b = b ⋆ a = 1 on all degrees ≥ floor.
pub fn parametrix(a: &HSymbol, floor: i64) -> Result<HSymbol, SymbolError> {
    if !is_heisenberg_elliptic(a)? {
        return Err(SymbolError::NotElliptic);
    }
    let shape = a.shape();
    let m = a.top();
    let b0 = leading_inverse(a, floor - m)?;
    let r = HSymbol::one(shape, floor).sub(&a.star(&b0)?)?.trim_top();
    debug_assert!(r.is_zero() || r.top() < 0);
    let mut sum = HSymbol::one(shape, r.floor());
    let mut power = sum.clone();
    loop {
        power = power.star(&r)?.trim_top();
        if power.is_zero() || power.top() < r.floor() {
            break;
        }
        power = power.truncate(r.floor());
        sum = sum.add(&power)?;
    }
    b0.star(&sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use crate::symbols::builders::{build, p, BuilderKind};
    use crate::symbols::FoliationShape;

    #[test]
    fn q1_inverse_is_pointwise() {
        let s = FoliationShape::new(1, 1);
        let q1 = build(BuilderKind::Q1, s, -8).unwrap();
        let b = parametrix(&q1, -6).unwrap();
        assert_eq!(b.num_terms(), 1);
        let t = &b.terms()[0];
        assert_eq!((t.rho_quarter, t.gamma.clone()), (-1, vec![0, 0]));
    }

    #[test]
    fn ellipticity_examples() {
        let s = FoliationShape::new(1, 1);
        let q1 = build(BuilderKind::Q1, s, 0).unwrap();
        assert_eq!(is_heisenberg_elliptic(&q1), Ok(true));
        let e = q1.mul_fourier(&FourierFunction::character(vec![1, 0], ExactScalar::one()));
        assert_eq!(is_heisenberg_elliptic(&e), Ok(true));
        let f = FourierFunction::one(2)
            .add(&FourierFunction::character(vec![1, 0], ExactScalar::one()));
        assert_eq!(
            is_heisenberg_elliptic(&q1.mul_fourier(&f)),
            Err(SymbolError::UnsupportedLeading)
        );
        assert_eq!(parametrix(&p(s, 0, -3), -3), Err(SymbolError::NotElliptic));
        // In one dimension p_1 = ±ρ^{1/4} is invertible.
        let s1 = FoliationShape::new(1, 0);
        assert_eq!(is_heisenberg_elliptic(&p(s1, 0, 0)), Ok(true));
    }

    #[test]
    fn two_sided_inverse() {
        let s = FoliationShape::new(1, 1);
        let a = build(BuilderKind::Rho, s, -4)
            .unwrap()
            .add(
                &p(s, 0, -4)
                    .mul_fourier(&FourierFunction::character(vec![1, 0], ExactScalar::one()))
                    .with_top(4),
            )
            .unwrap();
        let b = parametrix(&a, -3).unwrap();
        let one = HSymbol::one(s, -3);
        let ab = a.star(&b).unwrap();
        let ba = b.star(&a).unwrap();
        assert!(ab.floor() <= -3 && ba.floor() <= -3);
        assert!(ab.trusted_eq(&one), "{}", ab);
        assert!(ba.trusted_eq(&one), "{}", ba);
    }
}
