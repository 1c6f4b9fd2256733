use num_rational::BigRational;

use super::moments::sphere_moment;
use super::ResidueError;
use crate::scalar::ExactScalar;
use crate::symbols::{CliffordWord, HSymbol};

/// (2π)^{−n} ∫_{T^n} ∫_{S_H} τ(σ_{−Q}) with τ the fiber trace normalized by 2^n.
pub fn wres(a: &HSymbol) -> Result<ExactScalar, ResidueError> {
    wres_with(a, |w| w.normalized_trace())
}

/// Residue with a caller-supplied linear functional on Clifford words.
pub fn wres_with(
    a: &HSymbol,
    word_trace: impl Fn(&CliffordWord) -> BigRational,
) -> Result<ExactScalar, ResidueError> {
    let shape = a.shape();
    let d = -shape.q();
    if d > a.top() {
        return Ok(ExactScalar::zero());
    }
    if d < a.floor() {
        return Err(ResidueError::TruncationTooShallow {
            needed: d,
            floor: a.floor(),
        });
    }
    let mut acc = ExactScalar::zero();
    for (k, f) in a.component_terms(d) {
        if k.mono.log_pow > 0 {
            return Err(ResidueError::LogResidueUnsupported);
        }
        let t = word_trace(&k.word);
        if num_traits::Zero::is_zero(&t) {
            continue;
        }
        let c = f.torus_integral();
        if c.is_zero() {
            continue;
        }
        acc.add_assign_ref(&c.mul_ref(&sphere_moment(&k.mono.gamma, &shape)).scale(&t));
    }
    let two_pi = ExactScalar::pi().scale_int(2);
    Ok(acc.mul_ref(&two_pi.pow(shape.n() as u32).inv().expect("monomial")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FourierFunction;
    use crate::symbols::builders::rho_power;
    use crate::symbols::FoliationShape;

    #[test]
    fn one_dimensional_inverse_q1() {
        let s = FoliationShape::new(1, 0);
        let r = wres(&rho_power(s, -1, -3)).unwrap();
        assert_eq!(r, ExactScalar::pi().inv().unwrap());
        assert_eq!(r.to_string(), "(1/1)·pi^(-2/2)");
    }

    #[test]
    fn vanishing_cases() {
        let s = FoliationShape::new(1, 1);
        assert!(wres(&rho_power(s, 0, -4)).unwrap().is_zero());
        let e = rho_power(s, -3, -5)
            .mul_fourier(&FourierFunction::character(vec![1, 0], ExactScalar::one()));
        assert!(wres(&e).unwrap().is_zero());
        assert_eq!(
            wres(&rho_power(s, 2, -2)),
            Err(ResidueError::TruncationTooShallow {
                needed: -3,
                floor: -2
            })
        );
    }
}
