//! Crossed products S_H ⋊ G by foliated torus isometries and the Radul cocycle.

pub mod flat;
pub mod group;
pub mod product;
pub mod radul;

pub use flat::{fundamental_pairing_1d, toeplitz_index_oracle_1d, winding_lift};
pub use group::{generate_group, ElementSpec, IsometryElement};
pub use product::{crossed_star, localized_residue, CrossedSymbol};
pub use radul::{leading_lift, radul_cocycle};

use thiserror::Error;

use crate::residue::ResidueError;
use crate::symbols::SymbolError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrossedError {
    #[error("shape mismatch")]
    ShapeMismatch,
    #[error("not a signed permutation")]
    NotSignedPermutation,
    #[error("permutation mixes leaf and transverse coordinates, so ρ is not preserved")]
    NonIsometricAction,
    #[error("bad translation entry {0:?}")]
    BadTranslation(String),
    #[error("translation needs modulus {needed}, session modulus is {session}")]
    ModulusMismatch { needed: u32, session: u32 },
    #[error("operation requires shape (1,0)")]
    WrongShape,
    #[error("restricted symbol is not invertible on the circle")]
    NonInvertibleSymbol,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactScalar, FourierFunction};
    use crate::symbols::builders::{character, rho_power};
    use crate::symbols::random::{random_symbol, RandomSpec};
    use crate::symbols::{FoliationShape, HSymbol};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    fn samples(shape: &FoliationShape) -> Vec<IsometryElement> {
        let t = IsometryElement::translation(vec![BigRational::new(1.into(), 4.into()); shape.n()]);
        let mut perm: Vec<usize> = (0..shape.n()).collect();
        if shape.v >= 2 {
            perm.swap(0, 1);
        }
        let mut signs = vec![1; shape.n()];
        signs[shape.n() - 1] = -1;
        let trans = (0..shape.n())
            .map(|i| {
                if i == 0 {
                    half()
                } else {
                    BigRational::from_integer(0.into())
                }
            })
            .collect();
        let r = IsometryElement::new(shape, perm, signs, trans).unwrap();
        vec![t.clone(), r.clone(), t.compose(&r)]
    }

    #[test]
    fn group_law() {
        let s = FoliationShape::new(2, 1);
        let g = samples(&s);
        let e = IsometryElement::identity(3);
        for a in &g {
            assert_eq!(a.compose(&a.inverse()), e);
            assert_eq!(a.inverse().compose(a), e);
            for b in &g {
                for c in &g {
                    assert_eq!(a.compose(b).compose(c), a.compose(&b.compose(c)));
                }
            }
        }
        assert_eq!(generate_group(3, &g[1..2]).len(), 4);
        let bad = IsometryElement::new(
            &s,
            vec![2, 1, 0],
            vec![1, 1, 1],
            vec![BigRational::from_integer(0.into()); 3],
        );
        assert_eq!(bad, Err(CrossedError::NonIsometricAction));
    }

    #[test]
    fn action_is_multiplicative_and_fixes_rho() {
        let s = FoliationShape::new(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = RandomSpec {
            words: true,
            ..RandomSpec::default()
        };
        let g = samples(&s);
        let rho = rho_power(s, 4, -2);
        for a in &g {
            assert_eq!(a.act_on_symbol(&rho), rho);
            for b in &g {
                let x = random_symbol(&mut rng, s, &spec);
                let y = random_symbol(&mut rng, s, &spec);
                let lhs = a.compose(b).act_on_symbol(&x);
                assert_eq!(lhs, a.act_on_symbol(&b.act_on_symbol(&x)));
                let xy = x.star(&y).unwrap();
                assert_eq!(
                    a.act_on_symbol(&xy),
                    a.act_on_symbol(&x).star(&a.act_on_symbol(&y)).unwrap()
                );
            }
        }
    }

    #[test]
    fn translation_twist() {
        let s = FoliationShape::new(1, 0);
        let g = IsometryElement::translation(vec![half()]);
        let e1 = CrossedSymbol::single(g.clone(), character(s, vec![1], -2));
        let sq = crossed_star(&e1, &e1).unwrap();
        let expected = CrossedSymbol::single(g.compose(&g), character(s, vec![2], -2).neg());
        assert_eq!(sq, expected);
        let u = CrossedSymbol::single(g.clone(), HSymbol::one(s, -2));
        let v = CrossedSymbol::single(g.inverse(), HSymbol::one(s, -2));
        assert_eq!(
            crossed_star(&u, &v).unwrap(),
            radul::at_unit(HSymbol::one(s, -2))
        );
    }

    #[test]
    fn localized_residue_sees_only_unit() {
        let s = FoliationShape::new(1, 0);
        let a = rho_power(s, -1, -4);
        assert_eq!(
            localized_residue(&radul::at_unit(a.clone())).unwrap(),
            ExactScalar::pi().inv().unwrap()
        );
        let g = IsometryElement::translation(vec![half()]);
        assert!(localized_residue(&CrossedSymbol::single(g, a))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn radul_examples() {
        let s = FoliationShape::new(1, 0);
        let g = IsometryElement::translation(vec![half()]);
        let one = HSymbol::one(s, -3);
        let u = CrossedSymbol::single(g.clone(), one.clone());
        let v = CrossedSymbol::single(g.inverse(), one.clone());
        assert!(radul_cocycle(&u, &v).unwrap().is_zero());
        let w = CrossedSymbol::single(g.clone(), character(s, vec![1], -3));
        assert!(radul_cocycle(
            &w,
            &CrossedSymbol::single(g.clone(), character(s, vec![-1], -3))
        )
        .unwrap()
        .is_zero());
        let (a0, a1) = winding_lift(1, -3);
        let phi = radul_cocycle(&radul::at_unit(a0.clone()), &radul::at_unit(a1.clone())).unwrap();
        assert_eq!(phi, ExactScalar::one());
        let pairing = fundamental_pairing_1d(&a0, &a1).unwrap();
        assert_eq!(phi, pairing.mul_ref(&ExactScalar::i().neg_ref()));
        assert_eq!(toeplitz_index_oracle_1d(&a1, 32).unwrap(), -1);
    }

    #[test]
    fn leading_lift_rejects_lower_order() {
        let s = FoliationShape::new(1, 0);
        let f = HSymbol::from_fourier(FourierFunction::one(1), s, -2);
        assert_eq!(leading_lift(&f, -4).unwrap().floor(), -4);
        assert!(leading_lift(&rho_power(s, -1, -4), -4).is_err());
    }
}
