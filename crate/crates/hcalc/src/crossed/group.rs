//! Signed block permutations with rational translations of the foliated torus.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::CrossedError;
use crate::scalar::{ExactScalar, FourierFunction};
use crate::symbols::clifford::{generator_product, Generator};
use crate::symbols::{CliffordWord, FoliationShape, HSymbol, Monomial};

/// x·g = P x + b with (P x)_i = s_i x_{π(i)}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsometryElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
    trans: Vec<BigRational>,
}

fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl IsometryElement {
    pub fn identity(n: usize) -> Self {
        IsometryElement {
            perm: (0..n).collect(),
            signs: vec![1; n],
            trans: vec![BigRational::zero(); n],
        }
    }

    /// Validates block preservation, which is exactly ρ-invariance.
    pub fn new(
        shape: &FoliationShape,
        perm: Vec<usize>,
        signs: Vec<i8>,
        trans: Vec<BigRational>,
    ) -> Result<Self, CrossedError> {
        let n = shape.n();
        if perm.len() != n || signs.len() != n || trans.len() != n {
            return Err(CrossedError::ShapeMismatch);
        }
        let distinct: BTreeSet<_> = perm.iter().collect();
        if distinct.len() != n || perm.iter().any(|&j| j >= n) || signs.iter().any(|s| s.abs() != 1)
        {
            return Err(CrossedError::NotSignedPermutation);
        }
        if perm
            .iter()
            .enumerate()
            .any(|(i, &j)| (i < shape.v) != (j < shape.v))
        {
            return Err(CrossedError::NonIsometricAction);
        }
        Ok(IsometryElement {
            perm,
            signs,
            trans: trans.iter().map(frac).collect(),
        })
    }

    pub fn translation(trans: Vec<BigRational>) -> Self {
        let n = trans.len();
        IsometryElement {
            perm: (0..n).collect(),
            signs: vec![1; n],
            trans: trans.iter().map(frac).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn trans(&self) -> &[BigRational] {
        &self.trans
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n())
    }

    /// lcm(8, denominators of b).
    pub fn modulus(&self) -> u32 {
        let mut m = BigInt::from(8);
        for b in &self.trans {
            m = m.lcm(b.denom());
        }
        m.to_u32().expect("translation denominator too large")
    }

    pub fn check_modulus(&self, n: u32) -> Result<(), CrossedError> {
        if n % self.modulus() == 0 {
            Ok(())
        } else {
            Err(CrossedError::ModulusMismatch {
                needed: self.modulus(),
                session: n,
            })
        }
    }

    /// (P v)_i = s_i v_{π(i)}.
    fn apply_p(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.n())
            .map(|i| &v[self.perm[i]] * BigRational::from_integer(self.signs[i].into()))
            .collect()
    }

    /// x·(gh) = (x·g)·h.
    pub fn compose(&self, h: &IsometryElement) -> IsometryElement {
        let n = self.n();
        let perm: Vec<usize> = (0..n).map(|i| self.perm[h.perm[i]]).collect();
        let signs: Vec<i8> = (0..n).map(|i| h.signs[i] * self.signs[h.perm[i]]).collect();
        let pb = h.apply_p(&self.trans);
        let trans = pb
            .iter()
            .zip(&h.trans)
            .map(|(a, b)| frac(&(a + b)))
            .collect();
        IsometryElement { perm, signs, trans }
    }

    pub fn inverse(&self) -> IsometryElement {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        let inv = IsometryElement {
            perm,
            signs,
            trans: vec![BigRational::zero(); n],
        };
        let pb = inv.apply_p(&self.trans);
        IsometryElement {
            trans: pb.iter().map(|b| frac(&-b)).collect(),
            ..inv
        }
    }

    /// Point action on double-precision coordinates.
    pub fn act_point(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n())
            .map(|i| self.signs[i] as f64 * x[self.perm[i]] + self.trans[i].to_f64().unwrap())
            .collect()
    }

    /// c(x) ↦ c(x·g).
    pub fn act_on_fourier(&self, f: &FourierFunction) -> FourierFunction {
        let n = self.n();
        let m = self.modulus();
        let mut out = FourierFunction::zero(n);
        for (k, c) in f.coeffs() {
            // k·(Px + b) = (Pᵀk)·x + k·b
            let mut k2 = vec![0i64; n];
            let mut phase = BigRational::zero();
            for i in 0..n {
                k2[self.perm[i]] += self.signs[i] as i64 * k[i];
                phase += &self.trans[i] * BigRational::from_integer(k[i].into());
            }
            let e = frac(&phase) * BigRational::from_integer(m.into());
            debug_assert!(e.is_integer());
            let z = ExactScalar::root_of_unity(m, e.to_integer().to_i64().unwrap());
            out.add_term(k2, c.mul_ref(&z));
        }
        out
    }

    /// p^γ ↦ (Pp)^γ as (sign, exponent).
    fn act_on_gamma(&self, gamma: &[u32]) -> (i64, Vec<u32>) {
        let mut g2 = vec![0u32; self.n()];
        let mut sign = 1i64;
        for i in 0..self.n() {
            g2[self.perm[i]] += gamma[i];
            if self.signs[i] < 0 && gamma[i] % 2 == 1 {
                sign = -sign;
            }
        }
        (sign, g2)
    }

    /// ψ^i ↦ s_i ψ^{π(i)}, ψ̄_i ↦ s_i ψ̄_{π(i)}.
    pub fn act_on_word(&self, w: &CliffordWord) -> Vec<(CliffordWord, i64)> {
        let mut sign = 1i64;
        let seq: Vec<Generator> = w
            .generators()
            .into_iter()
            .map(|g| match g {
                Generator::Psi(i) => {
                    sign *= self.signs[i] as i64;
                    Generator::Psi(self.perm[i])
                }
                Generator::PsiBar(i) => {
                    sign *= self.signs[i] as i64;
                    Generator::PsiBar(self.perm[i])
                }
            })
            .collect();
        generator_product(&seq)
            .into_iter()
            .map(|(w, c)| (w, c * sign))
            .collect()
    }

    /// α_g(a)(x, p) = a(x·g, P p), the symbol of U_g A U_g^{-1}.
    pub fn act_on_symbol(&self, a: &HSymbol) -> HSymbol {
        a.map_terms(|k, f| {
            let c = self.act_on_fourier(f);
            let (s, g2) = self.act_on_gamma(&k.mono.gamma);
            let mono = Monomial {
                gamma: g2,
                rho_q: k.mono.rho_q,
                log_pow: k.mono.log_pow,
            };
            self.act_on_word(&k.word)
                .into_iter()
                .map(|(w, sw)| (c.scale(&ExactScalar::from_int(s * sw)), mono.clone(), w))
                .collect()
        })
    }
}

/// Closure of a generating set under composition.
pub fn generate_group(n: usize, gens: &[IsometryElement]) -> Vec<IsometryElement> {
    let mut seen: BTreeSet<IsometryElement> = BTreeSet::new();
    seen.insert(IsometryElement::identity(n));
    let mut frontier: Vec<IsometryElement> = vec![IsometryElement::identity(n)];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = g.compose(s);
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
            assert!(seen.len() <= 4096, "group too large");
        }
    }
    seen.into_iter().collect()
}

impl std::fmt::Display for IsometryElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = (0..self.n())
            .map(|i| {
                let s = if self.signs[i] < 0 { "-" } else { "" };
                let b = &self.trans[i];
                if b.is_zero() {
                    format!("{}x{}", s, self.perm[i] + 1)
                } else {
                    format!("{}x{}+{}", s, self.perm[i] + 1, b)
                }
            })
            .collect();
        write!(f, "x -> ({})", rows.join(", "))
    }
}

/// Serializable form: `perm` and `signs` one-based per row, `trans` as "p/q" strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
    pub trans: Vec<String>,
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(a.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl ElementSpec {
    pub fn build(&self, shape: &FoliationShape) -> Result<IsometryElement, CrossedError> {
        let perm = self
            .perm
            .iter()
            .map(|&j| j.checked_sub(1).ok_or(CrossedError::NotSignedPermutation))
            .collect::<Result<Vec<_>, _>>()?;
        let trans = self
            .trans
            .iter()
            .map(|t| parse_rational(t).ok_or(CrossedError::BadTranslation(t.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        IsometryElement::new(shape, perm, self.signs.clone(), trans)
    }

    pub fn from_element(g: &IsometryElement) -> Self {
        ElementSpec {
            perm: g.perm.iter().map(|j| j + 1).collect(),
            signs: g.signs.clone(),
            trans: g
                .trans
                .iter()
                .map(|t| {
                    if t.denom().is_one() {
                        t.numer().to_string()
                    } else {
                        t.to_string()
                    }
                })
                .collect(),
        }
    }
}
