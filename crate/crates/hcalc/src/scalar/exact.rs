//! Exact scalars in ℚ(ζ_N)[π^{±1/2}, Γ(1/4)^{±1}].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cyclo::Cyclo;
use super::numeric::{self, NumericValue};
use super::ScalarError;

pub const DEFAULT_MODULUS: u32 = 8;

/// Γ(1/4) to 40 digits, for double-precision evaluation.
pub const GAMMA_QUARTER_F64: f64 = 3.625_609_908_221_908_311_930_685_155_867_672_002_995;

/// Sum of terms c · (π^{1/2})^a · Γ(1/4)^b with c ∈ ℚ(ζ_N), keyed by (a, b).
#[derive(Clone, Debug)]
pub struct ExactScalar {
    modulus: u32,
    terms: BTreeMap<(i32, i32), Cyclo>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::zero_in(DEFAULT_MODULUS)
    }

    pub fn zero_in(modulus: u32) -> Self {
        assert!(
            modulus > 0 && modulus % 8 == 0,
            "modulus must be a positive multiple of 8"
        );
        ExactScalar {
            modulus,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_cyclo(Cyclo::one(DEFAULT_MODULUS))
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_cyclo(Cyclo::from_int(DEFAULT_MODULUS, v))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_cyclo(Cyclo::from_rational(DEFAULT_MODULUS, r))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_cyclo(c: Cyclo) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// c · (π^{1/2})^pi_half · Γ(1/4)^gamma.
    pub fn monomial(c: Cyclo, pi_half: i32, gamma: i32) -> Self {
        let mut s = Self::zero_in(c.modulus());
        if !c.is_zero() {
            s.terms.insert((pi_half, gamma), c);
        }
        s
    }

    pub fn i() -> Self {
        Self::from_cyclo(Cyclo::i(DEFAULT_MODULUS))
    }

    pub fn sqrt2() -> Self {
        Self::from_cyclo(Cyclo::sqrt2(DEFAULT_MODULUS))
    }

    /// ζ_N^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        Self::from_cyclo(Cyclo::zeta_pow(n, k))
    }

    /// π^{k/2}.
    pub fn pi_half_pow(k: i32) -> Self {
        Self::monomial(Cyclo::one(DEFAULT_MODULUS), k, 0)
    }

    pub fn pi() -> Self {
        Self::pi_half_pow(2)
    }

    /// Γ(1/4)^k.
    pub fn gamma_quarter_pow(k: i32) -> Self {
        Self::monomial(Cyclo::one(DEFAULT_MODULUS), 0, k)
    }

    /// Γ(k/4) reduced to the (π^{1/2}, Γ(1/4)) basis; k must not be a
    /// non-positive multiple of 4.
    pub fn gamma_of_quarter(k: i64) -> Result<Self, ScalarError> {
        if k <= 0 && k % 4 == 0 {
            return Err(ScalarError::GammaPole(k));
        }
        let base = k.rem_euclid(4);
        let (mut value, mut z) = match base {
            0 => (Self::one(), 4),
            1 => (Self::gamma_quarter_pow(1), 1),
            2 => (Self::pi_half_pow(1), 2),
            _ => {
                let c = Cyclo::sqrt2(DEFAULT_MODULUS);
                (Self::monomial(c, 2, -1), 3)
            }
        };
        // Γ(z/4 + 1) = (z/4) Γ(z/4).
        while z < k {
            value = value.scale(&BigRational::new(z.into(), 4.into()));
            z += 4;
        }
        while z > k {
            z -= 4;
            value = value.scale(&BigRational::new(4.into(), z.into()));
        }
        Ok(value)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Re-expresses every coefficient in ℚ(ζ_m), m a multiple of the modulus.
    pub fn lift(&self, m: u32) -> Self {
        let modulus = self.modulus.lcm(&m);
        ExactScalar {
            modulus,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.lift(modulus)))
                .collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Cyclo)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    /// Some(r) when the scalar is a plain rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.get(&(0, 0)).and_then(|c| c.as_rational())
    }

    /// The single term (coefficient, piHalfExp, gammaQuarterExp), if any.
    pub fn single_term(&self) -> Option<(&Cyclo, i32, i32)> {
        if self.terms.len() == 1 {
            let ((a, b), c) = self.terms.iter().next().unwrap();
            Some((c, *a, *b))
        } else {
            None
        }
    }

    fn insert_add(&mut self, key: (i32, i32), c: Cyclo) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        let m = self.modulus.lcm(&other.modulus);
        if m != self.modulus {
            *self = self.lift(m);
        }
        for (k, c) in &other.terms {
            self.insert_add(*k, c.clone());
        }
    }

    pub fn neg_ref(&self) -> Self {
        ExactScalar {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero_in(self.modulus.lcm(&other.modulus));
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.insert_add((a1 + a2, b1 + b2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero_in(self.modulus);
        }
        ExactScalar {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(k, c)| (*k, c.scale(r))).collect(),
        }
    }

    pub fn scale_int(&self, v: i64) -> Self {
        self.scale(&BigRational::from_integer(v.into()))
    }

    pub fn mul_cyclo(&self, z: &Cyclo) -> Self {
        let mut out = Self::zero_in(self.modulus.lcm(&z.modulus()));
        for (k, c) in &self.terms {
            out.insert_add(*k, c.mul(z));
        }
        out
    }

    /// Inverse of a single nonzero term.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        let (c, a, b) = self.single_term().ok_or(ScalarError::InvNotSupported)?;
        let ci = c.inv().ok_or(ScalarError::InvNotSupported)?;
        Ok(Self::monomial(ci, -a, -b))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one().lift(self.modulus);
        for _ in 0..e {
            out = out.mul_ref(self);
        }
        out
    }

    /// Complex conjugate (π and Γ(1/4) are real).
    pub fn conj(&self) -> Self {
        ExactScalar {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect(),
        }
    }

    /// Double-precision embedding.
    pub fn to_complex(&self) -> Complex64 {
        let sp = std::f64::consts::PI.sqrt();
        self.terms
            .iter()
            .map(|((a, b), c)| c.to_complex() * sp.powi(*a) * GAMMA_QUARTER_F64.powi(*b))
            .sum()
    }

    /// Evaluation to `digits` significant decimal digits.
    pub fn numeric_eval(&self, digits: usize) -> NumericValue {
        numeric::eval(self, digits)
    }

    /// Equality check by high-precision evaluation, for use where the
    /// algebraic-independence assumption is in doubt.
    pub fn numerically_equal(&self, other: &Self, digits: usize) -> bool {
        numeric::is_negligible(&self.sub_ref(other), digits)
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((k1, c1), (k2, c2))| k1 == k2 && c1 == c2)
    }
}

impl Eq for ExactScalar {}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> ExactScalar {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: Self) -> ExactScalar {
        self.sub_ref(rhs)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> ExactScalar {
        self.mul_ref(rhs)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn fmt_cyclo(c: &Cyclo) -> String {
    if let Some(r) = c.as_rational() {
        return fmt_rational(&r);
    }
    let n = c.modulus();
    let mut parts = Vec::new();
    for (j, r) in c.coeffs().iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        let mag = fmt_rational(&r.abs());
        let sign = if r.is_negative() { "-" } else { "+" };
        let body = if j == 0 {
            mag
        } else {
            format!("{}*z{}^{}", mag, n, j)
        };
        parts.push((sign, body));
    }
    let mut s = String::new();
    for (idx, (sign, body)) in parts.iter().enumerate() {
        match (idx, *sign) {
            (0, "-") => s.push('-'),
            (0, _) => {}
            (_, sg) => s.push_str(&format!(" {} ", sg)),
        }
        s.push_str(body);
    }
    s
}

impl fmt::Display for ExactScalar {
    /// Terms render as `(c)·pi^(a/2)·Gamma(1/4)^(b)`, joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| {
                let mut s = format!("({})", fmt_cyclo(c));
                if *a != 0 {
                    s.push_str(&format!("·pi^({}/2)", a));
                }
                if *b != 0 {
                    s.push_str(&format!("·Gamma(1/4)^({})", b));
                }
                s
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Integer helper for rational construction.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational one.
pub fn q1() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_reductions() {
        let g5 = ExactScalar::gamma_of_quarter(5).unwrap();
        assert_eq!(g5, ExactScalar::gamma_quarter_pow(1).scale(&q(1, 4)));
        let g3 = ExactScalar::gamma_of_quarter(3).unwrap();
        let expect = ExactScalar::monomial(Cyclo::sqrt2(8), 2, -1);
        assert_eq!(g3, expect);
        assert_eq!(
            ExactScalar::gamma_of_quarter(2).unwrap(),
            ExactScalar::pi_half_pow(1)
        );
        assert_eq!(
            ExactScalar::gamma_of_quarter(12).unwrap(),
            ExactScalar::from_int(2)
        );
        assert_eq!(
            ExactScalar::gamma_of_quarter(6).unwrap(),
            ExactScalar::pi_half_pow(1).scale(&q(1, 2))
        );
        // Γ(-1/2) = -2√π
        assert_eq!(
            ExactScalar::gamma_of_quarter(-2).unwrap(),
            ExactScalar::pi_half_pow(1).scale_int(-2)
        );
        assert!(ExactScalar::gamma_of_quarter(0).is_err());
    }

    #[test]
    fn reflection_formula() {
        let g1 = ExactScalar::gamma_of_quarter(1).unwrap();
        let g3 = ExactScalar::gamma_of_quarter(3).unwrap();
        assert_eq!(
            g1.mul_ref(&g3),
            ExactScalar::pi().mul_ref(&ExactScalar::sqrt2())
        );
    }

    #[test]
    fn exponent_addition() {
        let h = ExactScalar::pi_half_pow(1);
        assert_eq!(h.mul_ref(&h), ExactScalar::pi());
        assert_eq!(ExactScalar::pi().single_term().unwrap().1, 2);
    }

    #[test]
    fn inversion() {
        let a = ExactScalar::monomial(Cyclo::sqrt2(8), 3, -2);
        assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        let b = ExactScalar::one().add_ref(&ExactScalar::pi());
        assert_eq!(b.inv(), Err(ScalarError::InvNotSupported));
        assert_eq!(ExactScalar::zero().inv(), Err(ScalarError::InvNotSupported));
    }

    #[test]
    fn display() {
        assert_eq!(
            ExactScalar::pi().inv().unwrap().to_string(),
            "(1/1)·pi^(-2/2)"
        );
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!(ExactScalar::i().scale(&q(-1, 2)).to_string(), "(-1/2*z8^2)");
    }

    #[test]
    fn mixed_moduli() {
        let a = ExactScalar::root_of_unity(24, 8);
        let b = a.mul_ref(&a).mul_ref(&a);
        assert!(b.is_one());
        assert_eq!(ExactScalar::sqrt2().lift(24), ExactScalar::sqrt2());
    }
}
