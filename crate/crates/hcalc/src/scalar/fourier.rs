//! Trigonometric polynomials on the torus T^n = ℝ^n/ℤ^n.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::exact::ExactScalar;
use super::ScalarError;

/// f(x) = Σ_k c_k e^{2πi k·x} with finite support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierFunction {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, ExactScalar>,
}

/// Binary operations accepted by [`fourier_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourierOp {
    Add,
    Mul,
    /// ∂/∂x_j, zero-based; the second operand is ignored.
    Deriv(usize),
}

/// Dimension-checked arithmetic.
pub fn fourier_arith(
    f: &FourierFunction,
    g: &FourierFunction,
    op: FourierOp,
) -> Result<FourierFunction, ScalarError> {
    match op {
        FourierOp::Deriv(j) if j >= f.dim => Err(ScalarError::DimensionMismatch {
            left: f.dim,
            right: j + 1,
        }),
        FourierOp::Deriv(j) => Ok(f.deriv(j)),
        _ if f.dim != g.dim => Err(ScalarError::DimensionMismatch {
            left: f.dim,
            right: g.dim,
        }),
        FourierOp::Add => Ok(f.add(g)),
        FourierOp::Mul => Ok(f.mul(g)),
    }
}

impl FourierFunction {
    pub fn zero(dim: usize) -> Self {
        FourierFunction {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: ExactScalar) -> Self {
        Self::character(vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, ExactScalar::one())
    }

    /// c · e^{2πi k·x}.
    pub fn character(k: Vec<i64>, c: ExactScalar) -> Self {
        let mut f = Self::zero(k.len());
        if !c.is_zero() {
            f.coeffs.insert(k, c);
        }
        f
    }

    pub fn from_coeffs(
        dim: usize,
        coeffs: impl IntoIterator<Item = (Vec<i64>, ExactScalar)>,
    ) -> Self {
        let mut f = Self::zero(dim);
        for (k, c) in coeffs {
            assert_eq!(k.len(), dim, "frequency vector has wrong length");
            f.add_term(k, c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, ExactScalar> {
        &self.coeffs
    }

    pub fn coeff(&self, k: &[i64]) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Some(c) when f is the constant c.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.coeffs.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.coeffs.get(&vec![0; self.dim]).cloned(),
            _ => None,
        }
    }

    /// Some((k, c)) when f is a single character c e^{2πik·x}.
    pub fn as_character(&self) -> Option<(&[i64], &ExactScalar)> {
        if self.coeffs.len() == 1 {
            let (k, c) = self.coeffs.iter().next().unwrap();
            Some((k.as_slice(), c))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, k: Vec<i64>, c: ExactScalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.coeffs {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Self {
        FourierFunction {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Pointwise product (convolution of coefficient maps).
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                let k: Vec<i64> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(k, c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.coeffs {
            out.add_term(k.clone(), c.mul_ref(s));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero(self.dim);
        }
        FourierFunction {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k.clone(), c.scale(r)))
                .collect(),
        }
    }

    /// ∂/∂x_j (zero-based): c_k ↦ 2πi k_j c_k.
    pub fn deriv(&self, j: usize) -> Self {
        self.deriv_pow(j, 1)
    }

    /// ∂^m/∂x_j^m.
    pub fn deriv_pow(&self, j: usize, m: u32) -> Self {
        if m == 0 {
            return self.clone();
        }
        let factor = two_pi_i().pow(m);
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.coeffs {
            if k[j] != 0 {
                out.add_term(k.clone(), c.mul_ref(&factor).scale_int(k[j].pow(m)));
            }
        }
        out
    }

    /// ∂_x^α for a multi-index α.
    pub fn deriv_multi(&self, alpha: &[u32]) -> Self {
        let mut f = self.clone();
        for (j, &a) in alpha.iter().enumerate() {
            if a > 0 {
                f = f.deriv_pow(j, a);
            }
        }
        f
    }

    /// ∫_{T^n} f dx, the constant coefficient.
    pub fn torus_integral(&self) -> ExactScalar {
        self.coeff(&vec![0; self.dim])
    }

    /// Complex conjugate: c_k ↦ conj(c_{-k}).
    pub fn conj(&self) -> Self {
        FourierFunction {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k.iter().map(|a| -a).collect(), c.conj()))
                .collect(),
        }
    }

    /// ℓ² pairing Σ_k c_k conj(d_k) of the coefficient maps.
    pub fn l2_pairing(&self, other: &Self) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (k, c) in &self.coeffs {
            if let Some(d) = other.coeffs.get(k) {
                acc.add_assign_ref(&c.mul_ref(&d.conj()));
            }
        }
        acc
    }

    /// Pullback along x ↦ x + b with b rational: c_k ↦ e^{2πik·b} c_k.
    pub fn translate(&self, b: &[BigRational], modulus: u32) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.coeffs {
            let mut phase = BigRational::zero();
            for (kj, bj) in k.iter().zip(b) {
                phase += bj * BigRational::from_integer((*kj).into());
            }
            let e = phase * BigRational::from_integer(modulus.into());
            assert!(
                e.is_integer(),
                "translation denominator does not divide the modulus"
            );
            let z = ExactScalar::root_of_unity(modulus, e.to_integer().to_i64().unwrap());
            out.add_term(k.clone(), c.mul_ref(&z));
        }
        out
    }

    /// Relabels frequencies by k ↦ map(k).
    pub fn map_frequencies(&self, map: impl Fn(&[i64]) -> Vec<i64>) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.coeffs {
            out.add_term(map(k), c.clone());
        }
        out
    }

    /// Largest |k_j| over the support.
    pub fn bandwidth(&self) -> i64 {
        self.coeffs
            .keys()
            .flat_map(|k| k.iter().map(|a| a.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Double-precision point evaluation.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let tau = 2.0 * std::f64::consts::PI;
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let th: f64 = k.iter().zip(x).map(|(a, b)| *a as f64 * b).sum::<f64>() * tau;
                c.to_complex() * Complex64::from_polar(1.0, th)
            })
            .sum()
    }
}

/// Σ c_k e(k·x), with e(k·x) = e^{2πi k·x} and the k = 0 factor omitted.
impl std::fmt::Display for FourierFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let c = if c.num_terms() > 1 {
                    format!("{{{}}}", c)
                } else {
                    c.to_string()
                };
                if k.iter().all(|&x| x == 0) {
                    c
                } else {
                    format!("{}·e{:?}", c, k)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// 2πi as an exact scalar.
pub fn two_pi_i() -> ExactScalar {
    ExactScalar::i().mul_ref(&ExactScalar::pi()).scale_int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chr(k: &[i64]) -> FourierFunction {
        FourierFunction::character(k.to_vec(), ExactScalar::one())
    }

    #[test]
    fn character_derivative() {
        assert_eq!(
            chr(&[1]).deriv(0),
            FourierFunction::character(vec![1], two_pi_i())
        );
        assert!(FourierFunction::one(2).deriv(1).is_zero());
    }

    #[test]
    fn product_and_support() {
        assert_eq!(chr(&[1]).mul(&chr(&[-1])), FourierFunction::one(1));
        let s = chr(&[1, 0]).add(&chr(&[0, 2]));
        assert_eq!(s.coeffs().len(), 2);
    }

    #[test]
    fn integrals() {
        assert!(chr(&[3, -1]).torus_integral().is_zero());
        assert!(FourierFunction::one(3).torus_integral().is_one());
        let f = FourierFunction::constant(1, ExactScalar::from_int(3)).add(&chr(&[1]));
        assert_eq!(f.torus_integral(), ExactScalar::from_int(3));
    }

    #[test]
    fn dimension_checks() {
        let r = fourier_arith(&chr(&[1]), &chr(&[1, 1]), FourierOp::Add);
        assert_eq!(r, Err(ScalarError::DimensionMismatch { left: 1, right: 2 }));
        assert!(fourier_arith(&chr(&[1]), &chr(&[1]), FourierOp::Deriv(1)).is_err());
    }

    #[test]
    fn half_translation_sign() {
        let b = vec![BigRational::new(1.into(), 2.into())];
        let f = chr(&[1]).translate(&b, 8);
        assert_eq!(
            f,
            FourierFunction::character(vec![1], ExactScalar::from_int(-1))
        );
    }
}
