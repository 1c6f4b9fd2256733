//! One-dimensional flat case: the oriented fundamental-class pairing on
//! S_H^*T^1 = T^1 × {±1} and a Toeplitz index oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::CrossedError;
use crate::scalar::{two_pi_i, ExactScalar, FourierFunction};
use crate::symbols::builders::chi_plus;
use crate::symbols::{FoliationShape, HSymbol};

fn check_1d(a: &HSymbol) -> Result<(), CrossedError> {
    if a.shape() == FoliationShape::new(1, 0) {
        Ok(())
    } else {
        Err(CrossedError::WrongShape)
    }
}

/// Degree-0 component evaluated at the sphere point p = σ.
pub fn restrict_1d(a: &HSymbol, sigma: i8) -> Result<FourierFunction, CrossedError> {
    check_1d(a)?;
    let mut f = FourierFunction::zero(1);
    for (k, c) in a.component_terms(0) {
        if !k.word.is_one() || k.mono.log_pow != 0 {
            return Err(CrossedError::WrongShape);
        }
        let s = if sigma < 0 && k.mono.gamma[0] % 2 == 1 {
            -1
        } else {
            1
        };
        f.add_assign(&c.scale(&ExactScalar::from_int(s)));
    }
    Ok(f)
}

/// ∫_{T^1} f dg = Σ_k f_{−k} · 2πik · g_k.
pub fn circle_pairing(f: &FourierFunction, g: &FourierFunction) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for (k, gk) in g.coeffs() {
        let fk = f.coeff(&[-k[0]]);
        if !fk.is_zero() {
            acc.add_assign_ref(&fk.mul_ref(gk).scale_int(k[0]));
        }
    }
    acc.mul_ref(&two_pi_i())
}

/// (1/2π) Σ_{σ=±1} σ ∫_{T^1} r_σ(a0) d r_σ(a1), with the sphere point p = −1
/// carrying the opposite orientation.
pub fn fundamental_pairing_1d(a0: &HSymbol, a1: &HSymbol) -> Result<ExactScalar, CrossedError> {
    check_1d(a0)?;
    let plus = circle_pairing(&restrict_1d(a0, 1)?, &restrict_1d(a1, 1)?);
    let minus = circle_pairing(&restrict_1d(a0, -1)?, &restrict_1d(a1, -1)?);
    let two_pi_inv = ExactScalar::pi().scale_int(2).inv().expect("monomial");
    Ok(plus.sub_ref(&minus).mul_ref(&two_pi_inv))
}

/// 1 + (f − 1)χ₊, a degree-0 symbol restricting to f at p = +1 and 1 at p = −1.
pub fn plus_lift(f: &FourierFunction, floor: i64) -> HSymbol {
    let s = FoliationShape::new(1, 0);
    let one = HSymbol::one(s, floor);
    let fm1 = f.sub(&FourierFunction::one(1));
    one.add(&chi_plus(s, 0, floor).mul_fourier(&fm1))
        .expect("same shape")
}

/// (a0, a1) = (1 + (e^{−2πiwx}−1)χ₊, 1 + (e^{2πiwx}−1)χ₊).
pub fn winding_lift(w: i64, floor: i64) -> (HSymbol, HSymbol) {
    let e = |k: i64| FourierFunction::character(vec![k], ExactScalar::one());
    (plus_lift(&e(-w), floor), plus_lift(&e(w), floor))
}

fn nullity(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > rel_tol * max).count();
    m.ncols() - rank
}

fn section(f: &FourierFunction, cutoff: usize) -> DMatrix<Complex64> {
    let b = f.bandwidth() as usize;
    let rows = cutoff + b + 1;
    let cols = cutoff + 1;
    DMatrix::from_fn(rows, cols, |j, k| {
        f.coeff(&[j as i64 - k as i64]).to_complex()
    })
}

/// Index of the Toeplitz operator with symbol r₊(a1): the number of small
/// singular values of T_f on modes 0..=cutoff minus those of T_{f̄}.
pub fn toeplitz_index_oracle_1d(a1: &HSymbol, cutoff: usize) -> Result<i64, CrossedError> {
    let f = restrict_1d(a1, 1)?;
    let samples = 4096;
    let vals: Vec<f64> = (0..samples)
        .map(|j| f.eval(&[j as f64 / samples as f64]).norm())
        .collect();
    let max = vals.iter().cloned().fold(0.0, f64::max);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || min < 1e-6 * max {
        return Err(CrossedError::NonInvertibleSymbol);
    }
    let tol = 1e-9;
    let k = nullity(&section(&f, cutoff), tol) as i64;
    let c = nullity(&section(&f.conj(), cutoff), tol) as i64;
    Ok(k - c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winding_pairing_is_i() {
        let (a0, a1) = winding_lift(1, -3);
        assert_eq!(fundamental_pairing_1d(&a0, &a1).unwrap(), ExactScalar::i());
        let one = HSymbol::one(FoliationShape::new(1, 0), -3);
        assert!(fundamental_pairing_1d(&one, &one).unwrap().is_zero());
    }

    #[test]
    fn toeplitz_examples() {
        let e = |k: i64| plus_lift(&FourierFunction::character(vec![k], ExactScalar::one()), -2);
        assert_eq!(toeplitz_index_oracle_1d(&e(1), 32).unwrap(), -1);
        assert_eq!(toeplitz_index_oracle_1d(&e(0), 32).unwrap(), 0);
        assert_eq!(toeplitz_index_oracle_1d(&e(-2), 32).unwrap(), 2);
        // (1 − e^{2πix}/2) e^{−2πix}: kernel vectors are not finitely supported.
        let f = FourierFunction::character(vec![-1], ExactScalar::one()).sub(
            &FourierFunction::character(vec![0], ExactScalar::ratio(1, 2)),
        );
        assert_eq!(toeplitz_index_oracle_1d(&plus_lift(&f, -2), 64).unwrap(), 1);
        let zero = plus_lift(&FourierFunction::zero(1), -2);
        assert_eq!(
            toeplitz_index_oracle_1d(&zero, 8),
            Err(CrossedError::NonInvertibleSymbol)
        );
    }
}
