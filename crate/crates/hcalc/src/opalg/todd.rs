//! Scalar ε-series, the Todd series and the algebraic Mehler formula.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bracket::{contract, SymbolSeries};
use super::heat::duhamel_exp;
use super::series::{op_compose, GeneralizedLaplacian, OpKey, OpSeries};
use super::OpError;
use crate::scalar::ExactScalar;
use crate::symbols::builders::p;
use crate::symbols::{CliffordWord, FoliationShape, HSymbol};

/// Left-symbol floor for the polynomial operators used here.
pub const POLY_FLOOR: i64 = -64;

/// Σ_{k ≤ N} c_k ε^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSeries {
    pub coeffs: Vec<ExactScalar>,
}

/// Square matrix of ε-series.
pub type EpsMatrix = Vec<Vec<EpsSeries>>;

impl EpsSeries {
    pub fn zero(n: usize) -> Self {
        EpsSeries {
            coeffs: vec![ExactScalar::zero(); n + 1],
        }
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = ExactScalar::one();
        s
    }

    /// c ε^k.
    pub fn monomial(n: usize, c: ExactScalar, k: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, o: &EpsSeries) -> EpsSeries {
        EpsSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> EpsSeries {
        EpsSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
        }
    }

    pub fn mul(&self, o: &EpsSeries) -> EpsSeries {
        let n = self.order().min(o.order());
        let mut out = Self::zero(n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                out.coeffs[i + j].add_assign_ref(&self.coeffs[i].mul_ref(&o.coeffs[j]));
            }
        }
        out
    }

    /// exp of a series without constant term.
    pub fn exp(&self) -> Result<EpsSeries, OpError> {
        if !self.coeffs[0].is_zero() {
            return Err(OpError::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut e = Self::one(n);
        for k in 1..=n {
            let mut acc = ExactScalar::zero();
            for j in 1..=k {
                acc.add_assign_ref(&self.coeffs[j].mul_ref(&e.coeffs[k - j]).scale_int(j as i64));
            }
            e.coeffs[k] = acc.scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
        }
        Ok(e)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Rational power series coefficients of x/(e^x − 1) up to x^n.
pub fn bernoulli_series(n: usize) -> Vec<BigRational> {
    // Inverse of Σ x^j/(j+1)!.
    let mut fact = BigInt::one();
    let mut h = Vec::with_capacity(n + 1);
    for j in 0..=n {
        fact *= j + 1;
        h.push(BigRational::new(BigInt::one(), fact.clone()));
    }
    let mut b = vec![BigRational::zero(); n + 1];
    b[0] = BigRational::one();
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &h[j] * &b[k - j];
        }
        b[k] = -acc;
    }
    b
}

/// Coefficients of log(x/(e^x − 1)).
pub fn log_todd_coefficients(n: usize) -> Vec<BigRational> {
    let f = bernoulli_series(n);
    let mut l = vec![BigRational::zero(); n + 1];
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for j in 1..k {
            acc += BigRational::from_integer(j.into()) * &l[j] * &f[k - j];
        }
        l[k] = &f[k] - acc / BigRational::from_integer(k.into());
    }
    l
}

fn check_matrix(r: &EpsMatrix, n: usize) -> Result<usize, OpError> {
    let d = r.len();
    for row in r {
        if row.len() != d {
            return Err(OpError::ShapeMismatch);
        }
        for e in row {
            if e.order() < n {
                return Err(OpError::ShapeMismatch);
            }
            if !e.coeffs[0].is_zero() {
                return Err(OpError::NonzeroConstantTerm);
            }
        }
    }
    Ok(d)
}

fn mat_mul(a: &EpsMatrix, b: &EpsMatrix, n: usize) -> EpsMatrix {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut acc = EpsSeries::zero(n);
                    for k in 0..d {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn truncate_matrix(r: &EpsMatrix, n: usize) -> EpsMatrix {
    r.iter()
        .map(|row| {
            row.iter()
                .map(|e| EpsSeries {
                    coeffs: e.coeffs[..=n].to_vec(),
                })
                .collect()
        })
        .collect()
}

/// Td(R) = exp tr log(R/(e^R − 1)) modulo ε^{N+1}.
pub fn todd_series(r: &EpsMatrix, n: usize) -> Result<EpsSeries, OpError> {
    let d = check_matrix(r, n)?;
    let r = truncate_matrix(r, n);
    let c = log_todd_coefficients(n);
    let mut pow = r.clone();
    let mut tr = EpsSeries::zero(n);
    for cj in c.iter().skip(1) {
        let mut t = EpsSeries::zero(n);
        for (i, row) in pow.iter().enumerate().take(d) {
            t = t.add(&row[i]);
        }
        tr = tr.add(&t.scale(&ExactScalar::from_rational(cj.clone())));
        pow = mat_mul(&pow, &r, n);
    }
    tr.exp()
}

fn permutations(d: usize) -> Vec<(Vec<usize>, i64)> {
    if d == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(d - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// det(Σ_j b_j R^j) by the Leibniz expansion.
pub fn todd_determinant(r: &EpsMatrix, n: usize) -> Result<EpsSeries, OpError> {
    let d = check_matrix(r, n)?;
    let r = truncate_matrix(r, n);
    let b = bernoulli_series(n);
    let mut f: EpsMatrix = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        EpsSeries::one(n)
                    } else {
                        EpsSeries::zero(n)
                    }
                })
                .collect()
        })
        .collect();
    let mut pow = r.clone();
    for bj in b.iter().skip(1) {
        let c = ExactScalar::from_rational(bj.clone());
        for i in 0..d {
            for j in 0..d {
                f[i][j] = f[i][j].add(&pow[i][j].scale(&c));
            }
        }
        pow = mat_mul(&pow, &r, n);
    }
    let mut det = EpsSeries::zero(n);
    for (perm, sign) in permutations(d) {
        let mut prod = EpsSeries::one(n);
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul(&f[i][j]);
        }
        det = det.add(&prod.scale(&ExactScalar::from_int(sign)));
    }
    Ok(det)
}

/// p_L · R · ∂_p = Σ p_{iL} R^i_j ∂_{p_j} on the all-leaf shape of size dim R.
pub fn p_r_dp(r: &EpsMatrix, eps_trunc: u32) -> OpSeries {
    let d = r.len();
    let shape = FoliationShape::new(d, 0);
    let mut s = OpSeries::zero(shape, eps_trunc);
    for (i, row) in r.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            for (k, c) in e.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut dp = vec![0; d];
                dp[j] = 1;
                let key = OpKey {
                    eps: k as u32,
                    right: CliffordWord::ONE,
                    dx: vec![0; d],
                    dp,
                };
                s.insert(key, p(shape, i, POLY_FLOOR).scale(c));
            }
        }
    }
    s
}

/// (p_L · R)_j = Σ_i p_{iL} R^i_j.
fn p_r(r: &EpsMatrix, j: usize, eps_trunc: u32) -> OpSeries {
    let d = r.len();
    let shape = FoliationShape::new(d, 0);
    let mut s = OpSeries::zero(shape, eps_trunc);
    for (i, row) in r.iter().enumerate() {
        for (k, c) in row[j].coeffs.iter().enumerate() {
            if !c.is_zero() {
                let key = OpKey {
                    eps: k as u32,
                    ..OpKey::plain(d)
                };
                s.insert(key, p(shape, i, POLY_FLOOR).scale(c));
            }
        }
    }
    s
}

fn as_scalar(a: &HSymbol) -> Option<ExactScalar> {
    let mut out = ExactScalar::zero();
    for (d, k, f) in a.iter() {
        if d != 0
            || !k.word.is_one()
            || k.mono.gamma.iter().any(|&g| g > 0)
            || k.mono.rho_q != 0
            || k.mono.log_pow != 0
        {
            return None;
        }
        out.add_assign_ref(&f.as_constant()?);
    }
    Some(out)
}

/// prefix ∘ exp(Δ + p_L·R·∂_p), contracted and cut at ε^N. The prefactor is
/// computed to raw order 2N + extra, which covers every term that can
/// contract to ε^{≤N} when R has no ε^0 part.
fn mehler_contract(
    r: &EpsMatrix,
    n: usize,
    prefix: Option<(&dyn Fn(u32) -> OpSeries, u32)>,
) -> Result<SymbolSeries, OpError> {
    check_matrix(r, n)?;
    let extra = prefix.as_ref().map(|p| p.1).unwrap_or(0);
    let trunc = 2 * n as u32 + extra;
    let r = truncate_matrix(r, n);
    let s = p_r_dp(&r, trunc);
    let shape = s.shape();
    let flat = GeneralizedLaplacian::flat(shape, trunc, POLY_FLOOR);
    let pre = duhamel_exp(&flat, &s, POLY_FLOOR)?.prefactor;
    let full = match prefix {
        Some((build, _)) => op_compose(&build(trunc), &pre)?,
        None => pre,
    };
    let mut c = contract(&full)?;
    c.retain(|&k, _| k <= n as i64);
    Ok(c)
}

/// ⟨exp(Δ + p_L·R·∂_p)⟩ modulo ε^{N+1}.
pub fn mehler_bracket(r: &EpsMatrix, n: usize) -> Result<EpsSeries, OpError> {
    let c = mehler_contract(r, n, None)?;
    let mut out = EpsSeries::zero(n);
    for (k, a) in c {
        if k < 0 {
            return Err(OpError::MehlerNotScalar);
        }
        out.coeffs[k as usize] = as_scalar(&a).ok_or(OpError::MehlerNotScalar)?;
    }
    Ok(out)
}

/// ⟨(iε∂_x + p_L·R)^α exp(Δ + p_L·R·∂_p)⟩ modulo ε^{N+1}.
pub fn mehler_vanishing(alpha: &[u32], r: &EpsMatrix, n: usize) -> Result<SymbolSeries, OpError> {
    let d = r.len();
    if alpha.len() != d {
        return Err(OpError::ShapeMismatch);
    }
    let shape = FoliationShape::new(d, 0);
    let build = |trunc: u32| -> OpSeries {
        let mut acc = OpSeries::identity(shape, trunc, POLY_FLOOR);
        for (j, &a) in alpha.iter().enumerate() {
            let mut dx = vec![0; d];
            dx[j] = 1;
            let f = OpSeries::derivative(
                shape,
                ExactScalar::i(),
                dx,
                vec![0; d],
                1,
                trunc,
                POLY_FLOOR,
            )
            .add(&p_r(r, j, trunc))
            .expect("same shape");
            for _ in 0..a {
                acc = op_compose(&acc, &f).expect("same shape");
            }
        }
        acc
    };
    let total: u32 = alpha.iter().sum();
    mehler_contract(r, n, Some((&build, total)))
}
