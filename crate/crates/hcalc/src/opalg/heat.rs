//! σ_Δ^t, Duhamel expansions and exponential series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::series::{op_compose, GeneralizedLaplacian, OpSeries};
use super::OpError;
use crate::scalar::ExactScalar;

fn rat(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_rational(BigRational::new(n.into(), d.into()))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// Polynomial in t with operator coefficients: Σ_j t^j c_j.
#[derive(Clone, Debug, PartialEq)]
pub struct TPoly {
    pub coeffs: Vec<OpSeries>,
}

impl TPoly {
    /// Value at a rational t.
    pub fn eval(&self, t: &BigRational) -> Result<OpSeries, OpError> {
        let mut acc = OpSeries::zero(self.coeffs[0].shape(), self.coeffs[0].eps_trunc());
        let mut tp = BigRational::one();
        for c in &self.coeffs {
            acc = acc.add(&c.scale(&ExactScalar::from_rational(tp.clone())))?;
            tp *= t;
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }
}

/// [Δ, s] for even Δ.
pub fn ad(delta: &OpSeries, s: &OpSeries) -> Result<OpSeries, OpError> {
    op_compose(delta, s)?.sub(&op_compose(s, delta)?)
}

/// σ_Δ^t(s) = Σ_{j ≤ t_deg} t^j/j! ad(Δ)^j(s); exact modulo ε^{N+1} once t_deg ≥ N.
pub fn sigma_conj(
    delta: &GeneralizedLaplacian,
    s: &OpSeries,
    t_deg: usize,
) -> Result<TPoly, OpError> {
    let mut coeffs = vec![s.clone()];
    let mut cur = s.clone();
    for j in 1..=t_deg {
        cur = ad(delta.series(), &cur)?;
        if cur.is_zero() {
            break;
        }
        let f = ExactScalar::from_rational(BigRational::new(BigInt::one(), factorial(j as u32)));
        coeffs.push(cur.scale(&f));
    }
    Ok(TPoly { coeffs })
}

/// Σ_{k ≤ N} s^k/k!, exact modulo ε^{N+1} when s ∈ 𝒮_1.
pub fn exp_series(s: &OpSeries, floor: i64) -> Result<OpSeries, OpError> {
    if s.min_eps().is_some_and(|e| e == 0) {
        return Err(OpError::NotInFiltration);
    }
    let n = s.eps_trunc();
    let mut acc = OpSeries::identity(s.shape(), n, floor);
    let mut pow = acc.clone();
    for k in 1..=n {
        pow = op_compose(&pow, s)?;
        if pow.is_zero() {
            break;
        }
        acc = acc.add(&pow.scale(&ExactScalar::from_rational(BigRational::new(
            BigInt::one(),
            factorial(k),
        ))))?;
    }
    Ok(acc)
}

/// s exp(Δ_flat), stored by its prefactor.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceClassElement {
    pub prefactor: OpSeries,
}

impl TraceClassElement {
    pub fn new(prefactor: OpSeries) -> Self {
        TraceClassElement { prefactor }
    }

    /// d · (s expΔ) = (d s) expΔ.
    pub fn left_mul(&self, d: &OpSeries) -> Result<Self, OpError> {
        Ok(TraceClassElement {
            prefactor: op_compose(d, &self.prefactor)?,
        })
    }

    /// (s expΔ) · d = (s σ^1(d)) expΔ.
    pub fn right_mul(&self, d: &OpSeries, floor: i64) -> Result<Self, OpError> {
        let flat = GeneralizedLaplacian::flat(d.shape(), d.eps_trunc(), floor);
        let sd = sigma_conj(&flat, d, d.eps_trunc() as usize)?.eval(&BigRational::one())?;
        Ok(TraceClassElement {
            prefactor: op_compose(&self.prefactor, &sd)?,
        })
    }

    /// Graded commutator [d, t].
    pub fn commutator_with(&self, d: &OpSeries, floor: i64) -> Result<Self, OpError> {
        let (de, dodd) = d.parity_split();
        let (se, so) = self.prefactor.parity_split();
        let te = TraceClassElement::new(se);
        let to = TraceClassElement::new(so);
        let mut acc = te
            .left_mul(d)?
            .prefactor
            .sub(&te.right_mul(d, floor)?.prefactor)?;
        acc = acc.add(
            &to.left_mul(&de)?
                .prefactor
                .sub(&to.right_mul(&de, floor)?.prefactor)?,
        )?;
        acc = acc.add(
            &to.left_mul(&dodd)?
                .prefactor
                .add(&to.right_mul(&dodd, floor)?.prefactor)?,
        )?;
        Ok(TraceClassElement::new(acc))
    }

    /// Full operator modulo ε^{N+1}: prefactor ∘ Σ Δ_flat^k/k!.
    pub fn expand(&self, floor: i64) -> Result<OpSeries, OpError> {
        let p = &self.prefactor;
        let e = exp_series(
            GeneralizedLaplacian::flat(p.shape(), p.eps_trunc(), floor).series(),
            floor,
        )?;
        op_compose(p, &e)
    }
}

/// Perturbation s' with Δ + s = Δ_flat + s'.
fn flat_perturbation(
    delta: &GeneralizedLaplacian,
    s: &OpSeries,
    floor: i64,
) -> Result<OpSeries, OpError> {
    if !s.in_filtration(&BigRational::zero(), 1) {
        return Err(OpError::NotInFiltration);
    }
    let d = delta.series();
    let flat = GeneralizedLaplacian::flat(d.shape(), d.eps_trunc(), floor);
    s.add(&d.sub(flat.series())?)
}

/// exp(Δ + s) = Σ_k ∫_{Δ_k} σ^{t_0}(s)σ^{t_0+t_1}(s)… exp(Δ_flat) dt, by iterated
/// exact integration over 0 ≤ u_1 ≤ … ≤ u_k ≤ 1.
pub fn duhamel_exp(
    delta: &GeneralizedLaplacian,
    s: &OpSeries,
    floor: i64,
) -> Result<TraceClassElement, OpError> {
    let sp = flat_perturbation(delta, s, floor)?;
    let n = sp.eps_trunc().min(delta.series().eps_trunc());
    let sp = sp.with_eps_trunc(n);
    let shape = sp.shape();
    let flat = GeneralizedLaplacian::flat(shape, n, floor);
    let sig = sigma_conj(&flat, &sp, n as usize)?;
    let mut total = OpSeries::identity(shape, n, floor);
    // G_k(u) as coefficients of u^m.
    let mut g: Vec<OpSeries> = vec![OpSeries::identity(shape, n, floor)];
    for _ in 0..=n {
        let mut next: BTreeMap<usize, OpSeries> = BTreeMap::new();
        for (a, ga) in g.iter().enumerate() {
            if ga.is_zero() {
                continue;
            }
            for (b, sb) in sig.coeffs.iter().enumerate() {
                let prod = op_compose(ga, sb)?;
                if prod.is_zero() {
                    continue;
                }
                let m = a + b + 1;
                let term = prod.scale(&rat(1, m as i64));
                let e = next.entry(m).or_insert_with(|| OpSeries::zero(shape, n));
                e.add_assign(&term)?;
            }
        }
        if next.values().all(|x| x.is_zero()) {
            break;
        }
        let deg = *next.keys().next_back().unwrap();
        g = (0..=deg)
            .map(|m| next.remove(&m).unwrap_or_else(|| OpSeries::zero(shape, n)))
            .collect();
        for c in &g {
            total.add_assign(c)?;
        }
    }
    Ok(TraceClassElement::new(total))
}

/// ∫_{Δ_k} Π t_i^{a_i} dt_1…dt_k = Π a_i! / (k + Σ a_i)!.
pub fn simplex_integral(a: &[u32]) -> BigRational {
    let k = a.len() as u32 - 1;
    let num = a.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x));
    BigRational::new(num, factorial(k + a.iter().sum::<u32>()))
}

/// Σ_k ∫_{Δ_k} exp(t_0Δ) s exp(t_1Δ) … s exp(t_kΔ) dt as a full operator
/// modulo ε^{N+1}, integrating monomials with [`simplex_integral`].
pub fn duhamel_first_form(
    delta: &GeneralizedLaplacian,
    s: &OpSeries,
    floor: i64,
) -> Result<OpSeries, OpError> {
    if !s.in_filtration(&BigRational::zero(), 1) {
        return Err(OpError::NotInFiltration);
    }
    let d = delta.series();
    let n = s.eps_trunc().min(d.eps_trunc());
    let shape = s.shape();
    let s = s.with_eps_trunc(n);
    let mut dpow = vec![OpSeries::identity(shape, n, floor)];
    for j in 1..=n {
        let p = op_compose(&dpow[j as usize - 1], d)?;
        if p.is_zero() {
            break;
        }
        dpow.push(p);
    }
    let exp_t: Vec<OpSeries> = dpow
        .iter()
        .enumerate()
        .map(|(j, p)| {
            p.scale(&ExactScalar::from_rational(BigRational::new(
                BigInt::one(),
                factorial(j as u32),
            )))
        })
        .collect();
    let mut total = OpSeries::zero(shape, n);
    // Products exp(t_0Δ) s … s, keyed by exponents of t_0..t_{k-1}.
    let mut partial: BTreeMap<Vec<u32>, OpSeries> =
        BTreeMap::from([(vec![], OpSeries::identity(shape, n, floor))]);
    for _ in 0..=n {
        let mut closed: BTreeMap<Vec<u32>, OpSeries> = BTreeMap::new();
        for (exps, p) in &partial {
            for (j, e) in exp_t.iter().enumerate() {
                let q = op_compose(p, e)?;
                if !q.is_zero() {
                    let mut ex = exps.clone();
                    ex.push(j as u32);
                    closed.insert(ex, q);
                }
            }
        }
        for (ex, q) in &closed {
            total = total.add(&q.scale(&ExactScalar::from_rational(simplex_integral(ex))))?;
        }
        let mut next = BTreeMap::new();
        for (ex, q) in closed {
            let r = op_compose(&q, &s)?;
            if !r.is_zero() {
                next.insert(ex, r);
            }
        }
        if next.is_empty() {
            break;
        }
        partial = next;
    }
    Ok(total)
}
