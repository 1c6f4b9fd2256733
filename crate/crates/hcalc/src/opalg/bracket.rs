//! Contractions ⟨·⟩, ⟨⟨·⟩⟩ and the graded trace Tr_s.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::heat::TraceClassElement;
use super::series::OpSeries;
use super::OpError;
use crate::crossed::IsometryElement;
use crate::residue::wres;
use crate::scalar::ExactScalar;
use crate::symbols::{CliffordWord, FoliationShape, HSymbol};

/// Symbol-valued Laurent series in ε, keyed by the power.
pub type SymbolSeries = BTreeMap<i64, HSymbol>;

/// c · ε^pow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsMonomial {
    pub coeff: ExactScalar,
    pub pow: i64,
}

fn expand(alpha: &[u32]) -> Vec<usize> {
    alpha
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat(i).take(a as usize))
        .collect()
}

/// Perfect matchings of x-indices to p-indices with equal labels.
fn count_matchings(xs: &[usize], ps: &[usize], used: &mut Vec<bool>) -> u64 {
    let Some((&first, rest)) = xs.split_first() else {
        return 1;
    };
    let mut total = 0;
    for j in 0..ps.len() {
        if !used[j] && ps[j] == first {
            used[j] = true;
            total += count_matchings(rest, ps, used);
            used[j] = false;
        }
    }
    total
}

/// ⟨∂_x^α ∂_p^β expΔ⟩ = (i/ε)^{|α|} · #(matchings), zero unless |α| = |β|.
pub fn bracket(alpha: &[u32], beta: &[u32]) -> EpsMonomial {
    let xs = expand(alpha);
    let ps = expand(beta);
    if xs.len() != ps.len() {
        return EpsMonomial {
            coeff: ExactScalar::zero(),
            pow: 0,
        };
    }
    let m = count_matchings(&xs, &ps, &mut vec![false; ps.len()]);
    let k = xs.len() as u32;
    EpsMonomial {
        coeff: ExactScalar::i().pow(k).scale_int(m as i64),
        pow: -(k as i64),
    }
}

/// ⟨(w)_R⟩ = (−1)^n tr_s(w), which is 1 on ψ^1…ψ^nψ̄_1…ψ̄_n.
pub fn right_word_contraction(w: &CliffordWord, n: usize) -> i64 {
    let s = w.supertrace(n);
    if n % 2 == 1 {
        -s
    } else {
        s
    }
}

fn contract_with(p: &OpSeries, word: impl Fn(&CliffordWord) -> i64) -> SymbolSeries {
    let mut out = SymbolSeries::new();
    for (k, a) in p.terms() {
        let c = word(&k.right);
        if c == 0 {
            continue;
        }
        let b = bracket(&k.dx, &k.dp);
        if b.coeff.is_zero() {
            continue;
        }
        let pow = k.eps as i64 + b.pow;
        let term = a.scale(&b.coeff.scale_int(c));
        let merged = match out.remove(&pow) {
            Some(x) => x.add(&term).expect("same shape"),
            None => term,
        };
        if !merged.is_zero() {
            out.insert(pow, merged);
        }
    }
    out
}

/// Derivative contraction only; right words must be trivial.
pub fn contract(p: &OpSeries) -> Result<SymbolSeries, OpError> {
    if p.terms().keys().any(|k| !k.right.is_one()) {
        return Err(OpError::RightWordsPresent);
    }
    Ok(contract_with(p, |_| 1))
}

/// ⟨⟨s expΔ⟩⟩ = Σ s_{k,…} ⟨(w)_R⟩ ⟨∂_x^α∂_p^β expΔ⟩ ε^k.
pub fn double_bracket(t: &TraceClassElement) -> SymbolSeries {
    let n = t.prefactor.shape().n();
    contract_with(&t.prefactor, |w| right_word_contraction(w, n))
}

/// Coefficient of ε^j, zero if absent.
pub fn series_coeff(s: &SymbolSeries, j: i64, shape: FoliationShape, floor: i64) -> HSymbol {
    s.get(&j)
        .cloned()
        .unwrap_or_else(|| HSymbol::zero(shape, 0, floor))
}

/// Tr_s(s expΔ) = wres ⟨⟨s expΔ⟩⟩[n]; left Clifford factors are traced inside wres.
pub fn tr_s(t: &TraceClassElement) -> Result<ExactScalar, OpError> {
    let n = t.prefactor.shape().n() as i64;
    match double_bracket(t).get(&n) {
        Some(a) => Ok(wres(a)?),
        None => Ok(ExactScalar::zero()),
    }
}

/// Localization at the unit of a crossed family Σ_g t_g U_g.
pub fn tr_s_localized(
    ts: &BTreeMap<IsometryElement, TraceClassElement>,
) -> Result<ExactScalar, OpError> {
    let Some(g) = ts.keys().next() else {
        return Ok(ExactScalar::zero());
    };
    match ts.get(&IsometryElement::identity(g.n())) {
        Some(t) => tr_s(t),
        None => Ok(ExactScalar::zero()),
    }
}

/// Closed form α! δ_{αβ} (i/ε)^{|α|}, used as a check on [`bracket`].
pub fn bracket_closed_form(alpha: &[u32], beta: &[u32]) -> EpsMonomial {
    if alpha != beta {
        return EpsMonomial {
            coeff: ExactScalar::zero(),
            pow: 0,
        };
    }
    let f: BigInt = alpha
        .iter()
        .map(|&a| (1..=a).fold(BigInt::from(1), |x, k| x * k))
        .product();
    let k: u32 = alpha.iter().sum();
    EpsMonomial {
        coeff: ExactScalar::i()
            .pow(k)
            .mul_ref(&ExactScalar::from_rational(BigRational::from_integer(f))),
        pow: -(k as i64),
    }
}
