//! Operators on symbols in the canonical form a_L (w)_R ∂_x^α ∂_p^β ε^k.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::OpError;
use crate::scalar::{ExactScalar, FourierFunction};
use crate::symbols::clifford::WordSum;
use crate::symbols::{CliffordWord, FoliationShape, HSymbol};

/// Everything in a term except the left symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpKey {
    pub eps: u32,
    pub right: CliffordWord,
    pub dx: Vec<u32>,
    pub dp: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpTerm {
    pub left: HSymbol,
    pub right: CliffordWord,
    pub dx: Vec<u32>,
    pub dp: Vec<u32>,
    pub eps: u32,
}

/// Finite sum of canonical terms; powers ε^k with k > eps_trunc are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct OpSeries {
    shape: FoliationShape,
    eps_trunc: u32,
    terms: BTreeMap<OpKey, HSymbol>,
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for j in 0..k {
        r = r * (n - j) / (j + 1);
    }
    r
}

/// All β ≤ α componentwise.
fn sub_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| (0..=a).map(move |b| [v.clone(), vec![b]].concat()))
            .collect();
    }
    out
}

/// Negates the terms of odd Clifford parity.
pub fn grade_twist(c: &HSymbol) -> HSymbol {
    c.map_terms(|k, f| {
        vec![(
            if k.word.is_odd() { f.neg() } else { f.clone() },
            k.mono.clone(),
            k.word,
        )]
    })
}

fn word_sum_symbol(shape: FoliationShape, ws: &WordSum, floor: i64) -> HSymbol {
    let n = shape.n();
    let mut s = HSymbol::zero(shape, 0, floor.min(0));
    for (w, c) in ws {
        s.add_term(
            FourierFunction::constant(n, ExactScalar::from_int(*c)),
            crate::symbols::Monomial::one(n),
            *w,
        );
    }
    s
}

/// Largest degree carrying a nonzero component.
pub fn symbol_degree(a: &HSymbol) -> Option<i64> {
    a.iter().next().map(|(d, _, _)| d)
}

impl OpKey {
    pub fn plain(n: usize) -> Self {
        OpKey {
            eps: 0,
            right: CliffordWord::ONE,
            dx: vec![0; n],
            dp: vec![0; n],
        }
    }

    /// Twice the filtration weight of the derivative, ε and right-word part.
    pub fn weight2(&self, shape: &FoliationShape) -> i64 {
        let mut w = -(self.eps as i64);
        for j in 0..shape.n() {
            let wj = shape.weight(j);
            w += self.dp[j] as i64 * (1 - 2 * wj) + self.dx[j] as i64 * (1 + 2 * wj);
        }
        w
    }

    pub fn deriv_order(&self) -> u32 {
        self.dx.iter().sum::<u32>() + self.dp.iter().sum::<u32>()
    }
}

impl OpSeries {
    pub fn zero(shape: FoliationShape, eps_trunc: u32) -> Self {
        OpSeries {
            shape,
            eps_trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn shape(&self) -> FoliationShape {
        self.shape
    }

    pub fn eps_trunc(&self) -> u32 {
        self.eps_trunc
    }

    pub fn terms(&self) -> &BTreeMap<OpKey, HSymbol> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_terms(&self) -> Vec<OpTerm> {
        self.terms
            .iter()
            .map(|(k, a)| OpTerm {
                left: a.clone(),
                right: k.right,
                dx: k.dx.clone(),
                dp: k.dp.clone(),
                eps: k.eps,
            })
            .collect()
    }

    pub fn from_terms(
        shape: FoliationShape,
        eps_trunc: u32,
        terms: Vec<OpTerm>,
    ) -> Result<Self, OpError> {
        let mut s = Self::zero(shape, eps_trunc);
        for t in terms {
            if t.left.shape() != shape || t.dx.len() != shape.n() || t.dp.len() != shape.n() {
                return Err(OpError::ShapeMismatch);
            }
            s.insert(
                OpKey {
                    eps: t.eps,
                    right: t.right,
                    dx: t.dx,
                    dp: t.dp,
                },
                t.left,
            );
        }
        Ok(s)
    }

    /// Adds a term, dropping unknown ε powers and zero symbols.
    pub fn insert(&mut self, key: OpKey, a: HSymbol) {
        if key.eps > self.eps_trunc || a.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&key) {
            Some(b) => b.add(&a).expect("same shape"),
            None => a,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    /// a_L.
    pub fn left(a: HSymbol, eps_trunc: u32) -> Self {
        let mut s = Self::zero(a.shape(), eps_trunc);
        s.insert(OpKey::plain(a.shape().n()), a);
        s
    }

    pub fn identity(shape: FoliationShape, eps_trunc: u32, floor: i64) -> Self {
        Self::left(HSymbol::one(shape, floor), eps_trunc)
    }

    pub fn scalar(shape: FoliationShape, c: ExactScalar, eps_trunc: u32, floor: i64) -> Self {
        Self::left(HSymbol::scalar(shape, c, floor), eps_trunc)
    }

    /// Σ c_w (w)_R.
    pub fn right(shape: FoliationShape, ws: &WordSum, eps_trunc: u32, floor: i64) -> Self {
        let mut s = Self::zero(shape, eps_trunc);
        for (w, c) in ws {
            let key = OpKey {
                right: *w,
                ..OpKey::plain(shape.n())
            };
            s.insert(
                key,
                HSymbol::scalar(shape, ExactScalar::from_int(*c), floor),
            );
        }
        s
    }

    /// (w)_R for a single word.
    pub fn right_word(shape: FoliationShape, w: CliffordWord, eps_trunc: u32, floor: i64) -> Self {
        Self::right(shape, &WordSum::from([(w, 1)]), eps_trunc, floor)
    }

    /// Σ c_w (w)_L for a Clifford word sum.
    pub fn left_words(shape: FoliationShape, ws: &WordSum, eps_trunc: u32, floor: i64) -> Self {
        Self::left(word_sum_symbol(shape, ws, floor), eps_trunc)
    }

    /// c ε^k ∂_x^α ∂_p^β.
    pub fn derivative(
        shape: FoliationShape,
        c: ExactScalar,
        dx: Vec<u32>,
        dp: Vec<u32>,
        eps: u32,
        eps_trunc: u32,
        floor: i64,
    ) -> Self {
        let mut s = Self::zero(shape, eps_trunc);
        s.insert(
            OpKey {
                eps,
                right: CliffordWord::ONE,
                dx,
                dp,
            },
            HSymbol::scalar(shape, c, floor),
        );
        s
    }

    pub fn dx(shape: FoliationShape, j: usize, eps_trunc: u32, floor: i64) -> Self {
        let n = shape.n();
        Self::derivative(
            shape,
            ExactScalar::one(),
            unit(n, j),
            vec![0; n],
            0,
            eps_trunc,
            floor,
        )
    }

    pub fn dp(shape: FoliationShape, j: usize, eps_trunc: u32, floor: i64) -> Self {
        let n = shape.n();
        Self::derivative(
            shape,
            ExactScalar::one(),
            vec![0; n],
            unit(n, j),
            0,
            eps_trunc,
            floor,
        )
    }

    /// Multiplies every term by ε^k.
    pub fn shift_eps(&self, k: u32) -> Self {
        let mut s = Self::zero(self.shape, self.eps_trunc);
        for (key, a) in &self.terms {
            s.insert(
                OpKey {
                    eps: key.eps + k,
                    ..key.clone()
                },
                a.clone(),
            );
        }
        s
    }

    pub fn with_eps_trunc(&self, n: u32) -> Self {
        let mut s = Self::zero(self.shape, n);
        for (k, a) in &self.terms {
            s.insert(k.clone(), a.clone());
        }
        s
    }

    pub fn add(&self, other: &OpSeries) -> Result<OpSeries, OpError> {
        if self.shape != other.shape {
            return Err(OpError::ShapeMismatch);
        }
        let mut s = self.clone();
        s.add_assign(other)?;
        Ok(s)
    }

    pub fn add_assign(&mut self, other: &OpSeries) -> Result<(), OpError> {
        if self.shape != other.shape {
            return Err(OpError::ShapeMismatch);
        }
        if other.eps_trunc < self.eps_trunc {
            self.eps_trunc = other.eps_trunc;
            self.terms.retain(|k, _| k.eps <= other.eps_trunc);
        }
        for (k, a) in &other.terms {
            self.insert(k.clone(), a.clone());
        }
        Ok(())
    }

    pub fn neg(&self) -> OpSeries {
        self.scale(&ExactScalar::from_int(-1))
    }

    pub fn sub(&self, other: &OpSeries) -> Result<OpSeries, OpError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> OpSeries {
        let mut s = Self::zero(self.shape, self.eps_trunc);
        for (k, a) in &self.terms {
            s.insert(k.clone(), a.scale(c));
        }
        s
    }

    /// Splits into (even, odd) parts for the total Z/2 grading.
    pub fn parity_split(&self) -> (OpSeries, OpSeries) {
        let mut even = Self::zero(self.shape, self.eps_trunc);
        let mut odd = Self::zero(self.shape, self.eps_trunc);
        for (k, a) in &self.terms {
            let (ae, ao) = split_symbol(a);
            let (e, o) = if k.right.is_odd() { (ao, ae) } else { (ae, ao) };
            even.insert(k.clone(), e);
            odd.insert(k.clone(), o);
        }
        (even, odd)
    }

    pub fn is_even(&self) -> bool {
        self.parity_split().1.is_zero()
    }

    /// Twice the filtration weight of each term: 2·ord(a) − k + Σβ_j(1 − 2w_j) + Σα_j(1 + 2w_j).
    pub fn weights2(&self) -> Vec<i64> {
        self.terms
            .iter()
            .filter_map(|(k, a)| symbol_degree(a).map(|d| 2 * d + k.weight2(&self.shape)))
            .collect()
    }

    /// Least m with self ∈ 𝒟^m, or None for zero.
    pub fn order(&self) -> Option<BigRational> {
        self.weights2()
            .into_iter()
            .max()
            .map(|w| BigRational::new(w.into(), 2.into()))
    }

    /// Least ε power present.
    pub fn min_eps(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.eps).min()
    }

    /// Membership in 𝒟^m_k.
    pub fn in_filtration(&self, m: &BigRational, k: u32) -> bool {
        let m2 = m * BigRational::from_integer(2.into());
        self.terms.keys().all(|key| key.eps >= k)
            && self
                .weights2()
                .into_iter()
                .all(|w| BigRational::from_integer(w.into()) <= m2)
    }

    /// Equality of the known parts.
    pub fn agrees_with(&self, other: &OpSeries) -> bool {
        let n = self.eps_trunc.min(other.eps_trunc);
        self.with_eps_trunc(n)
            .sub(&other.with_eps_trunc(n))
            .map(|d| d.is_zero())
            .unwrap_or(false)
    }

    /// Component at ε^k.
    pub fn eps_component(&self, k: u32) -> OpSeries {
        let mut s = Self::zero(self.shape, self.eps_trunc);
        for (key, a) in self.terms.range(
            OpKey {
                eps: k,
                right: CliffordWord::ONE,
                dx: vec![],
                dp: vec![],
            }..,
        ) {
            if key.eps != k {
                break;
            }
            s.insert(key.clone(), a.clone());
        }
        s
    }

    pub fn get(&self, key: &OpKey) -> Option<&HSymbol> {
        self.terms.get(key)
    }
}

fn split_symbol(a: &HSymbol) -> (HSymbol, HSymbol) {
    let pick = |odd: bool| {
        a.map_terms(|k, f| {
            if k.word.is_odd() == odd {
                vec![(f.clone(), k.mono.clone(), k.word)]
            } else {
                vec![]
            }
        })
    };
    (pick(false), pick(true))
}

fn deriv_symbol(b: &HSymbol, ax: &[u32], ap: &[u32]) -> HSymbol {
    let mut c = b.clone();
    for (j, &a) in ax.iter().enumerate() {
        for _ in 0..a {
            c = c.deriv_x(j);
        }
    }
    for (j, &a) in ap.iter().enumerate() {
        for _ in 0..a {
            if c.is_zero() {
                return c;
            }
            c = c.deriv_p(j);
        }
    }
    c
}

/// Canonical form of s ∘ t.
pub fn op_compose(s: &OpSeries, t: &OpSeries) -> Result<OpSeries, OpError> {
    if s.shape != t.shape {
        return Err(OpError::ShapeMismatch);
    }
    let trunc = s.eps_trunc.min(t.eps_trunc);
    let mut out = OpSeries::zero(s.shape, trunc);
    let mut dcache: HashMap<(usize, Vec<u32>, Vec<u32>), HSymbol> = HashMap::new();
    for (ka, a) in &s.terms {
        for (ib, (kb, b)) in t.terms.iter().enumerate() {
            if ka.eps + kb.eps > trunc {
                continue;
            }
            let eps = ka.eps + kb.eps;
            // (u_R)(w_R)... : w_R u_R = (−1)^{|u||w|} (u w)_R.
            let rsign: i64 = if ka.right.is_odd() && kb.right.is_odd() {
                -1
            } else {
                1
            };
            let words = kb.right.mul(&ka.right);
            for ax in sub_indices(&ka.dx) {
                for ap in sub_indices(&ka.dp) {
                    let c = dcache
                        .entry((ib, ax.clone(), ap.clone()))
                        .or_insert_with(|| deriv_symbol(b, &ax, &ap))
                        .clone();
                    if c.is_zero() {
                        continue;
                    }
                    let mut mult = BigInt::one();
                    for j in 0..ax.len() {
                        mult *= binom(ka.dx[j], ax[j]) * binom(ka.dp[j], ap[j]);
                    }
                    let c = if ka.right.is_odd() {
                        grade_twist(&c)
                    } else {
                        c
                    };
                    let left = a
                        .star(&c)?
                        .scale(&ExactScalar::from_rational(BigRational::from_integer(mult)));
                    let dx: Vec<u32> = (0..ax.len()).map(|j| ka.dx[j] - ax[j] + kb.dx[j]).collect();
                    let dp: Vec<u32> = (0..ap.len()).map(|j| ka.dp[j] - ap[j] + kb.dp[j]).collect();
                    for (w, ws) in &words {
                        let key = OpKey {
                            eps,
                            right: *w,
                            dx: dx.clone(),
                            dp: dp.clone(),
                        };
                        out.insert(key, left.scale(&ExactScalar::from_int(rsign * ws)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Graded commutator [s, t] = st − (−1)^{|s||t|} ts.
pub fn graded_commutator(s: &OpSeries, t: &OpSeries) -> Result<OpSeries, OpError> {
    let (se, so) = s.parity_split();
    let (te, to) = t.parity_split();
    let plain = op_compose(s, &te)?.sub(&op_compose(&te, s)?)?;
    let even_odd = op_compose(&se, &to)?.sub(&op_compose(&to, &se)?)?;
    let odd_odd = op_compose(&so, &to)?.add(&op_compose(&to, &so)?)?;
    plain.add(&even_odd)?.add(&odd_odd)
}

/// s^k by repeated composition.
pub fn op_pow(s: &OpSeries, k: u32, floor: i64) -> Result<OpSeries, OpError> {
    let mut acc = OpSeries::identity(s.shape, s.eps_trunc, floor);
    for _ in 0..k {
        acc = op_compose(&acc, s)?;
    }
    Ok(acc)
}

/// iε Σ_i ∂_{x^i}∂_{p_i}.
pub fn flat_laplacian(shape: FoliationShape, eps_trunc: u32, floor: i64) -> OpSeries {
    let n = shape.n();
    let mut s = OpSeries::zero(shape, eps_trunc);
    for i in 0..n {
        let key = OpKey {
            eps: 1,
            right: CliffordWord::ONE,
            dx: unit(n, i),
            dp: unit(n, i),
        };
        s.insert(key, HSymbol::scalar(shape, ExactScalar::i(), floor));
    }
    s
}

/// Even, in 𝒟^{1/2}_1, and equal to the flat Laplacian modulo 𝒟^0_1.
pub fn is_generalized_laplacian(s: &OpSeries) -> bool {
    let half = BigRational::new(1.into(), 2.into());
    if !s.is_even() || !s.in_filtration(&half, 1) {
        return false;
    }
    let floor = s.terms.values().map(|a| a.floor()).min().unwrap_or(-1);
    match s.sub(&flat_laplacian(s.shape, s.eps_trunc, floor)) {
        Ok(r) => r.in_filtration(&BigRational::zero(), 1),
        Err(_) => false,
    }
}

/// A series checked to be a generalized Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedLaplacian(OpSeries);

impl GeneralizedLaplacian {
    pub fn new(s: OpSeries) -> Result<Self, OpError> {
        if is_generalized_laplacian(&s) {
            Ok(GeneralizedLaplacian(s))
        } else {
            Err(OpError::NotGeneralizedLaplacian)
        }
    }

    pub fn flat(shape: FoliationShape, eps_trunc: u32, floor: i64) -> Self {
        GeneralizedLaplacian(flat_laplacian(shape, eps_trunc, floor))
    }

    pub fn series(&self) -> &OpSeries {
        &self.0
    }
}

impl std::fmt::Display for OpSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} mod eps^{}]", self.shape, self.eps_trunc + 1)?;
        for (k, a) in &self.terms {
            write!(
                f,
                "\n eps^{} ({})_R dx{:?} dp{:?}:",
                k.eps, k.right, k.dx, k.dp
            )?;
            for (d, tk, c) in a.iter() {
                write!(
                    f,
                    "\n    deg {}: {:?} * {} * {}",
                    d,
                    c.coeffs(),
                    tk.mono,
                    tk.word
                )?;
            }
        }
        Ok(())
    }
}

/// Action on a symbol ξ, graded by powers of ε: a ⋆ (±(∂_x^α∂_p^β ξ) w).
pub fn apply(s: &OpSeries, xi: &HSymbol) -> Result<BTreeMap<u32, HSymbol>, OpError> {
    if s.shape != xi.shape() {
        return Err(OpError::ShapeMismatch);
    }
    let mut out: BTreeMap<u32, HSymbol> = BTreeMap::new();
    for (k, a) in &s.terms {
        let d = deriv_symbol(xi, &k.dx, &k.dp);
        let d = if k.right.is_odd() { grade_twist(&d) } else { d };
        let w = word_sum_symbol(s.shape, &WordSum::from([(k.right, 1)]), d.floor());
        let r = a.star(&d.star(&w)?)?;
        let e = match out.remove(&k.eps) {
            Some(x) => x.add(&r)?,
            None => r,
        };
        out.insert(k.eps, e);
    }
    Ok(out)
}
