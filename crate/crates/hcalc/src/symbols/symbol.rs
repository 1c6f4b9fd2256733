//! Truncated Heisenberg symbols Σ_{floor ≤ d ≤ top} σ_d and their star product.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::clifford::CliffordWord;
use super::monomial::{MonoPoly, Monomial};
use super::shape::FoliationShape;
use super::SymbolError;
use crate::scalar::{ExactScalar, FourierFunction};

/// Basis element p^γ ρ^{q/4} (log ρ)^l ⊗ word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub mono: Monomial,
    pub word: CliffordWord,
}

/// One term c(x) p^γ ρ^{q/4} (log ρ)^l w.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSymbolTerm {
    pub coeff: FourierFunction,
    pub gamma: Vec<u32>,
    pub rho_quarter: i64,
    pub log_pow: u8,
    pub word: CliffordWord,
}

impl HSymbolTerm {
    pub fn degree(&self, shape: &FoliationShape) -> i64 {
        shape.weighted(&self.gamma) + self.rho_quarter
    }

    fn key(&self) -> TermKey {
        TermKey {
            mono: Monomial {
                gamma: self.gamma.clone(),
                rho_q: self.rho_quarter,
                log_pow: self.log_pow,
            },
            word: self.word,
        }
    }
}

type Component = BTreeMap<TermKey, FourierFunction>;

/// Classical Heisenberg symbol known on degrees floor..=top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSymbol {
    shape: FoliationShape,
    top: i64,
    floor: i64,
    comps: BTreeMap<i64, Component>,
}

fn add_coeff(comp: &mut Component, key: TermKey, f: FourierFunction) {
    use std::collections::btree_map::Entry;
    if f.is_zero() {
        return;
    }
    match comp.entry(key) {
        Entry::Vacant(e) => {
            e.insert(f);
        }
        Entry::Occupied(mut e) => {
            e.get_mut().add_assign(&f);
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl HSymbol {
    pub fn zero(shape: FoliationShape, top: i64, floor: i64) -> Self {
        assert!(floor <= top, "floor above top");
        HSymbol {
            shape,
            top,
            floor,
            comps: BTreeMap::new(),
        }
    }

    pub fn one(shape: FoliationShape, floor: i64) -> Self {
        Self::scalar(shape, ExactScalar::one(), floor)
    }

    pub fn scalar(shape: FoliationShape, c: ExactScalar, floor: i64) -> Self {
        Self::from_fourier(FourierFunction::constant(shape.n(), c), shape, floor)
    }

    /// x-dependent symbol of degree 0.
    pub fn from_fourier(f: FourierFunction, shape: FoliationShape, floor: i64) -> Self {
        let mut s = Self::zero(shape, 0, floor.min(0));
        s.add_term(f, Monomial::one(shape.n()), CliffordWord::ONE);
        s
    }

    pub fn from_terms(
        shape: FoliationShape,
        top: i64,
        floor: i64,
        terms: impl IntoIterator<Item = HSymbolTerm>,
    ) -> Result<Self, SymbolError> {
        if floor > top {
            return Err(SymbolError::BadTruncation { top, floor });
        }
        let mut s = Self::zero(shape, top, floor);
        for t in terms {
            if t.gamma.len() != shape.n() || t.coeff.dim() != shape.n() || t.word.span() > shape.n()
            {
                return Err(SymbolError::ShapeMismatch);
            }
            if t.log_pow > 1 {
                return Err(SymbolError::NotClassical);
            }
            let d = t.degree(&shape);
            if d > top {
                return Err(SymbolError::DegreeAboveTop { degree: d, top });
            }
            let key = t.key();
            s.add_term(t.coeff, key.mono, key.word);
        }
        Ok(s)
    }

    pub fn shape(&self) -> FoliationShape {
        self.shape
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Adds c·m·w after reduction; terms below the floor are dropped.
    pub fn add_term(&mut self, c: FourierFunction, m: Monomial, w: CliffordWord) {
        if c.is_zero() {
            return;
        }
        let d = m.degree(&self.shape);
        assert!(d <= self.top, "term degree {} above top {}", d, self.top);
        if d < self.floor {
            return;
        }
        let canon = m.canonical(&self.shape);
        let comp = self.comps.entry(d).or_default();
        for (m2, r) in canon {
            add_coeff(comp, TermKey { mono: m2, word: w }, c.scale_rational(&r));
        }
        if comp.is_empty() {
            self.comps.remove(&d);
        }
    }

    /// Iterates (degree, key, coefficient) from high to low degree.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &TermKey, &FourierFunction)> {
        self.comps
            .iter()
            .rev()
            .flat_map(|(d, c)| c.iter().map(move |(k, f)| (*d, k, f)))
    }

    pub fn terms(&self) -> Vec<HSymbolTerm> {
        self.iter()
            .map(|(_, k, f)| HSymbolTerm {
                coeff: f.clone(),
                gamma: k.mono.gamma.clone(),
                rho_quarter: k.mono.rho_q,
                log_pow: k.mono.log_pow,
                word: k.word,
            })
            .collect()
    }

    pub fn num_terms(&self) -> usize {
        self.comps.values().map(|c| c.len()).sum()
    }

    /// The degree-d component as a one-degree symbol.
    pub fn component(&self, d: i64) -> HSymbol {
        let mut s = Self::zero(self.shape, d, d);
        if let Some(c) = self.comps.get(&d) {
            s.comps.insert(d, c.clone());
        }
        s
    }

    pub fn component_terms(&self, d: i64) -> impl Iterator<Item = (&TermKey, &FourierFunction)> {
        self.comps.get(&d).into_iter().flat_map(|c| c.iter())
    }

    pub fn leading(&self) -> HSymbol {
        self.component(self.top)
    }

    /// True when every known component vanishes.
    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_classical(&self) -> bool {
        self.iter().all(|(_, k, _)| k.mono.log_pow == 0)
    }

    /// True when every word of every term is even.
    pub fn is_even(&self) -> bool {
        self.iter().all(|(_, k, _)| !k.word.is_odd())
    }

    /// True when no coefficient depends on x.
    pub fn is_x_independent(&self) -> bool {
        self.iter()
            .all(|(_, _, f)| f.coeffs().keys().all(|k| k.iter().all(|&a| a == 0)))
    }

    /// Raises the floor, discarding lower components.
    pub fn truncate(&self, floor: i64) -> HSymbol {
        let floor = floor.max(self.floor).min(self.top);
        let mut s = self.clone();
        s.floor = floor;
        s.comps.retain(|d, _| *d >= floor);
        s
    }

    /// Lowers top to the highest nonvanishing degree.
    pub fn trim_top(&self) -> HSymbol {
        let mut s = self.clone();
        s.top = self.comps.keys().next_back().copied().unwrap_or(self.floor);
        s
    }

    /// Reinterprets with a higher declared top.
    pub fn with_top(&self, top: i64) -> HSymbol {
        let mut s = self.clone();
        s.top = top.max(self.top);
        s
    }

    /// Exact equality on the jointly trusted degrees.
    pub fn trusted_eq(&self, other: &HSymbol) -> bool {
        if self.shape != other.shape {
            return false;
        }
        let f = self.floor.max(other.floor);
        let empty = Component::new();
        let degrees: std::collections::BTreeSet<i64> = self
            .comps
            .keys()
            .chain(other.comps.keys())
            .copied()
            .filter(|d| *d >= f)
            .collect();
        degrees
            .into_iter()
            .all(|d| self.comps.get(&d).unwrap_or(&empty) == other.comps.get(&d).unwrap_or(&empty))
    }

    fn check_shape(&self, other: &HSymbol) -> Result<(), SymbolError> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(SymbolError::ShapeMismatch)
        }
    }

    pub fn add(&self, other: &HSymbol) -> Result<HSymbol, SymbolError> {
        self.check_shape(other)?;
        let mut s = Self::zero(
            self.shape,
            self.top.max(other.top),
            self.floor.max(other.floor),
        );
        for src in [self, other] {
            for (d, c) in &src.comps {
                if *d < s.floor {
                    continue;
                }
                let comp = s.comps.entry(*d).or_default();
                for (k, f) in c {
                    add_coeff(comp, k.clone(), f.clone());
                }
                if comp.is_empty() {
                    s.comps.remove(d);
                }
            }
        }
        Ok(s)
    }

    pub fn neg(&self) -> HSymbol {
        self.map_coeffs(|f| f.neg())
    }

    pub fn sub(&self, other: &HSymbol) -> Result<HSymbol, SymbolError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> HSymbol {
        if c.is_one() {
            return self.clone();
        }
        if c.neg_ref().is_one() {
            return self.map_coeffs(|f| f.neg());
        }
        self.map_coeffs(|f| f.scale(c))
    }

    /// Pointwise product with an x-function, which equals f ⋆ a.
    pub fn mul_fourier(&self, g: &FourierFunction) -> HSymbol {
        self.map_coeffs(|f| f.mul(g))
    }

    fn map_coeffs(&self, op: impl Fn(&FourierFunction) -> FourierFunction) -> HSymbol {
        let mut s = Self::zero(self.shape, self.top, self.floor);
        for (d, c) in &self.comps {
            let comp: Component = c
                .iter()
                .map(|(k, f)| (k.clone(), op(f)))
                .filter(|(_, f)| !f.is_zero())
                .collect();
            if !comp.is_empty() {
                s.comps.insert(*d, comp);
            }
        }
        s
    }

    /// Applies a transformation term by term, keeping the degree bookkeeping.
    pub fn map_terms(
        &self,
        op: impl Fn(&TermKey, &FourierFunction) -> Vec<(FourierFunction, Monomial, CliffordWord)>,
    ) -> HSymbol {
        let mut s = Self::zero(self.shape, self.top, self.floor);
        for (_, k, f) in self.iter() {
            for (c, m, w) in op(k, f) {
                s.add_term(c, m, w);
            }
        }
        s
    }

    /// ∂/∂x_j.
    pub fn deriv_x(&self, j: usize) -> HSymbol {
        self.map_coeffs(|f| f.deriv(j))
    }

    /// ∂/∂p_i; lowers top and floor by the weight of i.
    pub fn deriv_p(&self, i: usize) -> HSymbol {
        let w = self.shape.weight(i);
        let mut s = Self::zero(self.shape, self.top - w, self.floor - w);
        for (_, k, f) in self.iter() {
            for (m, r) in k.mono.deriv(&self.shape, i) {
                s.add_term(f.scale_rational(&r), m, k.word);
            }
        }
        s
    }

    /// Fiberwise product (no derivative terms).
    pub fn pointwise_mul(&self, other: &HSymbol) -> Result<HSymbol, SymbolError> {
        self.check_shape(other)?;
        let floor = (self.floor + other.top).max(self.top + other.floor);
        let mut s = Self::zero(self.shape, self.top + other.top, floor);
        for (da, ka, fa) in self.iter() {
            for (db, kb, fb) in other.iter() {
                if da + db < floor {
                    continue;
                }
                mul_into(&mut s, ka, &fa.mul(fb), kb, &BigRational::one())?;
            }
        }
        Ok(s)
    }

    /// σ = Σ_α ((−i)^{|α|}/α!) ∂_p^α a · ∂_x^α b.
    pub fn star(&self, other: &HSymbol) -> Result<HSymbol, SymbolError> {
        self.check_shape(other)?;
        let floor = (self.floor + other.top).max(self.top + other.floor);
        let mut s = Self::zero(self.shape, self.top + other.top, floor);
        star_into(&mut s, self, other, floor, None)?;
        Ok(s)
    }

    /// Star product keeping only multi-indices with |α| ≤ max_order.
    pub fn star_bounded(&self, other: &HSymbol, max_order: u32) -> Result<HSymbol, SymbolError> {
        self.check_shape(other)?;
        let floor = (self.floor + other.top).max(self.top + other.floor);
        let mut s = Self::zero(self.shape, self.top + other.top, floor);
        star_into(&mut s, self, other, floor, Some(max_order))?;
        Ok(s)
    }

    /// a ⋆ b − b ⋆ a.
    pub fn commutator(&self, other: &HSymbol) -> Result<HSymbol, SymbolError> {
        self.star(other)?.sub(&other.star(self)?)
    }

    /// k-fold star power; the zeroth power keeps the depth top − floor.
    pub fn pow(&self, k: u32) -> Result<HSymbol, SymbolError> {
        if k == 0 {
            return Ok(HSymbol::one(self.shape, self.floor - self.top));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.star(self)?;
        }
        Ok(acc)
    }
}

fn mul_into(
    s: &mut HSymbol,
    ka: &TermKey,
    coeff: &FourierFunction,
    kb: &TermKey,
    r: &BigRational,
) -> Result<(), SymbolError> {
    if coeff.is_zero() {
        return Ok(());
    }
    let m = ka.mono.mul_raw(&kb.mono);
    if m.log_pow > 1 {
        return Err(SymbolError::NotClassical);
    }
    for (w, sgn) in ka.word.mul(&kb.word) {
        let rr = r * BigRational::from_integer(BigInt::from(sgn));
        s.add_term(coeff.scale_rational(&rr), m.clone(), w);
    }
    Ok(())
}

fn factorial(alpha: &[u32]) -> BigInt {
    let mut f = BigInt::one();
    for &a in alpha {
        for k in 2..=a {
            f *= k;
        }
    }
    f
}

/// Weighted multi-indices of size ≤ max supported where `active` holds.
fn masked_indices(shape: &FoliationShape, max: i64, active: &[bool]) -> Vec<Vec<u32>> {
    fn rec(
        shape: &FoliationShape,
        active: &[bool],
        i: usize,
        left: i64,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        if !active[i] {
            rec(shape, active, i + 1, left, cur, out);
            return;
        }
        let w = shape.weight(i);
        let mut a = 0;
        while a as i64 * w <= left {
            cur[i] = a;
            rec(shape, active, i + 1, left - a as i64 * w, cur, out);
            a += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if max >= 0 {
        rec(shape, active, 0, max, &mut vec![0; shape.n()], &mut out);
    }
    out
}

fn star_into(
    s: &mut HSymbol,
    a: &HSymbol,
    b: &HSymbol,
    floor: i64,
    max_order: Option<u32>,
) -> Result<(), SymbolError> {
    let shape = a.shape;
    let minus_i = ExactScalar::i().neg_ref();
    let mut dcache: HashMap<(&Monomial, Vec<u32>), MonoPoly> = HashMap::new();
    // ∂_p^α of a polynomial vanishes beyond its degree.
    let poly_deg = a
        .iter()
        .all(|(_, k, _)| {
            k.mono.log_pow == 0
                && k.mono.rho_q >= 0
                && k.mono.rho_q % if shape.n() == 1 { 2 } else { 4 } == 0
        })
        .then(|| a.comps.keys().next_back().copied().unwrap_or(0));
    for (db, kb, gb) in b.iter() {
        let mut budget = a.top + db - floor;
        if let Some(d) = poly_deg {
            budget = budget.min(d);
        }
        let active: Vec<bool> = (0..shape.n())
            .map(|j| gb.coeffs().keys().any(|k| k[j] != 0))
            .collect();
        for alpha in masked_indices(&shape, budget, &active) {
            let order: u32 = alpha.iter().sum();
            if max_order.is_some_and(|m| order > m) {
                continue;
            }
            let dg = if order == 0 {
                gb.clone()
            } else {
                gb.deriv_multi(&alpha)
            };
            if dg.is_zero() {
                continue;
            }
            let wa = shape.weighted(&alpha);
            let pre = minus_i.pow(order);
            let fact = BigRational::new(BigInt::one(), factorial(&alpha));
            for (da, ka, fa) in a.iter() {
                if da + db - wa < floor {
                    break;
                }
                let dp = dcache
                    .entry((&ka.mono, alpha.clone()))
                    .or_insert_with(|| ka.mono.deriv_multi(&shape, &alpha));
                if dp.is_empty() {
                    continue;
                }
                let prod = fa.mul(&dg).scale(&pre);
                for (m, r) in dp.iter() {
                    let k = TermKey {
                        mono: m.clone(),
                        word: ka.word,
                    };
                    mul_into(s, &k, &prod, kb, &(r * &fact))?;
                }
            }
        }
    }
    Ok(())
}

impl std::fmt::Display for HSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} top {} floor {}]", self.shape, self.top, self.floor)?;
        for (d, k, c) in self.iter() {
            write!(f, "\n  deg {}: [{}] * {} * {}", d, c, k.mono, k.word)?;
        }
        Ok(())
    }
}

/// Convenience for x-independent terms.
pub fn const_term(
    c: ExactScalar,
    gamma: Vec<u32>,
    rho_quarter: i64,
    word: CliffordWord,
) -> HSymbolTerm {
    let n = gamma.len();
    HSymbolTerm {
        coeff: FourierFunction::constant(n, c),
        gamma,
        rho_quarter,
        log_pow: 0,
        word,
    }
}
