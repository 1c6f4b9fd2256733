//! Normal-ordered words in ψ^i, ψ̄_i acting on the exterior algebra fiber.
//!
//! Indices are zero-based internally and rendered one-based.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::ExactScalar;

/// ψ^{i_1}…ψ^{i_r} ψ̄_{j_1}…ψ̄_{j_s} with increasing indices, as bitmasks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordWord {
    pub psi: u32,
    pub psibar: u32,
}

/// A single generator ψ^i or ψ̄_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Psi(usize),
    PsiBar(usize),
}

/// Signed integer combination of normal words.
pub type WordSum = BTreeMap<CliffordWord, i64>;

fn below(mask: u32, i: usize) -> u32 {
    (mask & ((1u32 << i) - 1)).count_ones()
}

fn above(mask: u32, i: usize) -> u32 {
    (mask >> (i + 1)).count_ones()
}

fn sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn add_to(sum: &mut WordSum, w: CliffordWord, c: i64) {
    if c == 0 {
        return;
    }
    let e = sum.entry(w).or_insert(0);
    *e += c;
    if *e == 0 {
        sum.remove(&w);
    }
}

impl CliffordWord {
    pub const ONE: CliffordWord = CliffordWord { psi: 0, psibar: 0 };

    pub fn new(psi: u32, psibar: u32) -> Self {
        CliffordWord { psi, psibar }
    }

    pub fn from_sets(psi: &[usize], psibar: &[usize]) -> Self {
        let m = |s: &[usize]| s.iter().fold(0u32, |acc, &i| acc | (1 << i));
        CliffordWord {
            psi: m(psi),
            psibar: m(psibar),
        }
    }

    pub fn psi_set(&self) -> Vec<usize> {
        (0..32).filter(|i| self.psi >> i & 1 == 1).collect()
    }

    pub fn psibar_set(&self) -> Vec<usize> {
        (0..32).filter(|i| self.psibar >> i & 1 == 1).collect()
    }

    /// ψ^1…ψ^n ψ̄_1…ψ̄_n.
    pub fn top(n: usize) -> Self {
        let m = if n == 0 { 0 } else { (1u32 << n) - 1 };
        CliffordWord { psi: m, psibar: m }
    }

    pub fn is_one(&self) -> bool {
        self.psi == 0 && self.psibar == 0
    }

    pub fn len(&self) -> u32 {
        self.psi.count_ones() + self.psibar.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.is_one()
    }

    /// Z/2 degree.
    pub fn is_odd(&self) -> bool {
        self.len() % 2 == 1
    }

    /// Largest index used, plus one.
    pub fn span(&self) -> usize {
        32 - (self.psi | self.psibar).leading_zeros() as usize
    }

    /// Generators in normal order.
    pub fn generators(&self) -> Vec<Generator> {
        let mut g: Vec<Generator> = self.psi_set().into_iter().map(Generator::Psi).collect();
        g.extend(self.psibar_set().into_iter().map(Generator::PsiBar));
        g
    }

    fn mul_generator(&self, g: Generator) -> Vec<(CliffordWord, i64)> {
        match g {
            Generator::PsiBar(j) => {
                if self.psibar >> j & 1 == 1 {
                    vec![]
                } else {
                    let s = sign(above(self.psibar, j));
                    vec![(
                        CliffordWord {
                            psi: self.psi,
                            psibar: self.psibar | 1 << j,
                        },
                        s,
                    )]
                }
            }
            Generator::Psi(i) => {
                let mut out = Vec::new();
                let nb = self.psibar.count_ones();
                if self.psi >> i & 1 == 0 {
                    let s = sign(nb) * sign(above(self.psi, i));
                    out.push((
                        CliffordWord {
                            psi: self.psi | 1 << i,
                            psibar: self.psibar,
                        },
                        s,
                    ));
                }
                if self.psibar >> i & 1 == 1 {
                    let s = sign(above(self.psibar, i));
                    out.push((
                        CliffordWord {
                            psi: self.psi,
                            psibar: self.psibar & !(1 << i),
                        },
                        s,
                    ));
                }
                out
            }
        }
    }

    /// Normal-ordered product self · other.
    pub fn mul(&self, other: &CliffordWord) -> WordSum {
        let mut cur: WordSum = BTreeMap::new();
        cur.insert(*self, 1);
        if other.is_one() {
            return cur;
        }
        for g in other.generators() {
            let mut next = BTreeMap::new();
            for (w, c) in &cur {
                for (w2, s) in w.mul_generator(g) {
                    add_to(&mut next, w2, c * s);
                }
            }
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// Ungraded trace on Λ•ℂ^n, normalized by the fiber dimension 2^n.
    pub fn normalized_trace(&self) -> BigRational {
        if self.psi != self.psibar {
            return BigRational::zero();
        }
        let k = self.psi.count_ones();
        let s = sign(k * k.saturating_sub(1) / 2);
        BigRational::new(s.into(), num_bigint::BigInt::one() << k)
    }

    /// Ungraded trace on Λ•ℂ^n.
    pub fn trace(&self, n: usize) -> i64 {
        if self.psi != self.psibar || self.span() > n {
            return 0;
        }
        let k = self.psi.count_ones();
        sign(k * k.saturating_sub(1) / 2) << (n as u32 - k)
    }

    /// Graded trace normalized so that (−1)^n str(ψ^1…ψ^nψ̄_1…ψ̄_n) = 1.
    pub fn supertrace(&self, n: usize) -> i64 {
        if *self == CliffordWord::top(n) {
            sign(n as u32)
        } else {
            0
        }
    }

    /// Matrix of the word on the basis e_S of Λ•ℂ^n, S ⊆ {0..n} as bitmask.
    pub fn matrix(&self, n: usize) -> Vec<Vec<i64>> {
        let dim = 1usize << n;
        let mut m = vec![vec![0i64; dim]; dim];
        for s in 0..dim {
            let mut v = Some((s as u32, 1i64));
            for g in self.generators().into_iter().rev() {
                v = v.and_then(|(set, c)| apply_generator(g, set, c));
            }
            if let Some((t, c)) = v {
                m[t as usize][s] += c;
            }
        }
        m
    }
}

/// ψ^i = dx^i∧ and ψ̄_i = ι(∂_i) on a basis vector.
pub fn apply_generator(g: Generator, set: u32, c: i64) -> Option<(u32, i64)> {
    match g {
        Generator::Psi(i) => {
            if set >> i & 1 == 1 {
                None
            } else {
                Some((set | 1 << i, c * sign(below(set, i))))
            }
        }
        Generator::PsiBar(i) => {
            if set >> i & 1 == 0 {
                None
            } else {
                Some((set & !(1 << i), c * sign(below(set, i))))
            }
        }
    }
}

/// Product of an arbitrary sequence of generators, normal ordered.
pub fn generator_product(seq: &[Generator]) -> WordSum {
    let mut cur: WordSum = BTreeMap::new();
    cur.insert(CliffordWord::ONE, 1);
    for &g in seq {
        let mut next = BTreeMap::new();
        for (w, c) in &cur {
            for (w2, s) in w.mul_generator(g) {
                add_to(&mut next, w2, c * s);
            }
        }
        cur = next;
    }
    cur
}

/// (tr, str) of a word on the 2^n-dimensional fiber.
pub fn clifford_traces(w: &CliffordWord, n: usize) -> (ExactScalar, ExactScalar) {
    (
        ExactScalar::from_int(w.trace(n)),
        ExactScalar::from_int(w.supertrace(n)),
    )
}

pub fn clifford_mul(u: &CliffordWord, w: &CliffordWord) -> WordSum {
    u.mul(w)
}

impl std::fmt::Display for CliffordWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for i in self.psi_set() {
            parts.push(format!("ψ^{}", i + 1));
        }
        for i in self.psibar_set() {
            parts.push(format!("ψ̄_{}", i + 1));
        }
        write!(f, "{}", parts.join(""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let d = a.len();
        let mut c = vec![vec![0; d]; d];
        for i in 0..d {
            for k in 0..d {
                if a[i][k] != 0 {
                    for j in 0..d {
                        c[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
        }
        c
    }

    fn sum_matrix(s: &WordSum, n: usize) -> Vec<Vec<i64>> {
        let d = 1 << n;
        let mut m = vec![vec![0; d]; d];
        for (w, c) in s {
            let wm = w.matrix(n);
            for i in 0..d {
                for j in 0..d {
                    m[i][j] += c * wm[i][j];
                }
            }
        }
        m
    }

    fn all_words(n: usize) -> Vec<CliffordWord> {
        let mut v = Vec::new();
        for a in 0..(1u32 << n) {
            for b in 0..(1u32 << n) {
                v.push(CliffordWord::new(a, b));
            }
        }
        v
    }

    #[test]
    fn defining_relations() {
        let p1 = CliffordWord::from_sets(&[0], &[]);
        let pb1 = CliffordWord::from_sets(&[], &[0]);
        let n11 = CliffordWord::from_sets(&[0], &[0]);
        let s = pb1.mul(&p1);
        assert_eq!(s.get(&CliffordWord::ONE), Some(&1));
        assert_eq!(s.get(&n11), Some(&-1));
        assert!(p1.mul(&p1).is_empty());
        assert_eq!(n11.mul(&n11), BTreeMap::from([(n11, 1)]));
        assert_eq!(n11.mul(&CliffordWord::ONE), BTreeMap::from([(n11, 1)]));
    }

    #[test]
    fn agrees_with_matrices_exhaustively() {
        for n in 1..=3 {
            let words = all_words(n);
            for u in &words {
                let mu = u.matrix(n);
                for w in &words {
                    let lhs = sum_matrix(&u.mul(w), n);
                    assert_eq!(lhs, matmul(&mu, &w.matrix(n)), "{} * {} (n={})", u, w, n);
                }
            }
        }
    }

    #[test]
    fn traces_match_matrices() {
        for n in 1..=3 {
            let norm = sign((n * (n - 1) / 2) as u32);
            for w in all_words(n) {
                let m = w.matrix(n);
                let tr: i64 = (0..1 << n).map(|s| m[s][s]).sum();
                let gr: i64 = (0..1usize << n)
                    .map(|s| sign(s.count_ones()) * m[s][s])
                    .sum();
                assert_eq!(w.trace(n), tr);
                assert_eq!(w.supertrace(n), norm * gr, "{}", w);
            }
        }
    }

    #[test]
    fn trace_examples() {
        for n in 1..=4 {
            let (tr, st) = clifford_traces(&CliffordWord::ONE, n);
            assert_eq!(tr, ExactScalar::from_int(1 << n));
            assert!(st.is_zero());
            let top = CliffordWord::top(n);
            assert_eq!(sign(n as u32) * top.supertrace(n), 1);
        }
    }
}
