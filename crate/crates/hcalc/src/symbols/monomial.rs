//! p^γ ρ^{q/4} (log ρ)^l with a canonical basis.
//!
//! For n ≥ 2 the relation p_1^4 = ρ − Σ_{1<i≤v} p_i^4 − Σ_{j>v} p_j^2 is used
//! until γ_1 < 4; for n = 1 the relation p^2 = ρ^{1/2} until γ_1 < 2.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::shape::FoliationShape;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub gamma: Vec<u32>,
    pub rho_q: i64,
    pub log_pow: u8,
}

/// Rational combination of monomials.
pub type MonoPoly = BTreeMap<Monomial, BigRational>;

pub(crate) fn poly_add(p: &mut MonoPoly, m: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match p.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            gamma: vec![0; n],
            rho_q: 0,
            log_pow: 0,
        }
    }

    pub fn rho_power(n: usize, q: i64) -> Self {
        Monomial {
            gamma: vec![0; n],
            rho_q: q,
            log_pow: 0,
        }
    }

    pub fn p_power(gamma: Vec<u32>) -> Self {
        Monomial {
            gamma,
            rho_q: 0,
            log_pow: 0,
        }
    }

    pub fn log_rho(n: usize) -> Self {
        Monomial {
            gamma: vec![0; n],
            rho_q: 0,
            log_pow: 1,
        }
    }

    /// Heisenberg degree of the log-free part.
    pub fn degree(&self, shape: &FoliationShape) -> i64 {
        shape.weighted(&self.gamma) + self.rho_q
    }

    pub fn is_canonical(&self, shape: &FoliationShape) -> bool {
        let bound = if shape.n() == 1 { 2 } else { 4 };
        self.gamma[0] < bound
    }

    /// Raw product, not reduced.
    pub fn mul_raw(&self, other: &Monomial) -> Monomial {
        Monomial {
            gamma: self
                .gamma
                .iter()
                .zip(&other.gamma)
                .map(|(a, b)| a + b)
                .collect(),
            rho_q: self.rho_q + other.rho_q,
            log_pow: self.log_pow + other.log_pow,
        }
    }

    /// Expansion in the canonical basis.
    pub fn canonical(self, shape: &FoliationShape) -> MonoPoly {
        let mut out = MonoPoly::new();
        if self.is_canonical(shape) {
            out.insert(self, BigRational::one());
            return out;
        }
        if shape.n() == 1 {
            let k = self.gamma[0] / 2;
            let m = Monomial {
                gamma: vec![self.gamma[0] - 2 * k],
                rho_q: self.rho_q + 2 * k as i64,
                log_pow: self.log_pow,
            };
            out.insert(m, BigRational::one());
            return out;
        }
        let mut stack = vec![(self, BigRational::one())];
        while let Some((m, c)) = stack.pop() {
            if m.is_canonical(shape) {
                poly_add(&mut out, m, c);
                continue;
            }
            let mut base = m.clone();
            base.gamma[0] -= 4;
            let mut r = base.clone();
            r.rho_q += 4;
            stack.push((r, c.clone()));
            for i in 1..shape.n() {
                let mut t = base.clone();
                t.gamma[i] += if i < shape.v { 4 } else { 2 };
                stack.push((t, -c.clone()));
            }
        }
        out
    }

    /// ∂/∂p_i in the canonical basis.
    pub fn deriv(&self, shape: &FoliationShape, i: usize) -> MonoPoly {
        let leaf = i < shape.v;
        let mut raw: Vec<(Monomial, BigRational)> = Vec::new();
        if self.gamma[i] > 0 {
            let mut m = self.clone();
            m.gamma[i] -= 1;
            raw.push((m, rat(self.gamma[i] as i64)));
        }
        // ∂_i ρ = 4p_i^3 on leaves, 2p_i transversally.
        let (bump, drho) = if leaf { (3, 4) } else { (1, 2) };
        if self.rho_q != 0 {
            let mut m = self.clone();
            m.gamma[i] += bump;
            m.rho_q -= 4;
            raw.push((
                m,
                BigRational::new(BigInt::from(self.rho_q * drho), BigInt::from(4)),
            ));
        }
        if self.log_pow > 0 {
            let mut m = self.clone();
            m.gamma[i] += bump;
            m.rho_q -= 4;
            m.log_pow -= 1;
            raw.push((m, rat(self.log_pow as i64 * drho)));
        }
        let mut out = MonoPoly::new();
        for (m, c) in raw {
            for (m2, c2) in m.canonical(shape) {
                poly_add(&mut out, m2, c2 * &c);
            }
        }
        out
    }

    /// ∂_p^α in the canonical basis.
    pub fn deriv_multi(&self, shape: &FoliationShape, alpha: &[u32]) -> MonoPoly {
        let mut cur = MonoPoly::new();
        cur.insert(self.clone(), BigRational::one());
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                let mut next = MonoPoly::new();
                for (m, c) in &cur {
                    for (m2, c2) in m.deriv(shape, i) {
                        poly_add(&mut next, m2, c2 * c);
                    }
                }
                cur = next;
                if cur.is_empty() {
                    return cur;
                }
            }
        }
        cur
    }

    /// Value at a point p ≠ 0 (double precision).
    pub fn eval(&self, shape: &FoliationShape, p: &[f64]) -> f64 {
        let rho: f64 = p
            .iter()
            .enumerate()
            .map(|(i, x)| if i < shape.v { x.powi(4) } else { x * x })
            .sum();
        let mut v = rho.powf(self.rho_q as f64 / 4.0);
        for (x, &g) in p.iter().zip(&self.gamma) {
            v *= x.powi(g as i32);
        }
        if self.log_pow > 0 {
            v *= rho.ln().powi(self.log_pow as i32);
        }
        v
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (i, &g) in self.gamma.iter().enumerate() {
            match g {
                0 => {}
                1 => parts.push(format!("p{}", i + 1)),
                _ => parts.push(format!("p{}^{}", i + 1, g)),
            }
        }
        if self.rho_q != 0 {
            parts.push(format!("rho^({}/4)", self.rho_q));
        }
        if self.log_pow > 0 {
            parts.push("log(rho)".to_string());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close_poly(shape: &FoliationShape, p: &MonoPoly, m: &Monomial, pt: &[f64]) -> bool {
        let lhs: f64 = p
            .iter()
            .map(|(k, c)| k.eval(shape, pt) * num_traits::ToPrimitive::to_f64(c).unwrap())
            .sum();
        let rhs = m.eval(shape, pt);
        (lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs())
    }

    #[test]
    fn canonical_form_preserves_values() {
        let s = FoliationShape::new(2, 1);
        let m = Monomial {
            gamma: vec![9, 2, 1],
            rho_q: -7,
            log_pow: 0,
        };
        let c = m.clone().canonical(&s);
        assert!(c
            .keys()
            .all(|k| k.is_canonical(&s) && k.degree(&s) == m.degree(&s)));
        assert!(close_poly(&s, &c, &m, &[0.7, -1.3, 0.4]));
        let s1 = FoliationShape::new(1, 0);
        let c1 = Monomial {
            gamma: vec![5],
            rho_q: 1,
            log_pow: 0,
        }
        .canonical(&s1);
        assert_eq!(c1.len(), 1);
        assert_eq!(
            c1.keys().next().unwrap(),
            &Monomial {
                gamma: vec![1],
                rho_q: 5,
                log_pow: 0
            }
        );
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = FoliationShape::new(1, 2);
        let m = Monomial {
            gamma: vec![2, 1, 0],
            rho_q: -3,
            log_pow: 1,
        };
        let pt = [0.8, -0.6, 1.1];
        for i in 0..3 {
            let d = m.deriv(&s, i);
            let h = 1e-6;
            let mut a = pt;
            let mut b = pt;
            a[i] += h;
            b[i] -= h;
            let fd = (m.eval(&s, &a) - m.eval(&s, &b)) / (2.0 * h);
            let ex: f64 = d
                .iter()
                .map(|(k, c)| k.eval(&s, &pt) * num_traits::ToPrimitive::to_f64(c).unwrap())
                .sum();
            assert!((fd - ex).abs() < 1e-5, "i={} fd={} ex={}", i, fd, ex);
        }
    }

    #[test]
    fn log_derivative_is_rational() {
        let s = FoliationShape::new(1, 0);
        let d = Monomial::log_rho(1).deriv(&s, 0);
        // ∂_p log p^4 = 4/p = 4 p ρ^{-1/2}
        assert_eq!(
            d,
            MonoPoly::from([(
                Monomial {
                    gamma: vec![1],
                    rho_q: -2,
                    log_pow: 0
                },
                rat(4)
            )])
        );
    }
}
