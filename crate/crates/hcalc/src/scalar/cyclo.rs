//! Elements of the cyclotomic field ℚ(ζ_N) in the power basis of ζ_N.
//!
//! An element is stored as an integer vector over a positive denominator,
//! reduced modulo the N-th cyclotomic polynomial. Elements living in
//! different fields are compared and combined in ℚ(ζ_lcm).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer coefficients of Φ_N, lowest degree first. Cached per N.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<RwLock<BTreeMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(BTreeMap::new()));
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    cache.write().unwrap().insert(n, p.clone());
    p
}

fn compute_cyclotomic(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = compute_cyclotomic(d);
            num = exact_div(&num, &phi_d);
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    q
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    cyclotomic_poly(n).len() - 1
}

/// An element of ℚ(ζ_N).
#[derive(Clone, Debug)]
pub struct Cyclo {
    n: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclo {
    pub fn zero(n: u32) -> Self {
        assert!(
            n > 0 && n % 8 == 0,
            "cyclotomic modulus must be a positive multiple of 8"
        );
        Cyclo {
            n,
            num: vec![BigInt::zero(); totient(n)],
            den: BigInt::one(),
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, BigRational::one())
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(v.into()))
    }

    pub fn from_rational(n: u32, r: BigRational) -> Self {
        let mut c = Self::zero(n);
        c.num[0] = r.numer().clone();
        c.den = r.denom().clone();
        c.normalize();
        c
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![BigInt::zero(); e + 1];
        raw[e] = BigInt::one();
        let mut c = Cyclo {
            n,
            num: reduce(n, raw),
            den: BigInt::one(),
        };
        c.normalize();
        c
    }

    /// The imaginary unit ζ_N^{N/4}.
    pub fn i(n: u32) -> Self {
        Self::zeta_pow(n, (n / 4) as i64)
    }

    /// √2 = ζ_8 + ζ_8^{-1}.
    pub fn sqrt2(n: u32) -> Self {
        let k = (n / 8) as i64;
        Self::zeta_pow(n, k).add(&Self::zeta_pow(n, -k))
    }

    /// Builds an element from rational power-basis coefficients; the vector
    /// may be longer than φ(N) and is reduced.
    pub fn from_coeffs(n: u32, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let raw: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut c = Cyclo {
            n,
            num: reduce(n, raw),
            den,
        };
        c.normalize();
        c
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    /// Power-basis coefficients as rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|a| BigRational::new(a.clone(), self.den.clone()))
            .collect()
    }

    /// Primitive integer vector and rational scale: value = scale · Σ v_j ζ^j,
    /// with the first nonzero v_j positive.
    pub fn primitive_parts(&self) -> (Vec<BigInt>, BigRational) {
        if self.is_zero() {
            return (self.num.clone(), BigRational::zero());
        }
        let g = self.num.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        let lead_neg = self
            .num
            .iter()
            .find(|a| !a.is_zero())
            .unwrap()
            .is_negative();
        let g = if lead_neg { -g } else { g };
        let v = self.num.iter().map(|a| a / &g).collect();
        (v, BigRational::new(g, self.den.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|a| a.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|a| a.is_zero())
    }

    /// Some(r) when the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|a| a.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for a in self.num.iter_mut() {
                *a = -a.clone();
            }
        }
        let mut g = self.den.clone();
        for a in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(a);
        }
        if self.is_zero() {
            self.den = BigInt::one();
        } else if !g.is_one() {
            for a in self.num.iter_mut() {
                *a = &*a / &g;
            }
            self.den = &self.den / &g;
        }
    }

    /// Embeds into ℚ(ζ_m) for a multiple m of N.
    pub fn lift(&self, m: u32) -> Self {
        if m == self.n {
            return self.clone();
        }
        assert!(
            m % self.n == 0,
            "cannot lift ℚ(ζ_{}) into ℚ(ζ_{})",
            self.n,
            m
        );
        let step = (m / self.n) as usize;
        let mut raw = vec![BigInt::zero(); (self.num.len() - 1) * step + 1];
        for (j, a) in self.num.iter().enumerate() {
            raw[j * step] = a.clone();
        }
        Cyclo {
            n: m,
            num: reduce(m, raw),
            den: self.den.clone(),
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.n == other.n {
            (self.clone(), other.clone())
        } else {
            let m = self.n.lcm(&other.n);
            (self.lift(m), other.lift(m))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.n != other.n {
            let (a, b) = self.aligned(other);
            return a.add(&b);
        }
        let num = if self.den == other.den {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a + b)
                .collect()
        } else {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a * &other.den + b * &self.den)
                .collect()
        };
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            &self.den * &other.den
        };
        let mut c = Cyclo {
            n: self.n,
            num,
            den,
        };
        c.normalize();
        c
    }

    pub fn neg(&self) -> Self {
        Cyclo {
            n: self.n,
            num: self.num.iter().map(|a| -a).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.n != other.n {
            let (a, b) = self.aligned(other);
            return a.mul(&b);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.n);
        }
        let d = self.num.len();
        let mut raw = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut c = Cyclo {
            n: self.n,
            num: reduce(self.n, raw),
            den: &self.den * &other.den,
        };
        c.normalize();
        c
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut c = Cyclo {
            n: self.n,
            num: self.num.iter().map(|a| a * r.numer()).collect(),
            den: &self.den * r.denom(),
        };
        c.normalize();
        c
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in ℚ[x].
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(self.n, r.recip()));
        }
        let phi: Vec<BigRational> = cyclotomic_poly(self.n)
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let a = trim(self.coeffs());
        // Invariant: r_i ≡ s_i · a (mod Φ).
        let (mut r0, mut s0) = (trim(phi), vec![]);
        let (mut r1, mut s1) = (a, vec![BigRational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            if r1.is_empty() {
                return None;
            }
        }
        let c = r1[0].recip();
        let s: Vec<BigRational> = s1.iter().map(|x| x * &c).collect();
        Some(Self::from_coeffs(self.n, &s))
    }

    /// Complex conjugate: ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let mut acc = Self::zero(self.n);
        for (j, a) in self.num.iter().enumerate() {
            if !a.is_zero() {
                let t = Self::zeta_pow(self.n, -(j as i64));
                acc = acc.add(&t.scale(&BigRational::from_integer(a.clone())));
            }
        }
        acc.scale(&BigRational::new(BigInt::one(), self.den.clone()))
    }

    /// Embedding ζ ↦ e^{2πi/N} in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut z = Complex64::new(0.0, 0.0);
        for (j, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let th = 2.0 * std::f64::consts::PI * j as f64 / self.n as f64;
            z += Complex64::from_polar(1.0, th) * (a.to_f64().unwrap() / den);
        }
        z
    }

    pub(crate) fn raw_parts(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }
}

fn reduce(n: u32, mut raw: Vec<BigInt>) -> Vec<BigInt> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    if n.is_power_of_two() {
        // Φ_N = x^{N/2} + 1.
        for i in (d..raw.len()).rev() {
            if !raw[i].is_zero() {
                let c = std::mem::take(&mut raw[i]);
                let j = i - d;
                raw[j] -= c;
            }
        }
    } else {
        for i in (d..raw.len()).rev() {
            if raw[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut raw[i]);
            for (k, &pk) in phi.iter().enumerate().take(d) {
                if pk != 0 {
                    raw[i - d + k] -= &c * pk;
                }
            }
        }
    }
    raw.resize(d, BigInt::zero());
    raw
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    (trim(q), trim(r))
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n {
            let (a, b) = self.aligned(other);
            return a == b;
        }
        self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyclo {}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", r);
        }
        let mut first = true;
        write!(f, "(")?;
        for (j, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let c = BigRational::new(a.clone(), self.den.clone());
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if !first {
                write!(f, " ")?;
            }
            match j {
                0 => write!(f, "{}{}", sign, mag)?,
                _ if mag.is_one() => write!(f, "{}z{}^{}", sign, self.n, j)?,
                _ => write!(f, "{}{}*z{}^{}", sign, mag, self.n, j)?,
            }
            first = false;
        }
        write!(f, ")")
    }
}
