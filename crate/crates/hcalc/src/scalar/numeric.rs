//! Arbitrary-precision evaluation of exact scalars.
//!
//! π comes from the library constant cache; Γ(1/4) from the
//! arithmetic-geometric mean identity Γ(1/4)² = (2π)^{3/2} / AGM(√2, 1).

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use super::exact::ExactScalar;

const RM: RoundingMode = RoundingMode::ToEven;

/// A complex number rendered to a fixed number of significant digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericValue {
    pub re: String,
    pub im: String,
}

impl std::fmt::Display for NumericValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im == "0" {
            write!(f, "{}", self.re)
        } else if self.im.starts_with('-') {
            write!(f, "{} - {}i", self.re, &self.im[1..])
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

struct Ctx {
    p: usize,
    cc: Consts,
    pi: BigFloat,
    sqrt_pi: BigFloat,
    gamma: BigFloat,
}

impl Ctx {
    fn new(digits: usize) -> Self {
        let p = (digits as f64 * 3.33) as usize + 128;
        let mut cc = Consts::new().expect("constant cache");
        let pi = cc.pi(p, RM);
        let sqrt_pi = pi.sqrt(p, RM);
        let gamma = gamma_quarter(p, &pi);
        Ctx {
            p,
            cc,
            pi,
            sqrt_pi,
            gamma,
        }
    }

    fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.p)
    }

    fn powi(&self, x: &BigFloat, e: i32) -> BigFloat {
        let y = x.powi(e.unsigned_abs() as usize, self.p, RM);
        if e < 0 {
            self.int(1).div(&y, self.p, RM)
        } else {
            y
        }
    }
}

fn gamma_quarter(p: usize, pi: &BigFloat) -> BigFloat {
    let two = BigFloat::from_i64(2, p);
    let mut a = two.sqrt(p, RM);
    let mut b = BigFloat::from_i64(1, p);
    let eps = BigFloat::from_i64(1, p).div(&two.powi(p - 16, p, RM), p, RM);
    for _ in 0..200 {
        let an = a.add(&b, p, RM).div(&two, p, RM);
        let bn = a.mul(&b, p, RM).sqrt(p, RM);
        let diff = an.sub(&bn, p, RM).abs();
        a = an;
        b = bn;
        if diff.cmp(&eps).is_some_and(|c| c <= 0) {
            break;
        }
    }
    let two_pi = pi.mul(&two, p, RM);
    let num = two_pi.mul(&two_pi.sqrt(p, RM), p, RM);
    num.div(&a, p, RM).sqrt(p, RM)
}

fn eval_parts(x: &ExactScalar, ctx: &mut Ctx) -> (BigFloat, BigFloat) {
    let p = ctx.p;
    let mut re = ctx.int(0);
    let mut im = ctx.int(0);
    for ((a, b), c) in x.terms() {
        let n = c.modulus();
        let mag = ctx
            .powi(&ctx.sqrt_pi, *a)
            .mul(&ctx.powi(&ctx.gamma, *b), p, RM);
        let mut cre = ctx.int(0);
        let mut cim = ctx.int(0);
        let (num, den) = c.raw_parts();
        let den_f = BigFloat::parse(&den.to_string(), Radix::Dec, p, RM, &mut ctx.cc);
        for (j, aj) in num.iter().enumerate() {
            if num_traits::Zero::is_zero(aj) {
                continue;
            }
            let coef = BigFloat::parse(&aj.to_string(), Radix::Dec, p, RM, &mut ctx.cc);
            let th = ctx
                .pi
                .mul(&ctx.int(2 * j as i64), p, RM)
                .div(&ctx.int(n as i64), p, RM);
            let (cs, sn) = trig(&th, ctx, j as u32, n);
            cre = cre.add(&coef.mul(&cs, p, RM), p, RM);
            cim = cim.add(&coef.mul(&sn, p, RM), p, RM);
        }
        let scale = mag.div(&den_f, p, RM);
        re = re.add(&cre.mul(&scale, p, RM), p, RM);
        im = im.add(&cim.mul(&scale, p, RM), p, RM);
    }
    (re, im)
}

fn trig(th: &BigFloat, ctx: &mut Ctx, j: u32, n: u32) -> (BigFloat, BigFloat) {
    // Exact values on the axes avoid spurious residues like 1e-200.
    if j == 0 {
        (ctx.int(1), ctx.int(0))
    } else if 4 * j == n {
        (ctx.int(0), ctx.int(1))
    } else if 2 * j == n {
        (ctx.int(-1), ctx.int(0))
    } else if 4 * j == 3 * n {
        (ctx.int(0), ctx.int(-1))
    } else {
        (
            th.cos(ctx.p, RM, &mut ctx.cc),
            th.sin(ctx.p, RM, &mut ctx.cc),
        )
    }
}

/// Rounds to `digits` significant decimal digits, round-half-even on the
/// high-precision decimal expansion.
fn render(x: &BigFloat, digits: usize, ctx: &mut Ctx) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x
        .format(Radix::Dec, RM, &mut ctx.cc)
        .expect("decimal format");
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.as_str()),
    };
    let (mant, exp) = body.split_once('e').expect("exponent");
    let exp: i64 = exp.parse().expect("exponent digits");
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let mut all: Vec<u8> = ip.bytes().chain(fp.bytes()).map(|b| b - b'0').collect();
    // Decimal point sits after the first len(ip) digits, times 10^exp.
    let mut point = ip.len() as i64 + exp;
    let lead = all.iter().position(|&d| d != 0).unwrap_or(all.len());
    all.drain(..lead);
    point -= lead as i64;
    if all.is_empty() {
        return "0".to_string();
    }
    let mut kept: Vec<u8> = all.iter().take(digits).cloned().collect();
    kept.resize(digits, 0);
    let round_up = match all.get(digits) {
        Some(&d) if d > 5 => true,
        Some(&5) => all[digits + 1..].iter().any(|&d| d != 0) || kept[digits - 1] % 2 == 1,
        _ => false,
    };
    if round_up {
        let mut i = digits;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                point += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let digits_str: String = kept.iter().map(|d| (b'0' + d) as char).collect();
    let out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits_str)
    } else if point as usize >= digits_str.len() {
        format!(
            "{}{}",
            digits_str,
            "0".repeat(point as usize - digits_str.len())
        )
    } else {
        let (a, b) = digits_str.split_at(point as usize);
        format!("{}.{}", a, b)
    };
    if neg {
        format!("-{}", out)
    } else {
        out
    }
}

fn negligible(x: &BigFloat, scale: &BigFloat, digits: usize, ctx: &Ctx) -> bool {
    if x.is_zero() {
        return true;
    }
    let tol = ctx
        .int(1)
        .div(&ctx.int(10).powi(digits, ctx.p, RM), ctx.p, RM);
    let bound = scale.abs().mul(&tol, ctx.p, RM);
    x.abs().cmp(&bound).is_some_and(|c| c <= 0)
}

pub(crate) fn eval(x: &ExactScalar, digits: usize) -> NumericValue {
    let digits = digits.max(1);
    let mut ctx = Ctx::new(digits + 10);
    let (re, im) = eval_parts(x, &mut ctx);
    let mag = re.abs().add(&im.abs(), ctx.p, RM);
    // Components below the working precision of the other are cancellation noise.
    let re = if !mag.is_zero() && negligible(&re, &mag, digits + 5, &ctx) {
        ctx.int(0)
    } else {
        re
    };
    let im = if !mag.is_zero() && negligible(&im, &mag, digits + 5, &ctx) {
        ctx.int(0)
    } else {
        im
    };
    NumericValue {
        re: render(&re, digits, &mut ctx),
        im: render(&im, digits, &mut ctx),
    }
}

/// True when |x| ≤ 10^{-digits} · Σ|terms|.
pub(crate) fn is_negligible(x: &ExactScalar, digits: usize) -> bool {
    let mut ctx = Ctx::new(digits + 10);
    let (re, im) = eval_parts(x, &mut ctx);
    let mag = re.abs().add(&im.abs(), ctx.p, RM);
    let mut scale = ctx.int(0);
    for (k, c) in x.terms() {
        let t = ExactScalar::monomial(c.clone(), k.0, k.1);
        let (r, i) = eval_parts(&t, &mut ctx);
        scale = scale.add(&r.abs().add(&i.abs(), ctx.p, RM), ctx.p, RM);
    }
    negligible(&mag, &scale, digits, &ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(
            ExactScalar::gamma_quarter_pow(1).numeric_eval(10).re,
            "3.625609908"
        );
        assert_eq!(
            ExactScalar::pi_half_pow(1).numeric_eval(10).re,
            "1.772453851"
        );
        assert_eq!(ExactScalar::zero().numeric_eval(20).re, "0");
        // Independent reference values (50 digits).
        assert_eq!(
            ExactScalar::gamma_quarter_pow(1).numeric_eval(50).re,
            "3.6256099082219083119306851558676720029951676828801"
        );
        assert_eq!(
            ExactScalar::pi().numeric_eval(40).re,
            "3.141592653589793238462643383279502884197"
        );
    }

    #[test]
    fn complex_and_rounding() {
        let v = ExactScalar::i().scale_int(-3).numeric_eval(15);
        assert_eq!(v.re, "0");
        assert_eq!(v.im, "-3.00000000000000");
        assert_eq!(ExactScalar::ratio(2, 3).numeric_eval(5).re, "0.66667");
        assert_eq!(ExactScalar::ratio(-1, 8).numeric_eval(2).re, "-0.12");
        assert_eq!(ExactScalar::from_int(99999).numeric_eval(3).re, "100000");
    }

    #[test]
    fn negligible_difference() {
        let a = ExactScalar::sqrt2().mul_ref(&ExactScalar::sqrt2());
        assert!(a.numerically_equal(&ExactScalar::from_int(2), 100));
        assert!(!ExactScalar::pi().numerically_equal(&ExactScalar::ratio(355, 113), 30));
    }
}
