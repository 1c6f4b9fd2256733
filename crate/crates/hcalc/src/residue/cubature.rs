//! Numeric oracles: nested tanh-sinh quadrature over the Heisenberg annulus.

use std::f64::consts::FRAC_PI_2;

use super::ResidueError;
use crate::symbols::FoliationShape;

const MAX_LEVEL: u32 = 9;
const T_MAX: f64 = 3.6;

/// ∫_a^b f by tanh-sinh quadrature with step halving until successive
/// estimates differ by at most `tol`.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64, ResidueError>
where
    F: FnMut(f64) -> Result<f64, ResidueError>,
{
    let hw = (b - a) / 2.0;
    if hw <= 0.0 {
        return Ok(0.0);
    }
    let mut node = |t: f64| -> Result<f64, ResidueError> {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.abs().cosh();
        let w = hw * FRAC_PI_2 * t.cosh() / (ch * ch);
        let d = hw * 2.0 / (1.0 + (2.0 * u.abs()).exp());
        if w < 1e-300 || d <= 0.0 {
            return Ok(0.0);
        }
        let x = if t >= 0.0 { b - d } else { a + d };
        Ok(w * f(x)?)
    };
    let mut h = 0.5;
    let mut sum = node(0.0)?;
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        let t = k as f64 * h;
        sum += node(t)? + node(-t)?;
        k += 1;
    }
    let mut prev = sum * h;
    let mut estimate = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h /= 2.0;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            let t = k as f64 * h;
            sum += node(t)? + node(-t)?;
            k += 2;
        }
        let cur = sum * h;
        estimate = (cur - prev).abs();
        if level >= 3 && estimate <= tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(ResidueError::CubatureNoConvergence { tol, estimate })
}

fn weight_fn(shape: &FoliationShape, j: usize) -> f64 {
    if j < shape.v {
        4.0
    } else {
        2.0
    }
}

/// ∫ p^γ ρ^{−(⟨γ⟩+Q)/4} dp over {1 ≤ ρ ≤ e^4}, which equals ∫_{S_H} p^γ dσ_H.
pub fn annulus_oracle(
    gamma: &[u32],
    shape: &FoliationShape,
    tol: f64,
) -> Result<f64, ResidueError> {
    let n = shape.n();
    if n > 3 {
        return Err(ResidueError::DimensionTooLarge(n));
    }
    // Reflection p_i ↦ −p_i multiplies the integrand by (−1)^{γ_i}.
    if gamma.iter().any(|g| g % 2 == 1) {
        return Ok(0.0);
    }
    let s = -((shape.weighted(gamma) + shape.q()) as f64) / 4.0;
    let big = 4f64.exp();
    let ctx = Annulus {
        shape,
        gamma,
        s,
        big,
        tol,
    };
    Ok((1u64 << n) as f64 * ctx.level(0, 0.0, tol)?)
}

struct Annulus<'a> {
    shape: &'a FoliationShape,
    gamma: &'a [u32],
    s: f64,
    big: f64,
    tol: f64,
}

impl Annulus<'_> {
    /// Integral over p_j, …, p_{n−1} ≥ 0 given the partial sum `partial` of ρ.
    fn level(&self, j: usize, partial: f64, tol: f64) -> Result<f64, ResidueError> {
        let n = self.shape.n();
        let w = weight_fn(self.shape, j);
        let g = self.gamma[j] as i32;
        let room = self.big - partial;
        if room <= 0.0 {
            return Ok(0.0);
        }
        let hi = room.powf(1.0 / w);
        let lo = if partial < 1.0 {
            (1.0 - partial).powf(1.0 / w)
        } else {
            0.0
        };
        let inner_tol = (tol * 1e-2).max(self.tol * 1e-6);
        if j + 1 == n {
            let f = |p: f64| Ok(p.powi(g) * (partial + p.powf(w)).powf(self.s));
            return tanh_sinh(f, lo, hi, tol);
        }
        let f = |p: f64| Ok(p.powi(g) * self.level(j + 1, partial + p.powf(w), inner_tol)?);
        let mut total = tanh_sinh(f, lo, hi, tol / 2.0)?;
        if lo > 0.0 {
            total += tanh_sinh(f, 0.0, lo, tol / 2.0)?;
        }
        Ok(total)
    }
}

/// ∫_ℝ p^g e^{−p^4} dp (leaf) or ∫_ℝ p^g e^{−p^2} dp (transverse).
pub fn gaussian_factor_1d(g: u32, leaf: bool, tol: f64) -> Result<f64, ResidueError> {
    if g % 2 == 1 {
        return Ok(0.0);
    }
    let (w, cut) = if leaf { (4, 3.5) } else { (2, 11.0) };
    let f = |p: f64| Ok(p.powi(g as i32) * (-p.powi(w)).exp());
    Ok(2.0 * tanh_sinh(f, 0.0, cut, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_basics() {
        let v = tanh_sinh(|x| Ok(x.sqrt()), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let v = tanh_sinh(|x| Ok(1.0 / x.sqrt()), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn one_dimensional_sphere() {
        let s = FoliationShape::new(1, 0);
        assert!((annulus_oracle(&[0], &s, 1e-10).unwrap() - 2.0).abs() < 1e-8);
        assert_eq!(annulus_oracle(&[1], &s, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_factors() {
        let v = gaussian_factor_1d(0, false, 1e-12).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }
}
