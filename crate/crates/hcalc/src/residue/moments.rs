use crate::scalar::{q, ExactScalar};
use crate::symbols::FoliationShape;

/// ∫_{ℝ^n} p^γ e^{−ρ} dp = Π_{i≤v} (1/2)Γ((γ_i+1)/4) · Π_{j>v} Γ((γ_j+1)/2).
pub fn gaussian_moment(gamma: &[u32], shape: &FoliationShape) -> ExactScalar {
    if gamma.iter().any(|g| g % 2 == 1) {
        return ExactScalar::zero();
    }
    let mut acc = ExactScalar::one();
    for (i, &g) in gamma.iter().enumerate() {
        let f = if i < shape.v {
            ExactScalar::gamma_of_quarter(g as i64 + 1)
                .expect("positive argument")
                .scale(&q(1, 2))
        } else {
            ExactScalar::gamma_of_quarter(2 * (g as i64 + 1)).expect("positive argument")
        };
        acc = acc.mul_ref(&f);
    }
    acc
}

/// ∫_{S_H} p^γ dσ_H with dσ_H = ι_L(dp) on {ρ = 1}.
pub fn sphere_moment(gamma: &[u32], shape: &FoliationShape) -> ExactScalar {
    let g = gaussian_moment(gamma, shape);
    if g.is_zero() {
        return g;
    }
    let d = shape.weighted(gamma) + shape.q();
    let radial = ExactScalar::gamma_of_quarter(d)
        .expect("positive argument")
        .inv()
        .expect("monomial");
    g.mul_ref(&radial).scale_int(4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let s10 = FoliationShape::new(1, 0);
        assert_eq!(sphere_moment(&[0], &s10), ExactScalar::from_int(2));
        assert!(sphere_moment(&[3], &s10).is_zero());
        let s11 = FoliationShape::new(1, 1);
        let expect = ExactScalar::sqrt2()
            .mul_ref(&ExactScalar::pi_half_pow(-1))
            .mul_ref(&ExactScalar::gamma_quarter_pow(2));
        assert_eq!(sphere_moment(&[0, 0], &s11), expect);
        assert_eq!(expect.numeric_eval(11).re, "10.488230217");
        assert!(sphere_moment(&[1, 0], &s11).is_zero());
    }

    #[test]
    fn dilation_identity() {
        let s = FoliationShape::new(2, 1);
        for gamma in [[0u32, 0, 0], [2, 0, 2], [4, 2, 0], [0, 6, 2]] {
            let d = s.weighted(&gamma) + s.q();
            let lhs = sphere_moment(&gamma, &s)
                .mul_ref(&ExactScalar::gamma_of_quarter(d).unwrap())
                .scale(&q(1, 4));
            assert_eq!(lhs, gaussian_moment(&gamma, &s));
        }
    }
}
