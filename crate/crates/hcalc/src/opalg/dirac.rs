//! Generalized Dirac operators of de Rham and affine type.

use super::series::{is_generalized_laplacian, op_compose, OpKey, OpSeries};
use super::OpError;
use crate::scalar::{ExactScalar, FourierFunction};
use crate::symbols::builders::p;
use crate::symbols::clifford::{generator_product, Generator};
use crate::symbols::{CliffordWord, FoliationShape, HSymbol, Monomial};

use num_rational::BigRational;
use num_traits::Zero;

/// (r)_L (ψ̄_i)_R ∂_p^α in ∇̄.
#[derive(Clone, Debug, PartialEq)]
pub struct BarCorrection {
    pub index: usize,
    pub alpha: Vec<u32>,
    pub coeff: FourierFunction,
}

/// (ψ^i)_R (c · p_k)_L ∂_p^α added to ∇; `p_index` None drops the p_k factor.
#[derive(Clone, Debug, PartialEq)]
pub struct SCorrection {
    pub index: usize,
    pub p_index: Option<usize>,
    pub alpha: Vec<u32>,
    pub coeff: FourierFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiracDescriptor {
    /// D = −iε d_R + ∇̄.
    DeRham { bar: Vec<BarCorrection> },
    /// D = iε ψ^i_R(∇_i^Γ + s_i) + ∇̄ with christoffel[k][i][j] = Γ^k_{ij}.
    Affine {
        christoffel: Vec<Vec<Vec<FourierFunction>>>,
        s: Vec<SCorrection>,
        bar: Vec<BarCorrection>,
    },
}

/// R[k][l][i][j] = R^k_{lij}.
pub type Curvature = Vec<Vec<Vec<Vec<FourierFunction>>>>;

fn word(g: &[Generator]) -> std::collections::BTreeMap<CliffordWord, i64> {
    generator_product(g)
}

fn fsym(shape: FoliationShape, f: &FourierFunction, floor: i64) -> HSymbol {
    HSymbol::from_fourier(f.clone(), shape, floor)
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn bar_operator(
    shape: FoliationShape,
    bar: &[BarCorrection],
    trunc: u32,
    floor: i64,
) -> Result<OpSeries, OpError> {
    let n = shape.n();
    let mut s = OpSeries::zero(shape, trunc);
    for i in 0..n {
        let key = OpKey {
            eps: 0,
            right: CliffordWord::from_sets(&[], &[i]),
            dx: vec![0; n],
            dp: unit(n, i),
        };
        s.insert(key, HSymbol::one(shape, floor));
    }
    let minus_one = BigRational::from_integer((-1).into());
    for c in bar {
        if c.index >= n || c.alpha.len() != n || c.coeff.dim() != n {
            return Err(OpError::DescriptorInvalid(
                "bar correction has wrong size".into(),
            ));
        }
        let mut t = OpSeries::zero(shape, trunc);
        let key = OpKey {
            eps: 0,
            right: CliffordWord::from_sets(&[], &[c.index]),
            dx: vec![0; n],
            dp: c.alpha.clone(),
        };
        t.insert(key, fsym(shape, &c.coeff, floor));
        if !t.in_filtration(&minus_one, 0) {
            return Err(OpError::DescriptorInvalid(
                "bar correction not in D^{-1}_0".into(),
            ));
        }
        s = s.add(&t)?;
    }
    Ok(s)
}

fn check_christoffel(n: usize, g: &[Vec<Vec<FourierFunction>>]) -> Result<(), OpError> {
    if g.len() != n
        || g.iter().any(|m| {
            m.len() != n
                || m.iter()
                    .any(|r| r.len() != n || r.iter().any(|f| f.dim() != n))
        })
    {
        return Err(OpError::DescriptorInvalid(
            "Christoffel array has wrong size".into(),
        ));
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..i {
                if g[k][i][j] != g[k][j][i] {
                    return Err(OpError::DescriptorInvalid(
                        "Christoffel symbols not symmetric".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// D as an operator series.
pub fn dirac_operator(
    desc: &DiracDescriptor,
    shape: FoliationShape,
    trunc: u32,
    floor: i64,
) -> Result<OpSeries, OpError> {
    let n = shape.n();
    let ieps = |s: &OpSeries| s.shift_eps(1).scale(&ExactScalar::i());
    let psi_r =
        |i: usize| OpSeries::right_word(shape, CliffordWord::from_sets(&[i], &[]), trunc, floor);
    match desc {
        DiracDescriptor::DeRham { bar } => {
            let mut d = bar_operator(shape, bar, trunc, floor)?;
            for i in 0..n {
                // −iε d_R = iε ψ^i_R ∂_{x^i} + ε p_{iL} ψ^i_R.
                let a = op_compose(&psi_r(i), &OpSeries::dx(shape, i, trunc, floor))?;
                let b =
                    op_compose(&OpSeries::left(p(shape, i, floor), trunc), &psi_r(i))?.shift_eps(1);
                d = d.add(&ieps(&a))?.add(&b)?;
            }
            Ok(d)
        }
        DiracDescriptor::Affine {
            christoffel,
            s,
            bar,
        } => {
            check_christoffel(n, christoffel)?;
            let mut nabla = OpSeries::zero(shape, trunc);
            for i in 0..n {
                let mut inner = OpSeries::dx(shape, i, trunc, floor);
                for j in 0..n {
                    for (k, gk) in christoffel.iter().enumerate() {
                        let g = &gk[i][j];
                        if g.is_zero() {
                            continue;
                        }
                        let gl = OpSeries::left(fsym(shape, g, floor), trunc);
                        let pk = op_compose(
                            &OpSeries::left(p(shape, k, floor), trunc),
                            &OpSeries::dp(shape, j, trunc, floor),
                        )?;
                        let w = word(&[Generator::PsiBar(k), Generator::Psi(j)]);
                        let wl = OpSeries::left_words(shape, &w, trunc, floor);
                        let wr = OpSeries::right(shape, &w, trunc, floor);
                        let part = pk.add(&wl)?.sub(&wr)?;
                        inner = inner.add(&op_compose(&gl, &part)?)?;
                    }
                }
                nabla = nabla.add(&op_compose(&psi_r(i), &inner)?)?;
            }
            for c in s {
                if c.index >= n
                    || c.alpha.len() != n
                    || c.coeff.dim() != n
                    || c.p_index.is_some_and(|k| k >= n)
                {
                    return Err(OpError::DescriptorInvalid(
                        "s correction has wrong size".into(),
                    ));
                }
                let sym = match c.p_index {
                    Some(k) => p(shape, k, floor).mul_fourier(&c.coeff),
                    None => fsym(shape, &c.coeff, floor),
                };
                let mut t = OpSeries::zero(shape, trunc);
                t.insert(
                    OpKey {
                        eps: 0,
                        right: CliffordWord::ONE,
                        dx: vec![0; n],
                        dp: c.alpha.clone(),
                    },
                    sym,
                );
                let t = op_compose(&psi_r(c.index), &t)?;
                if !t.in_filtration(&BigRational::zero(), 0) {
                    return Err(OpError::DescriptorInvalid(
                        "s correction not in D^0_0".into(),
                    ));
                }
                nabla = nabla.add(&t)?;
            }
            ieps(&nabla).add(&bar_operator(shape, bar, trunc, floor)?)
        }
    }
}

/// −D², checked to be a generalized Laplacian.
pub fn dirac_square(
    desc: &DiracDescriptor,
    shape: FoliationShape,
    trunc: u32,
    floor: i64,
) -> Result<OpSeries, OpError> {
    let d = dirac_operator(desc, shape, trunc, floor)?;
    let sq = op_compose(&d, &d)?.neg();
    if !is_generalized_laplacian(&sq) {
        return Err(OpError::DescriptorInvalid(
            "−D² is not a generalized Laplacian".into(),
        ));
    }
    Ok(sq)
}

/// R^k_{lij} = ∂_iΓ^k_{jl} − ∂_jΓ^k_{il} + Γ^k_{im}Γ^m_{jl} − Γ^k_{jm}Γ^m_{il}.
pub fn curvature_tensor(g: &[Vec<Vec<FourierFunction>>]) -> Result<Curvature, OpError> {
    let n = g.len();
    check_christoffel(n, g)?;
    let mut r = vec![vec![vec![vec![FourierFunction::zero(n); n]; n]; n]; n];
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = g[k][j][l].deriv(i).sub(&g[k][i][l].deriv(j));
                    for m in 0..n {
                        v = v
                            .add(&g[k][i][m].mul(&g[m][j][l]))
                            .sub(&g[k][j][m].mul(&g[m][i][l]));
                    }
                    r[k][l][i][j] = v;
                }
            }
        }
    }
    Ok(r)
}

fn coefficient_of(a: Option<&HSymbol>, m: &Monomial, w: CliffordWord, n: usize) -> FourierFunction {
    let Some(a) = a else {
        return FourierFunction::zero(n);
    };
    let mut f = FourierFunction::zero(n);
    for (_, k, c) in a.iter() {
        if &k.mono == m && k.word == w {
            f = f.add(c);
        }
    }
    f
}

/// From the ε² part of −D²: for i < j, the coefficient of
/// (ψ^iψ^j)_R (p_k)_L ∂_{p_l}, as c[k][l][i][j] (antisymmetrized in i, j).
pub fn curvature_from_square(sq: &OpSeries) -> Curvature {
    let n = sq.shape().n();
    let mut r = vec![vec![vec![vec![FourierFunction::zero(n); n]; n]; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            for l in 0..n {
                let key = OpKey {
                    eps: 2,
                    right: CliffordWord::from_sets(&[i, j], &[]),
                    dx: vec![0; n],
                    dp: unit(n, l),
                };
                for k in 0..n {
                    let m = Monomial::p_power(unit(n, k));
                    let c = coefficient_of(sq.get(&key), &m, CliffordWord::ONE, n);
                    r[k][l][j][i] = c.neg();
                    r[k][l][i][j] = c;
                }
            }
        }
    }
    r
}

/// From the ε² part of −D²: for i < j, the coefficient of (ψ^iψ^j)_R (ψ^lψ̄_k)_L,
/// which the curvature term predicts to be −R^k_{lij}.
pub fn clifford_curvature_from_square(sq: &OpSeries) -> Curvature {
    let n = sq.shape().n();
    let mut r = vec![vec![vec![vec![FourierFunction::zero(n); n]; n]; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let key = OpKey {
                eps: 2,
                right: CliffordWord::from_sets(&[i, j], &[]),
                dx: vec![0; n],
                dp: vec![0; n],
            };
            for l in 0..n {
                for k in 0..n {
                    let w = CliffordWord::from_sets(&[l], &[k]);
                    let c = coefficient_of(sq.get(&key), &Monomial::one(n), w, n).neg();
                    r[k][l][j][i] = c.neg();
                    r[k][l][i][j] = c;
                }
            }
        }
    }
    r
}
