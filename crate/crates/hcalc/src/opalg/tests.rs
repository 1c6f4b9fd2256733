use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_descriptor, random_op, RandomOpSpec};
use super::series::{apply, OpKey};
use super::*;
use crate::residue::wres;
use crate::scalar::{two_pi_i, ExactScalar, FourierFunction};
use crate::symbols::builders::{character, p, rho_power};
use crate::symbols::random::{random_symbol, RandomSpec};
use crate::symbols::{CliffordWord, FoliationShape, HSymbol};

const F: i64 = -12;

fn s1() -> FoliationShape {
    FoliationShape::new(1, 0)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn leibniz_rule() {
    let s = s1();
    let e = character(s, vec![1], F);
    let lhs = op_compose(&OpSeries::dx(s, 0, 2, F), &OpSeries::left(e.clone(), 2)).unwrap();
    let rhs = OpSeries::left(e.scale(&two_pi_i()), 2)
        .add(&op_compose(&OpSeries::left(e, 2), &OpSeries::dx(s, 0, 2, F)).unwrap())
        .unwrap();
    assert!(lhs.agrees_with(&rhs));
    let id = OpSeries::identity(s, 2, F);
    let d = OpSeries::dp(s, 0, 2, F);
    assert!(op_compose(&id, &d).unwrap().agrees_with(&d));
}

#[test]
fn x_left_minus_right_is_i_dp() {
    let s = FoliationShape::new(1, 1);
    for i in 0..2 {
        let idp = OpSeries::dp(s, i, 2, F).scale(&ExactScalar::i());
        for j in 0..2 {
            let pj = OpSeries::left(p(s, j, F), 2);
            let c = op_compose(&idp, &pj)
                .unwrap()
                .sub(&op_compose(&pj, &idp).unwrap())
                .unwrap();
            let expected = if i == j {
                OpSeries::scalar(s, ExactScalar::i(), 2, F)
            } else {
                OpSeries::zero(s, 2)
            };
            assert!(c.agrees_with(&expected), "i={} j={}", i, j);
        }
    }
}

#[test]
fn left_and_right_graded_commute() {
    let s = FoliationShape::new(2, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = RandomSpec {
        words: true,
        ..RandomSpec::default()
    };
    for _ in 0..5 {
        let a = OpSeries::left(random_symbol(&mut rng, s, &spec), 2);
        let w = OpSeries::right_word(s, CliffordWord::from_sets(&[1], &[0]), 2, F);
        let c = graded_commutator(&a, &w).unwrap();
        assert!(c.is_zero());
    }
}

fn check_action(shape: FoliationShape, seed: u64, words: bool, right: bool, max_deriv: u32) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = RandomOpSpec {
        symbol: RandomSpec {
            words,
            depth: 2,
            ..RandomSpec::default()
        },
        right_words: right,
        max_deriv,
        ..Default::default()
    };
    let xspec = RandomSpec {
        top: 2,
        depth: 3,
        words,
        ..RandomSpec::default()
    };
    for it in 0..6 {
        let a = random_op(&mut rng, shape, &spec);
        let b = random_op(&mut rng, shape, &spec);
        let xi = random_symbol(&mut rng, shape, &xspec);
        let ab = op_compose(&a, &b).unwrap();
        let lhs = apply(&ab, &xi).unwrap();
        let mut rhs: std::collections::BTreeMap<u32, HSymbol> = Default::default();
        for (e1, y) in apply(&b, &xi).unwrap() {
            for (e2, z) in apply(&a, &y).unwrap() {
                if e1 + e2 > ab.eps_trunc() {
                    continue;
                }
                let v = match rhs.remove(&(e1 + e2)) {
                    Some(x) => x.add(&z).unwrap(),
                    None => z,
                };
                rhs.insert(e1 + e2, v);
            }
        }
        for k in 0..=ab.eps_trunc() {
            let z = HSymbol::zero(shape, -100, -100);
            let l = lhs.get(&k).unwrap_or(&z);
            let r = rhs.get(&k).unwrap_or(&z);
            assert!(
                l.trusted_eq(r),
                "seed {} it {} eps^{} floors {} {}\ndiff = {}",
                seed,
                it,
                k,
                l.floor(),
                r.floor(),
                l.sub(r).unwrap()
            );
        }
    }
}

#[test]
fn composition_matches_action() {
    check_action(FoliationShape::new(1, 0), 1, false, false, 1);
    check_action(FoliationShape::new(1, 1), 2, false, false, 1);
    check_action(FoliationShape::new(1, 1), 3, true, false, 1);
    check_action(FoliationShape::new(1, 0), 12, false, true, 0);
    check_action(FoliationShape::new(1, 1), 13, false, true, 0);
    check_action(FoliationShape::new(1, 1), 11, true, true, 1);
}

#[test]
fn laplacian_predicate() {
    let s = FoliationShape::new(1, 1);
    let flat = flat_laplacian(s, 3, F);
    assert!(is_generalized_laplacian(&flat));
    let mut pdp = OpSeries::zero(s, 3);
    for i in 0..2 {
        let mut dp = vec![0, 0];
        dp[i] = 1;
        pdp.insert(
            OpKey {
                eps: 1,
                right: CliffordWord::ONE,
                dx: vec![0, 0],
                dp,
            },
            p(s, i, F),
        );
    }
    assert!(is_generalized_laplacian(&flat.add(&pdp).unwrap()));
    assert!(!is_generalized_laplacian(
        &flat.add(&OpSeries::dx(s, 0, 3, F)).unwrap()
    ));
    assert_eq!(flat.order(), Some(q(1, 2)));
}

#[test]
fn sigma_of_p() {
    let s = s1();
    let flat = GeneralizedLaplacian::flat(s, 4, F);
    let pl = OpSeries::left(p(s, 0, F), 4);
    let sig = sigma_conj(&flat, &pl, 4).unwrap();
    assert_eq!(sig.degree(), 1);
    let expected = OpSeries::derivative(s, ExactScalar::i(), vec![1], vec![0], 1, 4, F);
    assert!(sig.coeffs[1].agrees_with(&expected));
    let c = OpSeries::scalar(s, ExactScalar::from_int(3), 4, F);
    assert_eq!(sigma_conj(&flat, &c, 4).unwrap().degree(), 0);
}

#[test]
fn sigma_group_law() {
    let s = FoliationShape::new(1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = RandomOpSpec {
        eps_trunc: 3,
        ..Default::default()
    };
    let a = random_op(&mut rng, s, &spec);
    let flat = GeneralizedLaplacian::flat(s, 3, F);
    let (t, u) = (q(1, 3), q(-2, 5));
    let once = sigma_conj(&flat, &a, 3)
        .unwrap()
        .eval(&(t.clone() + u.clone()))
        .unwrap();
    let inner = sigma_conj(&flat, &a, 3).unwrap().eval(&u).unwrap();
    let twice = sigma_conj(&flat, &inner, 3).unwrap().eval(&t).unwrap();
    assert!(once.agrees_with(&twice));
}

#[test]
fn duhamel_forms_agree() {
    let s = s1();
    let n = 3;
    let flat = GeneralizedLaplacian::flat(s, n, F);
    let zero = OpSeries::zero(s, n);
    let p0 = duhamel_exp(&flat, &zero, F).unwrap().prefactor;
    assert!(p0.agrees_with(&OpSeries::identity(s, n, F)));
    // s = ε(p_L ∂_p + e^{2πix}) + ε² ∂_p.
    let mut sp = OpSeries::zero(s, n);
    sp.insert(
        OpKey {
            eps: 1,
            right: CliffordWord::ONE,
            dx: vec![0],
            dp: vec![1],
        },
        p(s, 0, F),
    );
    sp.insert(
        OpKey {
            eps: 1,
            ..OpKey::plain(1)
        },
        character(s, vec![1], F),
    );
    sp.insert(
        OpKey {
            eps: 2,
            right: CliffordWord::ONE,
            dx: vec![0],
            dp: vec![1],
        },
        HSymbol::one(s, F),
    );
    let t = duhamel_exp(&flat, &sp, F).unwrap();
    let full = t.expand(F).unwrap();
    let direct = exp_series(&flat.series().add(&sp).unwrap(), F).unwrap();
    assert!(full.agrees_with(&direct));
    let first = duhamel_first_form(&flat, &sp, F).unwrap();
    assert!(first.agrees_with(&direct));
    // ε¹ part of the prefactor is ∫_0^1 σ^t(s) dt at order ε¹, i.e. s_1.
    assert!(t
        .prefactor
        .eps_component(1)
        .agrees_with(&sp.eps_component(1)));
}

#[test]
fn brackets() {
    assert_eq!(
        bracket(&[0, 0], &[0, 0]),
        EpsMonomial {
            coeff: ExactScalar::one(),
            pow: 0
        }
    );
    assert_eq!(
        bracket(&[1, 0], &[1, 0]),
        EpsMonomial {
            coeff: ExactScalar::i(),
            pow: -1
        }
    );
    assert!(bracket(&[1, 0], &[0, 1]).coeff.is_zero());
    assert!(bracket(&[1, 0], &[0, 0]).coeff.is_zero());
    // ∂_{x1}∂_{x2}∂_{p1}∂_{p2}: one matching; ∂_{x1}^2∂_{p1}^2: two.
    assert_eq!(bracket(&[1, 1], &[1, 1]).coeff, ExactScalar::from_int(-1));
    assert_eq!(bracket(&[2, 0], &[2, 0]).coeff, ExactScalar::from_int(-2));
    for a in [[0u32, 2, 1], [1, 1, 1], [3, 0, 0]] {
        for b in [[0u32, 2, 1], [1, 1, 1], [2, 1, 0]] {
            let (x, y) = (bracket(&a, &b), bracket::bracket_closed_form(&a, &b));
            assert_eq!(x.coeff, y.coeff);
            if !x.coeff.is_zero() {
                assert_eq!(x.pow, y.pow);
            }
        }
    }
}

#[test]
fn double_bracket_and_trace() {
    for (v, h) in [(1, 0), (1, 1)] {
        let s = FoliationShape::new(v, h);
        let n = s.n();
        let top = CliffordWord::top(n);
        let a = rho_power(s, -(s.q() as i64), -8);
        let mut pre = OpSeries::zero(s, n as u32 + 1);
        pre.insert(
            OpKey {
                eps: n as u32,
                right: top,
                dx: vec![0; n],
                dp: vec![0; n],
            },
            a.clone(),
        );
        let t = TraceClassElement::new(pre);
        let db = double_bracket(&t);
        assert_eq!(db.len(), 1);
        assert!(db[&(n as i64)].trusted_eq(&a));
        assert_eq!(tr_s(&t).unwrap(), wres(&a).unwrap());
        let unit = TraceClassElement::new(OpSeries::identity(s, 3, -8));
        assert!(double_bracket(&unit).is_empty());
        assert!(tr_s(&unit).unwrap().is_zero());
        let mut unb = OpSeries::zero(s, 3);
        unb.insert(
            OpKey {
                eps: 1,
                right: CliffordWord::from_sets(&[], &[0]),
                dx: vec![0; n],
                dp: vec![0; n],
            },
            a,
        );
        assert!(double_bracket(&TraceClassElement::new(unb)).is_empty());
    }
}

fn series(c: &[i64]) -> EpsSeries {
    EpsSeries {
        coeffs: c.iter().map(|&x| ExactScalar::from_int(x)).collect(),
    }
}

#[test]
fn todd_examples() {
    let n = 4;
    let zero: EpsMatrix = vec![vec![EpsSeries::zero(n); 2]; 2];
    assert_eq!(todd_series(&zero, n).unwrap(), EpsSeries::one(n));
    let r = vec![vec![series(&[0, 3, 0, 0, 0])]];
    let td = todd_series(&r, n).unwrap();
    // 1 − 3ε/2 + 9ε²/12 + 0·ε³ − 81ε⁴/720.
    let want = [q(1, 1), q(-3, 2), q(3, 4), q(0, 1), q(-81, 720)];
    for (c, w) in td.coeffs.iter().zip(want) {
        assert_eq!(c, &ExactScalar::from_rational(w));
    }
    let diag = vec![
        vec![series(&[0, 3, 0, 0, 0]), EpsSeries::zero(n)],
        vec![EpsSeries::zero(n), series(&[0, -2, 1, 0, 0])],
    ];
    let r2 = vec![vec![series(&[0, -2, 1, 0, 0])]];
    assert_eq!(
        todd_series(&diag, n).unwrap(),
        td.mul(&todd_series(&r2, n).unwrap())
    );
    assert_eq!(
        todd_series(&diag, n).unwrap(),
        todd::todd_determinant(&diag, n).unwrap()
    );
}

#[test]
fn mehler_scalar() {
    let n = 4;
    let r = vec![vec![series(&[0, 2, 0, 0, 0])]];
    assert_eq!(mehler_bracket(&r, n).unwrap(), todd_series(&r, n).unwrap());
    let zero = vec![vec![EpsSeries::zero(n)]];
    assert_eq!(mehler_bracket(&zero, n).unwrap(), EpsSeries::one(n));
}

#[test]
fn mehler_matrix_and_vanishing() {
    let n = 3;
    let r = vec![
        vec![series(&[0, 1, 0, 0]), series(&[0, -2, 0, 0])],
        vec![series(&[0, 3, 0, 0]), series(&[0, 1, 1, 0])],
    ];
    assert_eq!(mehler_bracket(&r, n).unwrap(), todd_series(&r, n).unwrap());
    let v = mehler_vanishing(&[1, 0], &r, n).unwrap();
    assert!(
        v.values().all(|a| a.is_zero()),
        "{:?}",
        v.keys().collect::<Vec<_>>()
    );
}

#[test]
fn flat_de_rham_square() {
    let s = FoliationShape::new(2, 0);
    let sq = dirac_square(&DiracDescriptor::DeRham { bar: vec![] }, s, 3, F).unwrap();
    let mut want = flat_laplacian(s, 3, F);
    for i in 0..2 {
        let mut dp = vec![0, 0];
        dp[i] = 1;
        want.insert(
            OpKey {
                eps: 1,
                right: CliffordWord::ONE,
                dx: vec![0, 0],
                dp,
            },
            p(s, i, F),
        );
        want.insert(
            OpKey {
                eps: 1,
                right: CliffordWord::from_sets(&[i], &[i]),
                dx: vec![0, 0],
                dp: vec![0, 0],
            },
            HSymbol::one(s, F),
        );
    }
    assert!(sq.agrees_with(&want), "{}", sq);
}

fn christoffel_zero(n: usize) -> Vec<Vec<Vec<FourierFunction>>> {
    vec![vec![vec![FourierFunction::zero(n); n]; n]; n]
}

#[test]
fn affine_flat_and_constant() {
    let s = FoliationShape::new(2, 0);
    let flat = DiracDescriptor::Affine {
        christoffel: christoffel_zero(2),
        s: vec![],
        bar: vec![],
    };
    let sq = dirac_square(&flat, s, 3, F).unwrap();
    assert!(sq.agrees_with(&flat_laplacian(s, 3, F)), "{}", sq);
    let mut g = christoffel_zero(2);
    let c = |x: i64| FourierFunction::constant(2, ExactScalar::from_int(x));
    g[0][0][1] = c(1);
    g[0][1][0] = c(1);
    g[1][1][1] = c(2);
    g[1][0][0] = c(-1);
    let desc = DiracDescriptor::Affine {
        christoffel: g.clone(),
        s: vec![],
        bar: vec![],
    };
    let sq = dirac_square(&desc, s, 3, F).unwrap();
    let r = curvature_tensor(&g).unwrap();
    assert!(r.iter().flatten().flatten().flatten().any(|f| !f.is_zero()));
    assert_eq!(dirac::curvature_from_square(&sq), r);
    assert_eq!(dirac::clifford_curvature_from_square(&sq), r);
}

#[test]
fn filtration_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let spec = RandomOpSpec {
        symbol: RandomSpec {
            words: true,
            ..RandomSpec::default()
        },
        max_deriv: 2,
        ..Default::default()
    };
    for shape in [FoliationShape::new(1, 0), FoliationShape::new(1, 1)] {
        for _ in 0..10 {
            let a = random_op(&mut rng, shape, &spec);
            let b = random_op(&mut rng, shape, &spec);
            let ab = op_compose(&a, &b).unwrap();
            let (Some(m), Some(m2)) = (a.order(), b.order()) else {
                continue;
            };
            let k = a.min_eps().unwrap() + b.min_eps().unwrap();
            assert!(ab.in_filtration(&(m + m2), k));
        }
    }
}

#[test]
fn sigma_is_multiplicative() {
    let s = FoliationShape::new(1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let spec = RandomOpSpec {
        eps_trunc: 3,
        ..Default::default()
    };
    let flat = GeneralizedLaplacian::flat(s, 3, F);
    for _ in 0..3 {
        let a = random_op(&mut rng, s, &spec);
        let b = random_op(&mut rng, s, &spec);
        let t = q(2, 3);
        let lhs = sigma_conj(&flat, &op_compose(&a, &b).unwrap(), 3)
            .unwrap()
            .eval(&t)
            .unwrap();
        let sa = sigma_conj(&flat, &a, 3).unwrap().eval(&t).unwrap();
        let sb = sigma_conj(&flat, &b, 3).unwrap().eval(&t).unwrap();
        assert!(lhs.agrees_with(&op_compose(&sa, &sb).unwrap()));
    }
}

#[test]
fn graded_trace_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for shape in [FoliationShape::new(1, 0), FoliationShape::new(1, 1)] {
        let q_dim = shape.q() as i64;
        let n = shape.n() as u32;
        let trunc = 2 * n + 4;
        let tspec = RandomOpSpec {
            symbol: RandomSpec {
                top: -q_dim + 1,
                depth: 4,
                words: true,
                even_words: true,
                ..RandomSpec::default()
            },
            terms: 3,
            max_deriv: 1,
            max_eps: n + 1,
            right_words: true,
            eps_trunc: trunc,
        };
        let dspec = RandomOpSpec {
            symbol: RandomSpec {
                top: 1,
                depth: 3,
                words: true,
                even_words: true,
                ..RandomSpec::default()
            },
            max_eps: 1,
            eps_trunc: trunc,
            ..tspec
        };
        let mut nonzero = 0;
        for _ in 0..4 {
            let mut pre = random_op(&mut rng, shape, &tspec);
            let mut top = OpSeries::zero(shape, trunc);
            let a = random_symbol(&mut rng, shape, &tspec.symbol)
                .add(&rho_power(shape, -q_dim, -q_dim - 3))
                .unwrap();
            top.insert(
                OpKey {
                    eps: n,
                    right: CliffordWord::top(shape.n()),
                    ..OpKey::plain(shape.n())
                },
                a,
            );
            pre = pre.add(&top).unwrap();
            let t = TraceClassElement::new(pre);
            let d = random_op(&mut rng, shape, &dspec);
            if !tr_s(&t).unwrap().is_zero() {
                nonzero += 1;
            }
            let c = t.commutator_with(&d, -40).unwrap();
            assert!(tr_s(&c).unwrap().is_zero(), "shape {:?}", shape);
        }
        assert!(nonzero > 0);
    }
}

#[test]
fn trace_reduces_to_residue() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for shape in [FoliationShape::new(1, 0), FoliationShape::new(1, 1)] {
        let n = shape.n();
        let q_dim = shape.q() as i64;
        let trunc = n as u32 + 2;
        let floor = -q_dim - 3;
        let flat = GeneralizedLaplacian::flat(shape, trunc, floor);
        let mut pdp = OpSeries::zero(shape, trunc);
        for i in 0..n {
            let mut dp = vec![0; n];
            dp[i] = 1;
            pdp.insert(
                OpKey {
                    eps: 1,
                    right: CliffordWord::ONE,
                    dx: vec![0; n],
                    dp,
                },
                p(shape, i, floor),
            );
        }
        let heat = duhamel_exp(&flat, &pdp, floor).unwrap();
        for _ in 0..3 {
            let s0 = random_symbol(
                &mut rng,
                shape,
                &RandomSpec {
                    top: 0,
                    depth: q_dim + 2,
                    ..RandomSpec::default()
                },
            );
            let s1 = random_symbol(
                &mut rng,
                shape,
                &RandomSpec {
                    top: -1,
                    depth: q_dim + 2,
                    ..RandomSpec::default()
                },
            );
            let a = s0
                .star(&crate::symbols::log_commutator(&s1).unwrap())
                .unwrap();
            let mut pre = OpSeries::zero(shape, trunc);
            pre.insert(
                OpKey {
                    eps: n as u32,
                    right: CliffordWord::top(n),
                    ..OpKey::plain(n)
                },
                a.clone(),
            );
            let t = TraceClassElement::new(op_compose(&pre, &heat.prefactor).unwrap());
            assert_eq!(tr_s(&t).unwrap(), wres(&a).unwrap());
        }
    }
}

#[test]
fn random_dirac_squares() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let shape = FoliationShape::new(2, 0);
    for affine in [false, true] {
        for _ in 0..3 {
            let desc = random_descriptor(&mut rng, shape, affine);
            let sq = dirac_square(&desc, shape, 3, F).unwrap();
            assert!(is_generalized_laplacian(&sq));
            if let DiracDescriptor::Affine { christoffel, .. } = &desc {
                let r = curvature_tensor(christoffel).unwrap();
                assert_eq!(dirac::curvature_from_square(&sq), r);
                assert_eq!(dirac::clifford_curvature_from_square(&sq), r);
            }
        }
    }
}
