use hcalc::crossed::IsometryElement;
use hcalc::io::{parse_symbol, serialize_symbol};
use hcalc::opalg::bracket::bracket_closed_form;
use hcalc::opalg::todd::todd_determinant;
use hcalc::opalg::{bracket, todd_series};
use hcalc::residue::wres;
use hcalc::scalar::ExactScalar;
use hcalc::symbols::clifford::clifford_mul;
use hcalc::symbols::random::{random_symbol, RandomSpec};
use hcalc::symbols::{CliffordWord, FoliationShape};
use hcalc::verify::eps_matrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape_strategy() -> impl Strategy<Value = FoliationShape> {
    prop_oneof![
        Just(FoliationShape::new(1, 0)),
        Just(FoliationShape::new(1, 1)),
        Just(FoliationShape::new(2, 1)),
    ]
}

fn scalar_strategy() -> impl Strategy<Value = ExactScalar> {
    (-6i64..=6, 1i64..=5, 0i64..8, -2i32..=2, -1i32..=1).prop_map(|(n, d, k, a, b)| {
        ExactScalar::ratio(n, d)
            .mul_ref(&ExactScalar::root_of_unity(8, k))
            .mul_ref(&ExactScalar::pi_half_pow(a))
            .mul_ref(&ExactScalar::gamma_quarter_pow(b))
    })
}

fn word_strategy(n: usize) -> impl Strategy<Value = CliffordWord> {
    (0u32..1 << n, 0u32..1 << n).prop_map(|(a, b)| CliffordWord::new(a, b))
}

fn rational_matrix(d: usize) -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    proptest::collection::vec(proptest::collection::vec((-4i64..=4, 1i64..=3), d), d).prop_map(
        |rows| {
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|(n, q)| BigRational::new(BigInt::from(n), BigInt::from(q)))
                        .collect()
                })
                .collect()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalars_form_a_ring(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(a.add_ref(&b).mul_ref(&c), a.mul_ref(&c).add_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        if !a.is_zero() {
            prop_assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalars_match_floating_point(a in scalar_strategy(), b in scalar_strategy()) {
        let exact = a.mul_ref(&b).add_ref(&a).to_complex();
        let float = a.to_complex() * b.to_complex() + a.to_complex();
        prop_assert!((exact - float).norm() <= 1e-9 * (1.0 + float.norm()));
    }

    #[test]
    fn clifford_products_associate(u in word_strategy(3), v in word_strategy(3), w in word_strategy(3)) {
        let mut left = std::collections::BTreeMap::new();
        for (uv, c) in clifford_mul(&u, &v) {
            for (x, d) in clifford_mul(&uv, &w) {
                *left.entry(x).or_insert(0) += c * d;
            }
        }
        let mut right = std::collections::BTreeMap::new();
        for (vw, c) in clifford_mul(&v, &w) {
            for (x, d) in clifford_mul(&u, &vw) {
                *right.entry(x).or_insert(0) += c * d;
            }
        }
        left.retain(|_, c| *c != 0);
        right.retain(|_, c| *c != 0);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn documents_round_trip(shape in shape_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_symbol(&mut rng, shape, &RandomSpec { words: true, ..RandomSpec::default() });
        let text = serialize_symbol(&a);
        let back = parse_symbol(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(serialize_symbol(&back), text);
    }

    #[test]
    fn star_is_associative(shape in shape_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RandomSpec { words: true, ..RandomSpec::default() };
        let a = random_symbol(&mut rng, shape, &spec);
        let b = random_symbol(&mut rng, shape, &spec);
        let c = random_symbol(&mut rng, shape, &spec);
        let l = a.star(&b).unwrap().star(&c).unwrap();
        let r = a.star(&b.star(&c).unwrap()).unwrap();
        prop_assert!(l.trusted_eq(&r));
    }

    #[test]
    fn residue_vanishes_on_commutators(shape in shape_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RandomSpec { top: 0, depth: shape.q() + 2, words: true, even_words: true, ..RandomSpec::default() };
        let a = random_symbol(&mut rng, shape, &spec);
        let b = random_symbol(&mut rng, shape, &spec);
        prop_assert!(wres(&a.commutator(&b).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn translations_act_by_automorphisms(seed in any::<u64>(), num in -3i64..=3, den in 1i64..=4) {
        let shape = FoliationShape::new(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RandomSpec::default();
        let a = random_symbol(&mut rng, shape, &spec);
        let b = random_symbol(&mut rng, shape, &spec);
        let t = BigRational::new(BigInt::from(num), BigInt::from(den));
        let g = IsometryElement::translation(vec![t.clone(), t]);
        let lhs = g.act_on_symbol(&a.star(&b).unwrap());
        let rhs = g.act_on_symbol(&a).star(&g.act_on_symbol(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn todd_trace_log_matches_determinant(r0 in rational_matrix(2)) {
        let r = eps_matrix(&r0, 6);
        prop_assert_eq!(todd_series(&r, 6).unwrap(), todd_determinant(&r, 6).unwrap());
    }

    #[test]
    fn brackets_match_closed_form(a in proptest::collection::vec(0u32..3, 2), b in proptest::collection::vec(0u32..3, 2)) {
        let x = bracket(&a, &b);
        let y = bracket_closed_form(&a, &b);
        prop_assert_eq!(&x.coeff, &y.coeff);
        if !x.coeff.is_zero() {
            prop_assert_eq!(x.pow, y.pow);
        }
    }
}
