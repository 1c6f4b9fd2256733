//! Seeded property suites behind the `verify` command and the acceptance tests.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::crossed::{
    crossed_star, fundamental_pairing_1d, generate_group, localized_residue, radul_cocycle,
    toeplitz_index_oracle_1d, winding_lift, CrossedSymbol, IsometryElement,
};
use crate::io::serialize_symbol;
use crate::opalg::random::{random_christoffel, random_descriptor, random_op, RandomOpSpec};
use crate::opalg::{
    bracket, curvature_tensor, dirac, dirac_square, duhamel_exp, duhamel_first_form, exp_series,
    is_generalized_laplacian, mehler_bracket, op_compose, sigma_conj, todd_series, tr_s,
    DiracDescriptor, EpsMatrix, EpsSeries, GeneralizedLaplacian, OpKey, OpSeries,
    TraceClassElement,
};
use crate::residue::{annulus_oracle, gaussian_factor_1d, gaussian_moment, sphere_moment, wres};
use crate::scalar::ExactScalar;
use crate::symbols::builders::{p, rho_power};
use crate::symbols::clifford::clifford_mul;
use crate::symbols::random::{random_symbol, RandomSpec};
use crate::symbols::shape::multi_indices;
use crate::symbols::{log_commutator, CliffordWord, FoliationShape, HSymbol};

pub const SUITES: [&str; 5] = ["all", "symbols", "residue", "crossed", "opalg"];

/// Deliberately wrong conventions, for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fault {
    /// Uses a ⋆ b + b ⋆ a where a commutator is required.
    AntiCommutator,
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    /// Multiplies every case count; 1.0 gives the documented counts.
    pub scale: f64,
    pub fault: Option<Fault>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            scale: 1.0,
            fault: None,
        }
    }
}

impl Config {
    fn count(&self, n: usize) -> usize {
        ((n as f64 * self.scale).ceil() as usize).max(1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub id: String,
    pub input: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub case: String,
    pub exact: String,
    pub numeric: f64,
    pub oracle: f64,
    pub abs_diff: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyResult {
    pub property: String,
    pub cases: usize,
    pub failures: Vec<CaseRecord>,
    pub discrepancies: Vec<Discrepancy>,
}

impl PropertyResult {
    fn new(property: &str) -> Self {
        PropertyResult {
            property: property.to_string(),
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, input: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        let id = format!("{}#{}", self.property, self.cases);
        self.cases += 1;
        if !ok {
            self.failures.push(CaseRecord {
                id,
                input: input(),
                detail: detail(),
            });
        }
    }

    fn error(&mut self, input: impl FnOnce() -> String, e: impl std::fmt::Display) {
        self.check(false, input, || format!("error: {}", e));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub cases_run: usize,
    pub failure_count: usize,
    pub properties: Vec<PropertyResult>,
    pub wall_time_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Per-property generator, independent of the order in which properties run.
pub fn rng_for(seed: u64, property: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in property.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

type Property = fn(u64, &Config) -> PropertyResult;

fn suite_properties(suite: &str) -> Option<Vec<Property>> {
    let symbols: Vec<Property> = vec![
        star_associativity,
        star_leading_multiplicative,
        star_unital_and_leibniz,
        star_degree_bookkeeping,
        clifford_matrices,
    ];
    let residue: Vec<Property> = vec![
        residue_trace_property,
        residue_locality,
        moment_oracle,
        dilation_consistency,
    ];
    let crossed: Vec<Property> = vec![
        crossed_automorphism,
        crossed_residue_invariance,
        localized_trace_property,
        radul_cocycle_identities,
        radul_locality,
        flat_index_identity,
        index_consistency,
    ];
    let opalg: Vec<Property> = vec![
        filtration_soundness,
        sigma_multiplicative,
        graded_trace_property,
        mehler_todd,
        bracket_examples,
        duhamel_agreement,
        dirac_squares,
        lichnerowicz_match,
        trace_to_residue,
    ];
    match suite {
        "symbols" => Some(symbols),
        "residue" => Some(residue),
        "crossed" => Some(crossed),
        "opalg" => Some(opalg),
        "all" => Some([symbols, residue, crossed, opalg].concat()),
        _ => None,
    }
}

/// Runs a named suite; None for an unknown name.
pub fn run_suite(suite: &str, seed: u64, config: &Config) -> Option<VerificationReport> {
    let props = suite_properties(suite)?;
    let start = Instant::now();
    let mut properties: Vec<PropertyResult> = props.iter().map(|f| f(seed, config)).collect();
    properties.sort_by(|a, b| a.property.cmp(&b.property));
    let cases_run = properties.iter().map(|p| p.cases).sum();
    let failure_count = properties.iter().map(|p| p.failures.len()).sum();
    Some(VerificationReport {
        suite: suite.to_string(),
        seed,
        cases_run,
        failure_count,
        properties,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

fn shapes3() -> [FoliationShape; 3] {
    [
        FoliationShape::new(1, 0),
        FoliationShape::new(1, 1),
        FoliationShape::new(2, 1),
    ]
}

fn show(a: &HSymbol) -> String {
    serialize_symbol(a)
}

fn show_all(xs: &[&HSymbol]) -> String {
    xs.iter().map(|a| show(a)).collect::<Vec<_>>().join("\n")
}

fn bracket_or_fault(
    a: &HSymbol,
    b: &HSymbol,
    config: &Config,
) -> Result<HSymbol, crate::symbols::SymbolError> {
    match config.fault {
        Some(Fault::AntiCommutator) => a.star(b)?.add(&b.star(a)?),
        None => a.commutator(b),
    }
}

// ---- symbols ----

pub fn star_associativity(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("star_associativity");
    let mut rng = rng_for(seed, &out.property);
    let spec = RandomSpec {
        words: true,
        max_terms: 4,
        ..RandomSpec::default()
    };
    for shape in shapes3() {
        for _ in 0..config.count(50) {
            let a = random_symbol(&mut rng, shape, &spec);
            let b = random_symbol(&mut rng, shape, &spec);
            let c = random_symbol(&mut rng, shape, &spec);
            match (
                a.star(&b).and_then(|ab| ab.star(&c)),
                b.star(&c).and_then(|bc| a.star(&bc)),
            ) {
                (Ok(l), Ok(r)) => out.check(
                    l.trusted_eq(&r),
                    || show_all(&[&a, &b, &c]),
                    || "(ab)c != a(bc)".into(),
                ),
                (Err(e), _) | (_, Err(e)) => out.error(|| show_all(&[&a, &b, &c]), e),
            }
        }
    }
    out
}

pub fn star_leading_multiplicative(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("star_leading_multiplicative");
    let mut rng = rng_for(seed, &out.property);
    let spec = RandomSpec {
        words: true,
        ..RandomSpec::default()
    };
    for shape in shapes3() {
        for _ in 0..config.count(20) {
            let a = random_symbol(&mut rng, shape, &spec);
            let b = random_symbol(&mut rng, shape, &spec);
            let l = a.star(&b).map(|x| x.leading());
            let r = a.leading().pointwise_mul(&b.leading()).map(|x| x.leading());
            out.check(
                matches!((&l, &r), (Ok(x), Ok(y)) if x == y),
                || show_all(&[&a, &b]),
                || "leading mismatch".into(),
            );
        }
    }
    out
}

pub fn star_unital_and_leibniz(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("star_unital_and_leibniz");
    let mut rng = rng_for(seed, &out.property);
    let spec = RandomSpec {
        words: true,
        even_words: true,
        ..RandomSpec::default()
    };
    for shape in shapes3() {
        for _ in 0..config.count(10) {
            let a = random_symbol(&mut rng, shape, &spec);
            let b = random_symbol(&mut rng, shape, &spec);
            let c = random_symbol(&mut rng, shape, &spec);
            let one = HSymbol::one(shape, -10);
            let unital = one.star(&a).map(|x| x.trusted_eq(&a)).unwrap_or(false)
                && a.star(&one).map(|x| x.trusted_eq(&a)).unwrap_or(false);
            let leibniz = (|| -> Result<bool, crate::symbols::SymbolError> {
                let lhs = a.commutator(&b.star(&c)?)?;
                let rhs = a
                    .commutator(&b)?
                    .star(&c)?
                    .add(&b.star(&a.commutator(&c)?)?)?;
                Ok(lhs.trusted_eq(&rhs))
            })()
            .unwrap_or(false);
            out.check(
                unital && leibniz,
                || show_all(&[&a, &b, &c]),
                || format!("unital {} leibniz {}", unital, leibniz),
            );
        }
    }
    out
}

pub fn star_degree_bookkeeping(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("star_degree_bookkeeping");
    let mut rng = rng_for(seed, &out.property);
    let spec = RandomSpec {
        words: true,
        ..RandomSpec::default()
    };
    for shape in shapes3() {
        for _ in 0..config.count(10) {
            let a = random_symbol(&mut rng, shape, &spec);
            let b = random_symbol(&mut rng, shape, &spec);
            let ok = match (a.star(&b), a.star_bounded(&b, 24)) {
                (Ok(x), Ok(y)) => {
                    x.trusted_eq(&y) && x.iter().all(|(d, _, _)| d <= a.top() + b.top())
                }
                _ => false,
            };
            out.check(
                ok,
                || show_all(&[&a, &b]),
                || "deeper expansion changed a retained degree".into(),
            );
        }
    }
    out
}

pub fn clifford_matrices(_seed: u64, _config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("clifford_matrices");
    for n in 1..=3usize {
        let d = 1usize << n;
        let words: Vec<CliffordWord> = (0..1u32 << n)
            .flat_map(|a| (0..1u32 << n).map(move |b| CliffordWord::new(a, b)))
            .collect();
        let mut ok = true;
        for u in &words {
            let mu = u.matrix(n);
            for w in &words {
                let mw = w.matrix(n);
                let mut prod = vec![vec![0i64; d]; d];
                for i in 0..d {
                    for k in 0..d {
                        for j in 0..d {
                            prod[i][j] += mu[i][k] * mw[k][j];
                        }
                    }
                }
                let mut sum = vec![vec![0i64; d]; d];
                for (x, c) in clifford_mul(u, w) {
                    let mx = x.matrix(n);
                    for i in 0..d {
                        for j in 0..d {
                            sum[i][j] += c * mx[i][j];
                        }
                    }
                }
                ok &= prod == sum;
            }
        }
        out.check(
            ok,
            || format!("n = {}", n),
            || "normal-ordered product differs from matrix product".into(),
        );
    }
    out
}

// ---- residue ----

fn classical_pair_spec(shape: &FoliationShape) -> RandomSpec {
    RandomSpec {
        top: 0,
        depth: shape.q() + 2,
        words: true,
        even_words: true,
        ..RandomSpec::default()
    }
}

pub fn residue_trace_property(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("residue_trace_property");
    let mut rng = rng_for(seed, &out.property);
    let mut nonzero = 0;
    for shape in shapes3() {
        let spec = classical_pair_spec(&shape);
        for _ in 0..config.count(50) {
            let a = random_symbol(&mut rng, shape, &spec);
            let b = random_symbol(&mut rng, shape, &spec);
            if a.star(&b)
                .ok()
                .and_then(|x| wres(&x).ok())
                .is_some_and(|r| !r.is_zero())
            {
                nonzero += 1;
            }
            match bracket_or_fault(&a, &b, config)
                .map_err(|e| e.to_string())
                .and_then(|c| wres(&c).map_err(|e| e.to_string()))
            {
                Ok(r) => out.check(
                    r.is_zero(),
                    || show_all(&[&a, &b]),
                    || format!("wres([a,b]) = {}", r),
                ),
                Err(e) => out.error(|| show_all(&[&a, &b]), e),
            }
        }
    }
    out.check(
        nonzero > 0,
        || "all samples".into(),
        || "every wres(a*b) vanished; samples are vacuous".into(),
    );
    out
}

pub fn residue_locality(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("residue_locality");
    let mut rng = rng_for(seed, &out.property);
    for shape in shapes3() {
        let spec = classical_pair_spec(&shape);
        for _ in 0..config.count(10) {
            let a = random_symbol(&mut rng, shape, &spec);
            let mut c = random_symbol(&mut rng, shape, &spec);
            c = c.sub(&c.component(-shape.q())).unwrap();
            let ok = match (wres(&a), a.add(&c).map(|x| wres(&x))) {
                (Ok(x), Ok(Ok(y))) => x == y,
                _ => false,
            };
            out.check(
                ok,
                || show_all(&[&a, &c]),
                || "wres changed under a perturbation away from degree -Q".into(),
            );
        }
    }
    out
}

fn even_multi_indices(shape: &FoliationShape, max: i64) -> Vec<Vec<u32>> {
    multi_indices(shape, max)
        .into_iter()
        .filter(|g| g.iter().all(|x| x % 2 == 0))
        .collect()
}

fn to_f64(x: &ExactScalar) -> f64 {
    x.numeric_eval(30).re.parse().unwrap_or(f64::NAN)
}

/// Sphere moments against the annulus cubature oracle, tolerance 1e-6.
pub fn moment_oracle(_seed: u64, _config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("moment_oracle");
    for shape in shapes3() {
        for gamma in even_multi_indices(&shape, 8) {
            let exact = sphere_moment(&gamma, &shape);
            let numeric = to_f64(&exact);
            let case = format!("shape {} gamma {:?}", shape, gamma);
            match annulus_oracle(&gamma, &shape, 1e-9) {
                Ok(oracle) => {
                    let diff = (numeric - oracle).abs();
                    out.discrepancies.push(Discrepancy {
                        case: case.clone(),
                        exact: exact.to_string(),
                        numeric,
                        oracle,
                        abs_diff: diff,
                    });
                    out.check(
                        diff <= 1e-6,
                        || case.clone(),
                        || format!("|exact - cubature| = {:e}", diff),
                    );
                }
                Err(e) => out.error(|| case.clone(), e),
            }
        }
    }
    out
}

/// sphere_moment · Γ((⟨γ⟩+Q)/4)/4 against the Gaussian moment, exactly and by 1-D quadrature.
pub fn dilation_consistency(_seed: u64, _config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("dilation_consistency");
    for shape in shapes3() {
        for gamma in even_multi_indices(&shape, 8) {
            let g = gaussian_moment(&gamma, &shape);
            let k = shape.weighted(&gamma) + shape.q();
            let lhs = ExactScalar::gamma_of_quarter(k).map(|gk| {
                sphere_moment(&gamma, &shape)
                    .mul_ref(&gk)
                    .mul_ref(&ExactScalar::ratio(1, 4))
            });
            let mut quad = 1.0;
            for (i, &gi) in gamma.iter().enumerate() {
                quad *= gaussian_factor_1d(gi, i < shape.v, 1e-12).unwrap_or(f64::NAN);
            }
            let num = to_f64(&g);
            let ok = lhs.as_ref().is_ok_and(|x| *x == g)
                && (num - quad).abs() <= 1e-8 * num.abs().max(1.0);
            out.check(
                ok,
                || format!("shape {} gamma {:?}", shape, gamma),
                || format!("gaussian {} quadrature {}", num, quad),
            );
        }
    }
    out
}

// ---- crossed ----

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Three group samples: a translation, a signed block permutation, and the group they generate.
pub fn group_samples(shape: &FoliationShape) -> Vec<Vec<IsometryElement>> {
    let n = shape.n();
    let t =
        IsometryElement::translation(vec![BigRational::new(BigInt::from(1), BigInt::from(4)); n]);
    let mut perm: Vec<usize> = (0..n).collect();
    if shape.v >= 2 {
        perm.swap(0, 1);
    }
    let mut signs = vec![1i8; n];
    signs[n - 1] = -1;
    let trans = (0..n)
        .map(|i| {
            if i == 0 {
                half()
            } else {
                BigRational::from_integer(0.into())
            }
        })
        .collect();
    let r = IsometryElement::new(shape, perm, signs, trans).expect("block permutation");
    vec![
        generate_group(n, &[t.clone()]),
        generate_group(n, &[r.clone()]),
        generate_group(n, &[t, r]),
    ]
}

fn random_crossed(
    rng: &mut impl Rng,
    shape: FoliationShape,
    group: &[IsometryElement],
    spec: &RandomSpec,
) -> CrossedSymbol {
    let mut a = CrossedSymbol::zero(shape);
    for _ in 0..rng.gen_range(1..=2) {
        let g = group[rng.gen_range(0..group.len())].clone();
        a.insert(g, random_symbol(rng, shape, spec));
    }
    a
}

fn show_crossed(xs: &[&CrossedSymbol]) -> String {
    xs.iter()
        .map(|a| crate::io::serialize_crossed(a))
        .collect::<Vec<_>>()
        .join("\n")
}

fn crossed_shapes() -> [FoliationShape; 2] {
    [FoliationShape::new(1, 0), FoliationShape::new(2, 1)]
}

pub fn crossed_automorphism(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("crossed_automorphism");
    let mut rng = rng_for(seed, &out.property);
    let spec = RandomSpec {
        words: true,
        ..RandomSpec::default()
    };
    for shape in crossed_shapes() {
        for group in group_samples(&shape) {
            let count = config.count(50) / 2 + 1;
            for _ in 0..count {
                let g = &group[rng.gen_range(0..group.len())];
                let h = &group[rng.gen_range(0..group.len())];
                let a = random_symbol(&mut rng, shape, &spec);
                let b = random_symbol(&mut rng, shape, &spec);
                let mult = match (a.star(&b), g.act_on_symbol(&a).star(&g.act_on_symbol(&b))) {
                    (Ok(x), Ok(y)) => g.act_on_symbol(&x) == y,
                    _ => false,
                };
                let law = g.compose(h).act_on_symbol(&a) == g.act_on_symbol(&h.act_on_symbol(&a));
                let unit = IsometryElement::identity(shape.n()).act_on_symbol(&a) == a;
                out.check(
                    mult && law && unit,
                    || format!("g = {}, h = {}\n{}", g, h, show_all(&[&a, &b])),
                    || format!("multiplicative {} group law {} unit {}", mult, law, unit),
                );
            }
        }
    }
    out
}

pub fn crossed_residue_invariance(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("crossed_residue_invariance");
    let mut rng = rng_for(seed, &out.property);
    for shape in crossed_shapes() {
        let spec = classical_pair_spec(&shape);
        let group = group_samples(&shape).pop().unwrap();
        for _ in 0..config.count(25) {
            let g = &group[rng.gen_range(0..group.len())];
            let a = random_symbol(&mut rng, shape, &spec);
            let ok = matches!((wres(&a), wres(&g.act_on_symbol(&a))), (Ok(x), Ok(y)) if x == y);
            out.check(
                ok,
                || format!("g = {}\n{}", g, show(&a)),
                || "wres(alpha_g a) != wres(a)".into(),
            );
        }
    }
    out
}

pub fn localized_trace_property(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("localized_trace_property");
    let mut rng = rng_for(seed, &out.property);
    let mut nonzero = 0;
    for shape in crossed_shapes() {
        let spec = classical_pair_spec(&shape);
        for group in group_samples(&shape) {
            for _ in 0..config.count(50) / 6 + 1 {
                let a = random_crossed(&mut rng, shape, &group, &spec);
                let b = random_crossed(&mut rng, shape, &group, &spec);
                let r = (|| -> Result<ExactScalar, crate::crossed::CrossedError> {
                    let ab = crossed_star(&a, &b)?;
                    let ba = crossed_star(&b, &a)?;
                    if localized_residue(&ab).is_ok_and(|x| !x.is_zero()) {
                        nonzero += 1;
                    }
                    let c = match config.fault {
                        Some(Fault::AntiCommutator) => ab.add(&ba)?,
                        None => ab.sub(&ba)?,
                    };
                    localized_residue(&c)
                })();
                match r {
                    Ok(x) => out.check(
                        x.is_zero(),
                        || show_crossed(&[&a, &b]),
                        || format!("localized residue {}", x),
                    ),
                    Err(e) => out.error(|| show_crossed(&[&a, &b]), e),
                }
            }
        }
    }
    out.check(
        nonzero > 0,
        || "all samples".into(),
        || "every localized residue vanished; samples are vacuous".into(),
    );
    out
}

pub fn radul_cocycle_identities(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("radul_cocycle_identities");
    let mut rng = rng_for(seed, &out.property);
    let shape = FoliationShape::new(1, 0);
    let spec = RandomSpec {
        top: 0,
        depth: 4,
        ..RandomSpec::default()
    };
    let mut nonzero = 0;
    for group in group_samples(&shape) {
        for _ in 0..config.count(30) / 3 + 1 {
            let a = random_crossed(&mut rng, shape, &group, &spec);
            let b = random_crossed(&mut rng, shape, &group, &spec);
            let c = random_crossed(&mut rng, shape, &group, &spec);
            let r = (|| -> Result<(ExactScalar, ExactScalar, ExactScalar), crate::crossed::CrossedError> {
                let ab = radul_cocycle(&a, &b)?;
                let ba = radul_cocycle(&b, &a)?;
                let hoch = radul_cocycle(&crossed_star(&a, &b)?, &c)?
                    .sub_ref(&radul_cocycle(&a, &crossed_star(&b, &c)?)?)
                    .add_ref(&radul_cocycle(&crossed_star(&c, &a)?, &b)?);
                Ok((ab, ba, hoch))
            })();
            match r {
                Ok((ab, ba, hoch)) => {
                    if !ab.is_zero() {
                        nonzero += 1;
                    }
                    let anti = ab.add_ref(&ba).is_zero();
                    out.check(
                        anti && hoch.is_zero(),
                        || show_crossed(&[&a, &b, &c]),
                        || {
                            format!(
                                "phi(A,B) + phi(B,A) = {}, b phi = {}",
                                ab.add_ref(&ba),
                                hoch
                            )
                        },
                    );
                }
                Err(e) => out.error(|| show_crossed(&[&a, &b, &c]), e),
            }
        }
    }
    out.check(
        nonzero > 0,
        || "all samples".into(),
        || "every phi(A,B) vanished; samples are vacuous".into(),
    );
    out
}

pub fn radul_locality(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("radul_locality");
    let mut rng = rng_for(seed, &out.property);
    let shape = FoliationShape::new(1, 0);
    let spec = RandomSpec {
        top: 0,
        depth: 4,
        ..RandomSpec::default()
    };
    let group = group_samples(&shape).pop().unwrap();
    for _ in 0..config.count(10) {
        let g = group[rng.gen_range(0..group.len())].clone();
        let h = loop {
            let h = group[rng.gen_range(0..group.len())].clone();
            if !g.compose(&h).is_identity() {
                break h;
            }
        };
        let a = CrossedSymbol::single(g.clone(), random_symbol(&mut rng, shape, &spec));
        let b = CrossedSymbol::single(h, random_symbol(&mut rng, shape, &spec));
        let ok = radul_cocycle(&a, &b).is_ok_and(|x| x.is_zero());
        out.check(
            ok,
            || show_crossed(&[&a, &b]),
            || "phi(aU_g, bU_h) != 0 with gh != e".into(),
        );
    }
    out
}

/// κ from the winding pair: φ = κ · pairing.
pub fn kappa() -> Result<ExactScalar, crate::crossed::CrossedError> {
    let (a0, a1) = winding_lift(1, -3);
    let phi = radul_cocycle(
        &crate::crossed::radul::at_unit(a0.clone()),
        &crate::crossed::radul::at_unit(a1.clone()),
    )?;
    let pairing = fundamental_pairing_1d(&a0, &a1)?;
    Ok(phi.mul_ref(
        &pairing
            .inv()
            .map_err(|_| crate::crossed::CrossedError::NonInvertibleSymbol)?,
    ))
}

pub fn flat_index_identity(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("flat_index_identity");
    let mut rng = rng_for(seed, &out.property);
    let shape = FoliationShape::new(1, 0);
    let kappa = match kappa() {
        Ok(k) => k,
        Err(e) => {
            out.error(|| "winding pair".into(), e);
            return out;
        }
    };
    let spec = RandomSpec {
        top: 0,
        depth: 3,
        max_freq: 2,
        ..RandomSpec::default()
    };
    let mut nonzero = 0;
    for _ in 0..config.count(20) {
        let a0 = random_symbol(&mut rng, shape, &spec);
        let a1 = random_symbol(&mut rng, shape, &spec);
        let r = (|| -> Result<(ExactScalar, ExactScalar), crate::crossed::CrossedError> {
            let phi = radul_cocycle(
                &crate::crossed::radul::at_unit(a0.clone()),
                &crate::crossed::radul::at_unit(a1.clone()),
            )?;
            Ok((phi, fundamental_pairing_1d(&a0, &a1)?))
        })();
        match r {
            Ok((phi, pairing)) => {
                if !phi.is_zero() {
                    nonzero += 1;
                }
                let want = kappa.mul_ref(&pairing);
                out.check(
                    phi == want,
                    || show_all(&[&a0, &a1]),
                    || format!("phi = {}, kappa * pairing = {}", phi, want),
                );
            }
            Err(e) => out.error(|| show_all(&[&a0, &a1]), e),
        }
    }
    out.check(
        nonzero > 0,
        || "all samples".into(),
        || "every phi vanished; samples are vacuous".into(),
    );
    out
}

pub fn index_consistency(_seed: u64, _config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("index_consistency");
    for w in -2..=2i64 {
        let (a0, a1) = winding_lift(w, -3);
        let r = (|| -> Result<(ExactScalar, i64), crate::crossed::CrossedError> {
            let phi = radul_cocycle(
                &crate::crossed::radul::at_unit(a0.clone()),
                &crate::crossed::radul::at_unit(a1.clone()),
            )?;
            Ok((phi, toeplitz_index_oracle_1d(&a1, 48)?))
        })();
        match r {
            Ok((phi, ind)) => out.check(
                phi == ExactScalar::from_int(-ind),
                || format!("winding {}", w),
                || format!("phi = {}, toeplitz index = {}", phi, ind),
            ),
            Err(e) => out.error(|| format!("winding {}", w), e),
        }
    }
    out
}

// ---- opalg ----

pub fn filtration_soundness(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("filtration_soundness");
    let mut rng = rng_for(seed, &out.property);
    let spec = RandomOpSpec {
        symbol: RandomSpec {
            words: true,
            ..RandomSpec::default()
        },
        max_deriv: 2,
        ..Default::default()
    };
    for i in 0..config.count(100) {
        let shape = if i % 2 == 0 {
            FoliationShape::new(1, 0)
        } else {
            FoliationShape::new(1, 1)
        };
        let a = random_op(&mut rng, shape, &spec);
        let b = random_op(&mut rng, shape, &spec);
        let ok = match (op_compose(&a, &b), a.order(), b.order()) {
            (Ok(ab), Some(m), Some(m2)) => {
                ab.in_filtration(&(m + m2), a.min_eps().unwrap() + b.min_eps().unwrap())
            }
            (Ok(_), _, _) => true,
            _ => false,
        };
        out.check(
            ok,
            || format!("{}\n{}", a, b),
            || "composite leaves the product filtration".into(),
        );
    }
    out
}

pub fn sigma_multiplicative(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("sigma_multiplicative");
    let mut rng = rng_for(seed, &out.property);
    let shape = FoliationShape::new(1, 1);
    let spec = RandomOpSpec {
        eps_trunc: 3,
        ..Default::default()
    };
    let flat = GeneralizedLaplacian::flat(shape, 3, -12);
    for _ in 0..config.count(30) {
        let a = random_op(&mut rng, shape, &spec);
        let b = random_op(&mut rng, shape, &spec);
        let r = (|| -> Result<bool, crate::opalg::OpError> {
            let st = sigma_conj(&flat, &op_compose(&a, &b)?, 3)?;
            let sa = sigma_conj(&flat, &a, 3)?;
            let sb = sigma_conj(&flat, &b, 3)?;
            // Coefficientwise in t: σ(ab)_j = Σ_{i+k=j} σ(a)_i σ(b)_k.
            let zero = OpSeries::zero(shape, 3);
            let at = |p: &crate::opalg::TPoly, j: usize| {
                p.coeffs.get(j).cloned().unwrap_or_else(|| zero.clone())
            };
            for j in 0..=3 {
                let mut rhs = zero.clone();
                for i in 0..=j {
                    rhs = rhs.add(&op_compose(&at(&sa, i), &at(&sb, j - i))?)?;
                }
                if !at(&st, j).agrees_with(&rhs) {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        out.check(
            r == Ok(true),
            || format!("{}\n{}", a, b),
            || format!("{:?}", r),
        );
    }
    out
}

/// t = random prefactor plus ε^n (top)_R (ρ^{-Q/4} + random)_L, with even left words.
fn random_trace_class(rng: &mut impl Rng, shape: FoliationShape, trunc: u32) -> TraceClassElement {
    let q = shape.q();
    let n = shape.n() as u32;
    let spec = RandomOpSpec {
        symbol: RandomSpec {
            top: -q + 1,
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
    let mut pre = random_op(rng, shape, &spec);
    let a = random_symbol(rng, shape, &spec.symbol)
        .add(&rho_power(shape, -q, -q - 3))
        .unwrap();
    let mut top = OpSeries::zero(shape, trunc);
    top.insert(
        OpKey {
            eps: n,
            right: CliffordWord::top(shape.n()),
            ..OpKey::plain(shape.n())
        },
        a,
    );
    pre = pre.add(&top).unwrap();
    TraceClassElement::new(pre)
}

pub fn graded_trace_property(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("graded_trace_property");
    let mut rng = rng_for(seed, &out.property);
    let shape = FoliationShape::new(1, 0);
    let trunc = 2 * shape.n() as u32 + 4;
    let dspec = RandomOpSpec {
        symbol: RandomSpec {
            top: 1,
            depth: 3,
            words: true,
            even_words: true,
            ..RandomSpec::default()
        },
        terms: 3,
        max_deriv: 1,
        max_eps: 1,
        right_words: true,
        eps_trunc: trunc,
    };
    let mut nonzero = 0;
    for _ in 0..config.count(30) {
        let t = random_trace_class(&mut rng, shape, trunc);
        let d = random_op(&mut rng, shape, &dspec);
        if tr_s(&t).is_ok_and(|x| !x.is_zero()) {
            nonzero += 1;
        }
        let r = (|| -> Result<ExactScalar, crate::opalg::OpError> {
            let c = match config.fault {
                Some(Fault::AntiCommutator) => TraceClassElement::new(
                    t.left_mul(&d)?
                        .prefactor
                        .add(&t.right_mul(&d, -40)?.prefactor)?,
                ),
                None => t.commutator_with(&d, -40)?,
            };
            tr_s(&c)
        })();
        match r {
            Ok(x) => out.check(
                x.is_zero(),
                || format!("{}\n{}", t.prefactor, d),
                || format!("Tr_s([d,t]) = {}", x),
            ),
            Err(e) => out.error(|| format!("{}\n{}", t.prefactor, d), e),
        }
    }
    out.check(
        nonzero > 0,
        || "all samples".into(),
        || "every Tr_s(t) vanished; samples are vacuous".into(),
    );
    out
}

fn random_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-5i64..=5)),
        BigInt::from(rng.gen_range(1i64..=4)),
    )
}

/// εR₀ as an ε-series matrix.
pub fn eps_matrix(r0: &[Vec<BigRational>], n: usize) -> EpsMatrix {
    r0.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let mut c = vec![ExactScalar::zero(); n + 1];
                    if n >= 1 {
                        c[1] = ExactScalar::from_rational(x.clone());
                    }
                    EpsSeries { coeffs: c }
                })
                .collect()
        })
        .collect()
}

pub fn mehler_todd(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("mehler_todd");
    let mut rng = rng_for(seed, &out.property);
    let n = 6;
    let sizes = [1, 2, 3, 1, 2, 1, 2, 3, 1, 2];
    let cases: Vec<Vec<Vec<BigRational>>> = (0..config.count(10))
        .map(|i| {
            let d = sizes[i % sizes.len()];
            (0..d)
                .map(|_| (0..d).map(|_| random_rational(&mut rng)).collect())
                .collect()
        })
        .collect();
    let results: Vec<_> = std::thread::scope(|sc| {
        let handles: Vec<_> = cases
            .iter()
            .map(|r0| {
                sc.spawn(move || {
                    let r = eps_matrix(r0, n);
                    (mehler_bracket(&r, n), todd_series(&r, n))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker"))
            .collect()
    });
    for (r0, res) in cases.iter().zip(results) {
        let input = || {
            format!(
                "R0 = {:?}",
                r0.iter()
                    .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            )
        };
        match res {
            (Ok(m), Ok(t)) => out.check(m == t, input, || format!("mehler {:?}\ntodd {:?}", m, t)),
            (Err(e), _) | (_, Err(e)) => out.error(input, e),
        }
    }
    out
}

pub fn bracket_examples(_seed: u64, _config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("bracket_examples");
    let i = ExactScalar::i();
    let b0 = bracket(&[0, 0], &[0, 0]);
    out.check(
        b0.coeff.is_one() && b0.pow == 0,
        || "<exp Delta>".into(),
        || format!("{:?}", b0),
    );
    for a in 0..2 {
        for b in 0..2 {
            let mut x = vec![0, 0];
            let mut y = vec![0, 0];
            x[a] = 1;
            y[b] = 1;
            let m = bracket(&x, &y);
            let ok = if a == b {
                m.coeff == i && m.pow == -1
            } else {
                m.coeff.is_zero()
            };
            out.check(
                ok,
                || format!("<d_x{} d_p{} exp Delta>", a + 1, b + 1),
                || format!("{:?}", m),
            );
        }
    }
    // ⟨∂_{x^i}∂_{x^j}∂_{p_k}∂_{p_l}⟩ = (i/ε)²(δ_i^kδ_j^l + δ_i^lδ_j^k).
    for (xi, xj) in [(0usize, 0usize), (0, 1), (1, 1)] {
        for (pk, pl) in [(0usize, 0usize), (0, 1), (1, 1)] {
            let mut x = vec![0u32; 2];
            let mut y = vec![0u32; 2];
            x[xi] += 1;
            x[xj] += 1;
            y[pk] += 1;
            y[pl] += 1;
            let delta = |a: usize, b: usize| (a == b) as i64;
            let want = delta(xi, pk) * delta(xj, pl) + delta(xi, pl) * delta(xj, pk);
            let m = bracket(&x, &y);
            let ok = m.coeff == ExactScalar::from_int(-want) && (want == 0 || m.pow == -2);
            out.check(
                ok,
                || format!("x ({},{}) p ({},{})", xi + 1, xj + 1, pk + 1, pl + 1),
                || format!("{:?}", m),
            );
        }
    }
    out
}

/// Random s ∈ 𝒟^0_1 with at most first derivatives.
pub fn random_perturbation(
    rng: &mut impl Rng,
    shape: FoliationShape,
    trunc: u32,
    floor: i64,
) -> OpSeries {
    let n = shape.n();
    let mut s = OpSeries::zero(shape, trunc);
    for _ in 0..rng.gen_range(1..=3) {
        let key = OpKey {
            eps: rng.gen_range(1..=2),
            right: CliffordWord::ONE,
            dx: (0..n).map(|_| rng.gen_range(0..=1)).collect(),
            dp: (0..n).map(|_| rng.gen_range(0..=1)).collect(),
        };
        let top = (-key.weight2(&shape)).div_euclid(2);
        let spec = RandomSpec {
            top,
            depth: (top - floor).max(0),
            max_terms: 2,
            ..RandomSpec::default()
        };
        s.insert(key, random_symbol(rng, shape, &spec));
    }
    s
}

pub fn duhamel_agreement(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("duhamel_agreement");
    let mut rng = rng_for(seed, &out.property);
    let shape = FoliationShape::new(1, 0);
    let floor = -6;
    for _ in 0..config.count(20) {
        let trunc = 2;
        let s = random_perturbation(&mut rng, shape, trunc, floor);
        let flat = GeneralizedLaplacian::flat(shape, trunc, floor);
        let r = (|| -> Result<(bool, bool), crate::opalg::OpError> {
            let second = duhamel_exp(&flat, &s, floor)?;
            let first = duhamel_first_form(&flat, &s, floor)?;
            let full = second.expand(floor)?;
            let forms = first.agrees_with(&full);
            let direct = exp_series(&flat.series().add(&s)?, floor)?;
            let order1 = full.eps_component(1).agrees_with(&direct.eps_component(1));
            Ok((forms, order1))
        })();
        match r {
            Ok((forms, order1)) => out.check(
                forms && order1,
                || format!("{}", s),
                || format!("forms agree {} eps^1 oracle {}", forms, order1),
            ),
            Err(e) => out.error(|| format!("{}", s), e),
        }
    }
    out
}

pub fn dirac_squares(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("dirac_squares");
    let mut rng = rng_for(seed, &out.property);
    let shape = FoliationShape::new(2, 0);
    for affine in [false, true] {
        for _ in 0..config.count(10) {
            let desc = random_descriptor(&mut rng, shape, affine);
            let ok = dirac_square(&desc, shape, 3, -12).map(|sq| is_generalized_laplacian(&sq));
            out.check(
                ok == Ok(true),
                || format!("{:?}", desc),
                || format!("{:?}", ok),
            );
        }
    }
    out
}

pub fn lichnerowicz_match(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("lichnerowicz_match");
    let mut rng = rng_for(seed, &out.property);
    let shape = FoliationShape::new(2, 0);
    let mut nonflat = 0;
    for _ in 0..config.count(10) {
        let g = random_christoffel(&mut rng, shape.n());
        let desc = DiracDescriptor::Affine {
            christoffel: g.clone(),
            s: vec![],
            bar: vec![],
        };
        let r = (|| -> Result<bool, crate::opalg::OpError> {
            let sq = dirac_square(&desc, shape, 3, -12)?;
            let r = curvature_tensor(&g)?;
            if r.iter().flatten().flatten().flatten().any(|f| !f.is_zero()) {
                nonflat += 1;
            }
            Ok(dirac::curvature_from_square(&sq) == r
                && dirac::clifford_curvature_from_square(&sq) == r)
        })();
        out.check(r == Ok(true), || format!("{:?}", g), || format!("{:?}", r));
    }
    out.check(
        nonflat > 0,
        || "all samples".into(),
        || "every sample was flat".into(),
    );
    out
}

/// Tr_s(a_L ε^n (top)_R exp(Δ + εp_L·∂_p)) = wres(a) for a = σ₀ ⋆ [L, σ₁].
pub fn trace_to_residue(seed: u64, config: &Config) -> PropertyResult {
    let mut out = PropertyResult::new("trace_to_residue");
    let mut rng = rng_for(seed, &out.property);
    let mut nonzero = 0;
    for (i, shape) in [FoliationShape::new(1, 0), FoliationShape::new(1, 1)]
        .into_iter()
        .enumerate()
    {
        let n = shape.n();
        let q = shape.q();
        let trunc = n as u32 + 2;
        let floor = -q - 3;
        let flat = GeneralizedLaplacian::flat(shape, trunc, floor);
        let mut pdp = OpSeries::zero(shape, trunc);
        for j in 0..n {
            let mut dp = vec![0; n];
            dp[j] = 1;
            pdp.insert(
                OpKey {
                    eps: 1,
                    right: CliffordWord::ONE,
                    dx: vec![0; n],
                    dp,
                },
                p(shape, j, floor),
            );
        }
        let heat = match duhamel_exp(&flat, &pdp, floor) {
            Ok(h) => h,
            Err(e) => {
                out.error(|| format!("shape {}", shape), e);
                continue;
            }
        };
        let count = config.count(20) / 2 + i % 2;
        for _ in 0..count.max(1) {
            let s0 = random_symbol(
                &mut rng,
                shape,
                &RandomSpec {
                    top: 0,
                    depth: q + 2,
                    ..RandomSpec::default()
                },
            );
            let s1 = random_symbol(
                &mut rng,
                shape,
                &RandomSpec {
                    top: -1,
                    depth: q + 2,
                    ..RandomSpec::default()
                },
            );
            let r = (|| -> Result<(ExactScalar, ExactScalar), crate::opalg::OpError> {
                let a = s0.star(&log_commutator(&s1)?)?;
                let mut pre = OpSeries::zero(shape, trunc);
                pre.insert(
                    OpKey {
                        eps: n as u32,
                        right: CliffordWord::top(n),
                        ..OpKey::plain(n)
                    },
                    a.clone(),
                );
                let t = TraceClassElement::new(op_compose(&pre, &heat.prefactor)?);
                Ok((tr_s(&t)?, wres(&a)?))
            })();
            match r {
                Ok((x, y)) => {
                    if !y.is_zero() {
                        nonzero += 1;
                    }
                    out.check(
                        x == y,
                        || show_all(&[&s0, &s1]),
                        || format!("Tr_s = {}, wres = {}", x, y),
                    );
                }
                Err(e) => out.error(|| show_all(&[&s0, &s1]), e),
            }
        }
    }
    out.check(
        nonzero > 0,
        || "all samples".into(),
        || "every wres vanished; samples are vacuous".into(),
    );
    out
}
