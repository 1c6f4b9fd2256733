//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use hcalc::io::{canonicalize, parse_symbol, serialize_symbol};
use hcalc::opalg::{todd_series, EpsSeries};
use hcalc::scalar::ExactScalar;
use hcalc::symbols::random::{random_symbol, RandomSpec};
use hcalc::symbols::FoliationShape;
use hcalc::verify::{self, eps_matrix, Config, PropertyResult};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240607;

type Outcome = Result<String, String>;

fn props(results: Vec<PropertyResult>) -> Outcome {
    let cases: usize = results.iter().map(|r| r.cases).sum();
    let bad: Vec<String> = results
        .iter()
        .flat_map(|r| r.failures.iter().map(|f| format!("{}: {}", f.id, f.detail)))
        .collect();
    if bad.is_empty() {
        Ok(format!("{} cases", cases))
    } else {
        Err(format!(
            "{} of {} cases failed; first: {}",
            bad.len(),
            cases,
            bad[0]
        ))
    }
}

fn run(f: fn(u64, &Config) -> PropertyResult) -> PropertyResult {
    f(SEED, &Config::default())
}

fn moments() -> Outcome {
    let r = run(verify::moment_oracle);
    let worst = r
        .discrepancies
        .iter()
        .map(|d| d.abs_diff)
        .fold(0.0, f64::max);
    props(vec![r]).map(|s| format!("{}, max |exact - cubature| = {:.1e} (tol 1e-6)", s, worst))
}

fn mehler() -> Outcome {
    let first = props(vec![run(verify::mehler_todd)])?;
    let one = BigRational::from_integer(BigInt::from(1));
    let t = todd_series(&eps_matrix(&[vec![one]], 6), 6).map_err(|e| e.to_string())?;
    let want = [
        ExactScalar::from_int(1),
        ExactScalar::ratio(-1, 2),
        ExactScalar::ratio(1, 12),
    ];
    let EpsSeries { coeffs } = t;
    if coeffs[..3] != want {
        return Err(format!("1x1 Todd coefficients {:?}", &coeffs[..3]));
    }
    Ok(format!("{}, 1x1 Todd reads 1, -1/2, 1/12", first))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn hcalc(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hcalc"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    ))
}

fn golden(args: &[&str], file: &str) -> Result<(), String> {
    let (code, out) = hcalc(args)?;
    let want = std::fs::read_to_string(data(file)).map_err(|e| e.to_string())?;
    if code != 0 || out != want {
        return Err(format!(
            "hcalc {} exited {} with\n{}",
            args.join(" "),
            code,
            out
        ));
    }
    Ok(())
}

fn cli() -> Outcome {
    let p = |f: &str| data(f).to_string_lossy().into_owned();
    let (rho, ra, rb, grp) = (
        p("rho_minus_quarter.json"),
        p("radul_a.json"),
        p("radul_b.json"),
        p("translation_group.json"),
    );
    golden(&["residue", &rho], "residue.golden")?;
    golden(
        &["mehler", "--R", "[[1]]", "--eps-order", "4"],
        "mehler.golden",
    )?;
    golden(&["radul", &ra, &rb, "--group", &grp], "radul.golden")?;
    golden(&["star", &rho, &rho], "star.golden")?;

    let text =
        std::fs::read_to_string(data("rho_minus_quarter.json")).map_err(|e| e.to_string())?;
    if canonicalize(&text).map_err(|e| e.to_string())? != text.trim_end() {
        return Err("fixture document does not round-trip".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let spec = RandomSpec {
        words: true,
        ..RandomSpec::default()
    };
    for i in 0..100 {
        let shape = [
            FoliationShape::new(1, 0),
            FoliationShape::new(1, 1),
            FoliationShape::new(2, 1),
        ][i % 3];
        let s = serialize_symbol(&random_symbol(&mut rng, shape, &spec));
        let back = parse_symbol(&s).map_err(|e| e.to_string())?;
        if serialize_symbol(&back) != s {
            return Err(format!("random document {} changed under round-trip", i));
        }
    }

    let report = |seed: &str| -> Result<String, String> {
        let (code, out) = hcalc(&["verify", "--suite", "crossed", "--seed", seed])?;
        if code != 0 {
            return Err(format!("verify exited {}", code));
        }
        let mut v: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        v.as_object_mut().unwrap().remove("wall_time_ms");
        Ok(v.to_string())
    };
    if report("7")? != report("7")? {
        return Err("verify reports differ under a fixed seed".into());
    }
    let (code, _) = hcalc(&["residue", &grp])?;
    if code != 2 {
        return Err(format!("malformed document exited {} instead of 2", code));
    }
    Ok("4 golden outputs, 100 round-trips, deterministic reports, exit code 2 on bad input".into())
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("star associativity", || {
            props(vec![run(verify::star_associativity)])
        }),
        ("residue trace property", || {
            props(vec![run(verify::residue_trace_property)])
        }),
        ("sphere-moment oracle", moments),
        ("Mehler/Todd identity", mehler),
        ("contraction brackets", || {
            props(vec![run(verify::bracket_examples)])
        }),
        ("Duhamel forms", || {
            props(vec![run(verify::duhamel_agreement)])
        }),
        ("Dirac squares and Lichnerowicz", || {
            props(vec![
                run(verify::dirac_squares),
                run(verify::lichnerowicz_match),
            ])
        }),
        ("graded trace", || {
            props(vec![run(verify::graded_trace_property)])
        }),
        ("Radul cocycle identities", || {
            props(vec![
                run(verify::radul_cocycle_identities),
                run(verify::radul_locality),
            ])
        }),
        ("flat index identity", || {
            let k = verify::kappa().map_err(|e| e.to_string())?;
            props(vec![
                run(verify::flat_index_identity),
                run(verify::index_consistency),
            ])
            .map(|s| format!("{}, kappa = {}", s, k))
        }),
        ("localized trace", || {
            props(vec![run(verify::localized_trace_property)])
        }),
        ("CLI", cli),
    ];
    let handles: Vec<_> = criteria
        .into_iter()
        .enumerate()
        .map(|(i, (name, f))| {
            std::thread::Builder::new()
                .stack_size(64 << 20)
                .spawn(move || {
                    let t = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (i + 1, name, r, t.elapsed())
                })
                .unwrap()
        })
        .collect();
    let mut failed = 0;
    for h in handles {
        let (i, name, r, dt) = h.join().unwrap();
        match r {
            Ok(msg) => println!("PASS {:>2} {}: {} ({:.1?})", i, name, msg, dt),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {}: {} ({:.1?})", i, name, msg, dt);
            }
        }
    }
    if failed > 0 {
        eprintln!("{} acceptance criteria failed", failed);
        std::process::exit(1);
    }
}
