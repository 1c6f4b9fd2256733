use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hcalc::crossed::{
    fundamental_pairing_1d, radul_cocycle, toeplitz_index_oracle_1d, CrossedSymbol, IsometryElement,
};
use hcalc::io::{
    group_elements, parse_crossed, parse_matrix, parse_symbol, serialize_symbol, FormatError,
};
use hcalc::opalg::{
    curvature_tensor, dirac, dirac_square, duhamel_exp, is_generalized_laplacian, mehler_bracket,
    op_compose, todd_series, tr_s, DiracDescriptor, GeneralizedLaplacian, OpKey, OpSeries,
    TraceClassElement,
};
use hcalc::residue::{annulus_oracle, sphere_moment, wres};
use hcalc::scalar::{ExactScalar, FourierFunction};
use hcalc::symbols::builders::p;
use hcalc::symbols::{CliffordWord, FoliationShape, HSymbol};
use hcalc::verify::{eps_matrix, run_suite, Config, Fault};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "hcalc",
    version,
    about = "Exact Heisenberg symbol calculus on foliated tori"
)]
struct Cli {
    /// Also print decimal renderings.
    #[arg(long, global = true)]
    numeric: bool,
    /// Significant digits for --numeric.
    #[arg(long, global = true, default_value_t = 20)]
    digits: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Star product of two symbol documents.
    Star {
        a: PathBuf,
        b: PathBuf,
        /// Drop components below this degree.
        #[arg(long)]
        floor: Option<i64>,
    },
    /// Noncommutative residue of a symbol document.
    Residue { a: PathBuf },
    /// Radul cocycle of two crossed documents.
    Radul {
        a: PathBuf,
        b: PathBuf,
        /// Group file; every element used must lie in the generated group.
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Circle pairing of two order-0 symbols in shape (1,0).
    Pairing { a0: PathBuf, a1: PathBuf },
    /// Toeplitz index of the positive-frequency restriction, by truncated matrices.
    Toeplitz {
        a1: PathBuf,
        #[arg(long, default_value_t = 64)]
        cutoff: usize,
    },
    /// Mehler contraction against the Todd series.
    Mehler {
        /// Matrix literal R₀, e.g. "[[1/2, 0], [0, 1]]"; the series is taken in εR₀.
        #[arg(long = "R")]
        r: String,
        #[arg(long = "eps-order", default_value_t = 4)]
        eps_order: usize,
    },
    /// Square of a Dirac operator: Laplacian check and curvature.
    Dirac {
        #[arg(long, value_parser = parse_shape)]
        shape: FoliationShape,
        /// Constant Christoffel symbols Γ^k_ij as a nested JSON list; de Rham when absent.
        #[arg(long)]
        christoffel: Option<PathBuf>,
        #[arg(long = "eps-order", default_value_t = 3)]
        eps_order: u32,
        #[arg(long, default_value_t = -12)]
        floor: i64,
    },
    /// Graded trace of ε^n (top)_R a_L exp(Δ + ε p·∂_p).
    Trs { a: PathBuf },
    /// Exact sphere moment against adaptive cubature.
    Oracle {
        #[arg(long, value_parser = parse_shape)]
        shape: FoliationShape,
        /// Exponent vector, e.g. 2,0.
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<u32>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Seeded property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplier on case counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Negative control: swap commutators for anticommutators.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn parse_shape(s: &str) -> Result<FoliationShape, String> {
    let (v, h) = s.split_once(',').ok_or("expected v,h")?;
    let v: usize = v.trim().parse().map_err(|e| format!("{}", e))?;
    let h: usize = h.trim().parse().map_err(|e| format!("{}", e))?;
    if v == 0 {
        return Err("v must be at least 1".into());
    }
    Ok(FoliationShape::new(v, h))
}

enum Failure {
    Verify,
    Parse(String),
    Domain(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Parse(e.to_string())
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))
}

fn symbol(path: &Path) -> Result<HSymbol, Failure> {
    parse_symbol(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))
}

fn crossed(path: &Path) -> Result<CrossedSymbol, Failure> {
    parse_crossed(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))
}

fn scalar_line(x: &ExactScalar, numeric: bool, digits: usize) -> String {
    if numeric {
        format!("{}\n≈ {}", x, x.numeric_eval(digits))
    } else {
        x.to_string()
    }
}

fn check_group(a: &CrossedSymbol, group: &[IsometryElement]) -> Result<(), Failure> {
    for g in a.support().keys() {
        if !group.contains(g) {
            return Err(Failure::Domain(format!(
                "element {} is not in the group",
                g
            )));
        }
    }
    Ok(())
}

/// Γ^k_ij as constant functions from a JSON list indexed [k][i][j].
fn christoffel(path: &Path, n: usize) -> Result<Vec<Vec<Vec<FourierFunction>>>, Failure> {
    let raw: Vec<Vec<Vec<serde_json::Value>>> = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))?;
    let bad = || {
        Failure::Parse(format!(
            "{}: expected an {}x{}x{} list of numbers or \"p/q\" strings",
            path.display(),
            n,
            n,
            n
        ))
    };
    if raw.len() != n
        || raw
            .iter()
            .any(|m| m.len() != n || m.iter().any(|r| r.len() != n))
    {
        return Err(bad());
    }
    raw.iter()
        .map(|m| {
            m.iter()
                .map(|r| {
                    r.iter()
                        .map(|v| {
                            let lit = match v {
                                serde_json::Value::Number(x) => x.to_string(),
                                serde_json::Value::String(s) => s.clone(),
                                _ => return Err(bad()),
                            };
                            let q = hcalc::crossed::group::parse_rational(&lit).ok_or_else(bad)?;
                            Ok(FourierFunction::constant(n, ExactScalar::from_rational(q)))
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (numeric, digits) = (cli.numeric, cli.digits);
    match cli.cmd {
        Cmd::Star { a, b, floor } => {
            let (a, b) = (symbol(&a)?, symbol(&b)?);
            let mut ab = a.star(&b).map_err(domain)?;
            if let Some(f) = floor {
                ab = ab.truncate(f);
            }
            println!("{}", serialize_symbol(&ab));
        }
        Cmd::Residue { a } => {
            let r = wres(&symbol(&a)?).map_err(domain)?;
            println!("{}", scalar_line(&r, numeric, digits));
        }
        Cmd::Radul { a, b, group } => {
            let (a, b) = (crossed(&a)?, crossed(&b)?);
            if let Some(g) = group {
                let elems = group_elements(&read(&g)?)?;
                check_group(&a, &elems)?;
                check_group(&b, &elems)?;
            }
            let r = radul_cocycle(&a, &b).map_err(domain)?;
            println!("{}", scalar_line(&r, numeric, digits));
        }
        Cmd::Pairing { a0, a1 } => {
            let r = fundamental_pairing_1d(&symbol(&a0)?, &symbol(&a1)?).map_err(domain)?;
            println!("{}", scalar_line(&r, numeric, digits));
        }
        Cmd::Toeplitz { a1, cutoff } => {
            let r = toeplitz_index_oracle_1d(&symbol(&a1)?, cutoff).map_err(domain)?;
            println!("{}", r);
        }
        Cmd::Mehler { r, eps_order } => {
            let r0 = parse_matrix(&r)?;
            let m = eps_matrix(&r0, eps_order);
            let mb = mehler_bracket(&m, eps_order).map_err(domain)?;
            let td = todd_series(&m, eps_order).map_err(domain)?;
            for (k, c) in mb.coeffs.iter().enumerate() {
                println!("eps^{}: {}", k, scalar_line(c, numeric, digits));
            }
            if mb != td {
                return Err(Failure::Domain(
                    "Mehler contraction differs from the Todd series".into(),
                ));
            }
        }
        Cmd::Dirac {
            shape,
            christoffel: ch,
            eps_order,
            floor,
        } => {
            let desc = match ch {
                Some(path) => DiracDescriptor::Affine {
                    christoffel: christoffel(&path, shape.n())?,
                    s: vec![],
                    bar: vec![],
                },
                None => DiracDescriptor::DeRham { bar: vec![] },
            };
            let sq = dirac_square(&desc, shape, eps_order, floor).map_err(domain)?;
            let mut curv = Vec::new();
            let r = dirac::clifford_curvature_from_square(&sq);
            let expected = match &desc {
                DiracDescriptor::Affine { christoffel, .. } => {
                    Some(curvature_tensor(christoffel).map_err(domain)?)
                }
                _ => None,
            };
            for (k, a) in r.iter().enumerate() {
                for (l, b) in a.iter().enumerate() {
                    for (i, c) in b.iter().enumerate() {
                        for (j, f) in c.iter().enumerate() {
                            if !f.is_zero() {
                                curv.push(json!({ "k": k + 1, "l": l + 1, "i": i + 1, "j": j + 1, "value": f.to_string() }));
                            }
                        }
                    }
                }
            }
            let doc = json!({
                "generalizedLaplacian": is_generalized_laplacian(&sq),
                "curvature": curv,
                "curvatureMatchesConnection": expected.map(|e| e == r),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Cmd::Trs { a } => {
            let a = symbol(&a)?;
            let shape = a.shape();
            let n = shape.n();
            let trunc = n as u32 + 2;
            let floor = a.floor().min(-shape.q() - 1);
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
            let heat = duhamel_exp(&flat, &pdp, floor).map_err(domain)?;
            let mut pre = OpSeries::zero(shape, trunc);
            pre.insert(
                OpKey {
                    eps: n as u32,
                    right: CliffordWord::top(n),
                    ..OpKey::plain(n)
                },
                a,
            );
            let t = TraceClassElement::new(op_compose(&pre, &heat.prefactor).map_err(domain)?);
            let r = tr_s(&t).map_err(domain)?;
            println!("{}", scalar_line(&r, numeric, digits));
        }
        Cmd::Oracle { shape, gamma, tol } => {
            if gamma.len() != shape.n() {
                return Err(Failure::Parse(format!("gamma needs {} entries", shape.n())));
            }
            let exact = sphere_moment(&gamma, &shape);
            let value: f64 = exact
                .numeric_eval(digits.max(17))
                .re
                .parse()
                .unwrap_or(f64::NAN);
            let cub = annulus_oracle(&gamma, &shape, tol).map_err(domain)?;
            let doc = json!({
                "exact": exact.to_string(),
                "numeric": exact.numeric_eval(digits).to_string(),
                "cubature": cub,
                "absDiff": (value - cub).abs(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Cmd::Verify {
            suite,
            seed,
            scale,
            output,
            inject_fault,
        } => {
            let fault = inject_fault.then_some(Fault::AntiCommutator);
            let config = Config { scale, fault };
            let report = run_suite(&suite, seed, &config)
                .ok_or_else(|| Failure::Parse(format!("unknown suite {}", suite)))?;
            let text = report.to_json();
            match output {
                Some(path) => {
                    std::fs::write(&path, text + "\n").map_err(|e| Failure::Parse(e.to_string()))?
                }
                None => println!("{}", text),
            }
            if !report.passed() {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Parse(m)) => {
            eprintln!("parse error: {}", m);
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(3)
        }
    }
}
