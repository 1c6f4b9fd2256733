//! JSON interchange for symbols, crossed symbols and group files.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crossed::group::parse_rational;
use crate::crossed::{generate_group, CrossedError, CrossedSymbol, ElementSpec, IsometryElement};
use crate::scalar::{Cyclo, ExactScalar, FourierFunction};
use crate::symbols::{CliffordWord, FoliationShape, HSymbol, Monomial};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("{0}")]
    Json(String),
    #[error("unsupported formatVersion {0}")]
    Version(u32),
    #[error("terms[{index}]: {msg}")]
    Term { index: usize, msg: String },
    #[error("{0}")]
    Header(String),
    #[error(transparent)]
    Group(#[from] CrossedError),
}

/// serde_json messages already carry "line L column C".
impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e.to_string())
    }
}

/// One exact coefficient c · π^{a/2} · Γ(1/4)^b of a Fourier mode, with
/// c = rationalCoeff · Σ_j v_j ζ_N^j and `cyclotomic` the comma-separated v.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CoeffRecord {
    pub k: Vec<i64>,
    pub cyclotomic: String,
    pub pi_half_exp: i32,
    pub gamma_quarter_exp: i32,
    pub rational_coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct TermRecord {
    pub degree: i64,
    pub fourier_coeffs: Vec<CoeffRecord>,
    pub gamma: Vec<u32>,
    pub rho_quarter: i64,
    pub log_pow: u8,
    /// One-based.
    pub psi_set: Vec<usize>,
    pub psi_bar_set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SymbolDocument {
    pub format_version: u32,
    pub shape: [usize; 2],
    pub modulus: u32,
    pub top: i64,
    pub floor: i64,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub shape: [usize; 2],
    pub generators: Vec<ElementSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossedEntry {
    pub element: ElementSpec,
    pub symbol: SymbolDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CrossedDocument {
    pub format_version: u32,
    pub entries: Vec<CrossedEntry>,
}

fn rat_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        r.to_string()
    }
}

fn words(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn common_modulus(a: &HSymbol) -> u32 {
    let mut m = 8u32;
    for (_, _, f) in a.iter() {
        for c in f.coeffs().values() {
            m = m.lcm(&c.modulus());
        }
    }
    m
}

pub fn symbol_to_document(a: &HSymbol) -> SymbolDocument {
    let shape = a.shape();
    let modulus = common_modulus(a);
    let mut terms = Vec::new();
    for (degree, key, f) in a.iter() {
        let mut fourier_coeffs = Vec::new();
        for (k, c) in f.coeffs() {
            for (&(pi_half_exp, gamma_quarter_exp), z) in c.lift(modulus).terms() {
                let (v, scale) = z.primitive_parts();
                let cyclotomic = v
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                fourier_coeffs.push(CoeffRecord {
                    k: k.clone(),
                    cyclotomic,
                    pi_half_exp,
                    gamma_quarter_exp,
                    rational_coeff: rat_string(&scale),
                });
            }
        }
        terms.push(TermRecord {
            degree,
            fourier_coeffs,
            gamma: key.mono.gamma.clone(),
            rho_quarter: key.mono.rho_q,
            log_pow: key.mono.log_pow,
            psi_set: words(key.word.psi),
            psi_bar_set: words(key.word.psibar),
        });
    }
    SymbolDocument {
        format_version: FORMAT_VERSION,
        shape: [shape.v, shape.h],
        modulus,
        top: a.top(),
        floor: a.floor(),
        terms,
    }
}

fn mask(set: &[usize], n: usize) -> Result<u32, String> {
    let mut m = 0u32;
    for &i in set {
        if i == 0 || i > n {
            return Err(format!("Clifford index {} out of range 1..={}", i, n));
        }
        if m >> (i - 1) & 1 == 1 {
            return Err(format!("Clifford index {} repeated", i));
        }
        m |= 1 << (i - 1);
    }
    Ok(m)
}

fn coeff_from_record(r: &CoeffRecord, modulus: u32) -> Result<ExactScalar, String> {
    let scale = parse_rational(&r.rational_coeff)
        .ok_or_else(|| format!("bad rationalCoeff {:?}", r.rational_coeff))?;
    let v: Vec<BigRational> = r
        .cyclotomic
        .split(',')
        .map(|s| s.trim().parse::<BigInt>().map(BigRational::from_integer))
        .collect::<Result<_, _>>()
        .map_err(|_| format!("bad cyclotomic vector {:?}", r.cyclotomic))?;
    let c = Cyclo::from_coeffs(modulus, &v).scale(&scale);
    Ok(ExactScalar::monomial(c, r.pi_half_exp, r.gamma_quarter_exp))
}

pub fn document_to_symbol(doc: &SymbolDocument) -> Result<HSymbol, FormatError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(FormatError::Version(doc.format_version));
    }
    let [v, h] = doc.shape;
    if v == 0 || v + h > 8 {
        return Err(FormatError::Header(format!(
            "unsupported shape ({},{})",
            v, h
        )));
    }
    if doc.modulus == 0 || doc.modulus % 8 != 0 {
        return Err(FormatError::Header(format!(
            "modulus {} is not a positive multiple of 8",
            doc.modulus
        )));
    }
    if doc.floor > doc.top {
        return Err(FormatError::Header(format!(
            "floor {} above top {}",
            doc.floor, doc.top
        )));
    }
    let shape = FoliationShape::new(v, h);
    let n = shape.n();
    let mut a = HSymbol::zero(shape, doc.top, doc.floor);
    for (index, t) in doc.terms.iter().enumerate() {
        let err = |msg: String| FormatError::Term { index, msg };
        if t.gamma.len() != n {
            return Err(err(format!(
                "gamma has length {}, expected {}",
                t.gamma.len(),
                n
            )));
        }
        let mono = Monomial {
            gamma: t.gamma.clone(),
            rho_q: t.rho_quarter,
            log_pow: t.log_pow,
        };
        if t.log_pow > 1 {
            return Err(err("logPow must be 0 or 1".into()));
        }
        if !mono.is_canonical(&shape) {
            return Err(err("gamma is not in canonical form".into()));
        }
        let deg = mono.degree(&shape);
        if deg != t.degree {
            return Err(err(format!(
                "degree field {} disagrees with <gamma> + rhoQuarter = {}",
                t.degree, deg
            )));
        }
        if deg > doc.top {
            return Err(err(format!("degree {} above top {}", deg, doc.top)));
        }
        let word = CliffordWord::new(
            mask(&t.psi_set, n).map_err(err)?,
            mask(&t.psi_bar_set, n).map_err(err)?,
        );
        let mut f = FourierFunction::zero(n);
        for c in &t.fourier_coeffs {
            if c.k.len() != n {
                return Err(err(format!(
                    "frequency vector has length {}, expected {}",
                    c.k.len(),
                    n
                )));
            }
            f.add_term(c.k.clone(), coeff_from_record(c, doc.modulus).map_err(err)?);
        }
        a.add_term(f, mono, word);
    }
    Ok(a)
}

pub fn parse_symbol(text: &str) -> Result<HSymbol, FormatError> {
    let doc: SymbolDocument = serde_json::from_str(text)?;
    document_to_symbol(&doc)
}

pub fn serialize_symbol(a: &HSymbol) -> String {
    serde_json::to_string_pretty(&symbol_to_document(a)).expect("documents always serialize")
}

/// Canonical re-serialization of a document text.
pub fn canonicalize(text: &str) -> Result<String, FormatError> {
    Ok(serialize_symbol(&parse_symbol(text)?))
}

pub fn parse_group(text: &str) -> Result<(FoliationShape, Vec<IsometryElement>), FormatError> {
    let g: GroupFile = serde_json::from_str(text)?;
    let [v, h] = g.shape;
    if v == 0 {
        return Err(FormatError::Header("group shape needs v >= 1".into()));
    }
    let shape = FoliationShape::new(v, h);
    let gens = g
        .generators
        .iter()
        .map(|e| e.build(&shape))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((shape, gens))
}

/// All elements of the group generated by the file's generators.
pub fn group_elements(text: &str) -> Result<Vec<IsometryElement>, FormatError> {
    let (shape, gens) = parse_group(text)?;
    Ok(generate_group(shape.n(), &gens))
}

pub fn parse_crossed(text: &str) -> Result<CrossedSymbol, FormatError> {
    let doc: CrossedDocument = serde_json::from_str(text)?;
    if doc.format_version != FORMAT_VERSION {
        return Err(FormatError::Version(doc.format_version));
    }
    let mut out: Option<CrossedSymbol> = None;
    for e in &doc.entries {
        let a = document_to_symbol(&e.symbol)?;
        let g = e.element.build(&a.shape())?;
        let acc = out.get_or_insert_with(|| CrossedSymbol::zero(a.shape()));
        if acc.shape() != a.shape() {
            return Err(FormatError::Header("entries have different shapes".into()));
        }
        acc.insert(g, a);
    }
    out.ok_or_else(|| FormatError::Header("crossed document has no entries".into()))
}

pub fn serialize_crossed(a: &CrossedSymbol) -> String {
    let entries = a
        .support()
        .iter()
        .map(|(g, s)| CrossedEntry {
            element: ElementSpec::from_element(g),
            symbol: symbol_to_document(s),
        })
        .collect();
    serde_json::to_string_pretty(&CrossedDocument {
        format_version: FORMAT_VERSION,
        entries,
    })
    .expect("documents always serialize")
}

/// Parses a matrix literal such as "[[1/2, 0], [0, -3]]".
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<BigRational>>, FormatError> {
    let rows: Vec<Vec<serde_json::Value>> = serde_json::from_str(text)?;
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for row in rows {
        if row.len() != n {
            return Err(FormatError::Header("matrix must be square".into()));
        }
        let mut r = Vec::with_capacity(n);
        for v in row {
            let s = match v {
                serde_json::Value::Number(x) => x.to_string(),
                serde_json::Value::String(s) => s,
                other => return Err(FormatError::Header(format!("bad matrix entry {}", other))),
            };
            r.push(
                parse_rational(&s)
                    .ok_or_else(|| FormatError::Header(format!("bad matrix entry {:?}", s)))?,
            );
        }
        out.push(r);
    }
    if n == 0 {
        return Err(FormatError::Header("empty matrix".into()));
    }
    Ok(out)
}

/// Zero for an empty document body; kept for symmetry with the zero symbol.
pub fn zero_document(shape: FoliationShape, top: i64, floor: i64) -> SymbolDocument {
    symbol_to_document(&HSymbol::zero(shape, top, floor))
}
