//! The algebra of formal Heisenberg symbols on flat foliated tori.

pub mod builders;
pub mod clifford;
pub mod elliptic;
pub mod log_commutator;
pub mod monomial;
pub mod random;
pub mod shape;
pub mod symbol;

pub use builders::{build, BuilderKind};
pub use clifford::{clifford_mul, clifford_traces, CliffordWord, Generator, WordSum};
pub use elliptic::{is_heisenberg_elliptic, leading_inverse, parametrix};
pub use log_commutator::{log_commutator, log_symbol};
pub use monomial::{MonoPoly, Monomial};
pub use shape::FoliationShape;
pub use symbol::{const_term, HSymbol, HSymbolTerm, TermKey};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("symbols live on different foliation shapes")]
    ShapeMismatch,
    #[error("index {index} out of range 1..={n}")]
    BadIndex { index: usize, n: usize },
    #[error("floor {floor} above top {top}")]
    BadTruncation { top: i64, floor: i64 },
    #[error("term of degree {degree} above declared top {top}")]
    DegreeAboveTop { degree: i64, top: i64 },
    #[error("leading component is not a single invertible scalar-type term")]
    UnsupportedLeading,
    #[error("symbol is not Heisenberg elliptic")]
    NotElliptic,
    #[error("symbol carries a log factor where a classical one is required")]
    NotClassical,
    #[error("symbol is not homogeneous of degree 0")]
    NotDegreeZero,
}
