//! The bimodule algebra 𝒟 of operators on symbols, heat expansions,
//! contractions, the graded trace and Dirac operators.

pub mod bracket;
pub mod dirac;
pub mod heat;
pub mod random;
pub mod series;
pub mod todd;

pub use bracket::{
    bracket, contract, double_bracket, tr_s, tr_s_localized, EpsMonomial, SymbolSeries,
};
pub use dirac::{curvature_tensor, dirac_operator, dirac_square, DiracDescriptor};
pub use heat::{duhamel_exp, duhamel_first_form, exp_series, sigma_conj, TPoly, TraceClassElement};
pub use series::{
    flat_laplacian, graded_commutator, is_generalized_laplacian, op_compose, GeneralizedLaplacian,
    OpKey, OpSeries, OpTerm,
};
pub use todd::{mehler_bracket, mehler_vanishing, todd_series, EpsMatrix, EpsSeries};

use thiserror::Error;

use crate::residue::ResidueError;
use crate::symbols::SymbolError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpError {
    #[error("shape mismatch")]
    ShapeMismatch,
    #[error("perturbation is not in D^0_1")]
    NotInFiltration,
    #[error("not a generalized Laplacian")]
    NotGeneralizedLaplacian,
    #[error("invalid Dirac descriptor: {0}")]
    DescriptorInvalid(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("contraction left p-dependent terms")]
    MehlerNotScalar,
    #[error("right Clifford words present where only derivatives are contracted")]
    RightWordsPresent,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

#[cfg(test)]
mod tests;
