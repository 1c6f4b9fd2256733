//! Wodzicki residue of Heisenberg symbols.

pub mod cubature;
pub mod moments;
pub mod wres;

pub use cubature::{annulus_oracle, gaussian_factor_1d, tanh_sinh};
pub use moments::{gaussian_moment, sphere_moment};
pub use wres::{wres, wres_with};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResidueError {
    #[error("degree {needed} component unknown: symbol floor is {floor}")]
    TruncationTooShallow { needed: i64, floor: i64 },
    #[error("residue of a log-carrying term is not supported")]
    LogResidueUnsupported,
    #[error("cubature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    CubatureNoConvergence { tol: f64, estimate: f64 },
    #[error("cubature oracle supports n <= 3, got {0}")]
    DimensionTooLarge(usize),
}
