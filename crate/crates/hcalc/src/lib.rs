//! Exact symbolic calculus of Heisenberg pseudodifferential symbols on flat
//! foliated tori.

pub mod crossed;
pub mod io;
pub mod opalg;
pub mod residue;
pub mod scalar;
pub mod symbols;
pub mod verify;
