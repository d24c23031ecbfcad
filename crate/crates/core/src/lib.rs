//! Coherence decompositions and trade-off relations for three-qubit states,
//! with the two adiabatic spin models (pairwise Ising and three-body) used to
//! generate them.

pub mod error;
pub mod coherence;
pub mod adiabatic;
pub mod models;
pub mod perturbation;
pub mod qmat;
pub mod states;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
