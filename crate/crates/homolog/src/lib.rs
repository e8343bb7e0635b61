//! Kernels, cokernels, exactness and spectral sequences relative to a null
//! ideal, computed on finite instances.
//!
//! The central abstraction is [`cat::Semiexact`]: a category with an assigned
//! ideal of null morphisms, kernels and cokernels taken relative to that
//! ideal. Instances cover pairs of sets, pointed sets, pairs of groups,
//! lattices-and-connections, actions, and their quotients modulo homotopy-like
//! congruences. On top of the core sit normal-subobject lattices, subquotient
//! calculus, exact couples and the spectral sequences they generate.

pub mod act;
pub mod actprime;
pub mod cat;
pub mod couple;
pub mod dot;
pub mod filtered;
pub mod finite;
pub mod gp2;
pub mod json;
pub mod ltc;
pub mod ngp;
pub mod nsb;
pub mod set2;
pub mod setpt;
pub mod spectral;
pub mod subquotient;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HomologError {
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An operation was asked of data outside its domain of definition.
    #[error("operation error: {0}")]
    Operation(String),
}
