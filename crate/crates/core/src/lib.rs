//! Generalized nonlinear coherent states of su(1,1) in the positive discrete
//! series realized on the half-line Calogero–Sutherland model.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod figures;
pub mod measure;
pub mod observables;
pub mod position;
pub mod quad;
pub mod specfun;
pub mod states;
pub mod summation;
pub mod verify;

pub use error::{GncsError, Result};
