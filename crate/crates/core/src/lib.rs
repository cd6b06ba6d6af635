//! Mandelstam–Tamm and stronger quantum speed limits for pure states
//! evolving under time-independent Hamiltonians.

// `!(x >= tol)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod geodesic;
pub mod models;
pub mod optimizer;
pub mod ortho;
pub mod quantum;

pub use error::{QslError, Result};
