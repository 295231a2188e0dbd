//! Exactly solvable one-dimensional Schrödinger operators.

// `!(a < b)` is used deliberately so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod equations;
pub mod error;
pub mod exactalg;
pub mod liouville;
pub mod output;
pub mod schwarz;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
