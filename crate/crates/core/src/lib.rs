//! Product formulas and (signed) hypergroup convolutions on `C_q × ℝ`
//! attached to BC-type hypergeometric functions.

// `!(x > a)` is used on purpose so that NaN lands on the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chamber;
pub mod checks;
pub mod convolution;
pub mod error;
pub mod haar;
pub mod harness;
pub mod kernel;
pub mod linalg;
pub mod measure;
pub mod parallel;
pub mod quadrature;
pub mod sampling;
pub mod special;
pub mod stats;

pub use chamber::{ChamberPoint, HypergroupElement, Multiplicity};
pub use error::{Error, Result};
pub use parallel::ExecPolicy;
