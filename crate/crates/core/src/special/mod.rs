//! Scalar special functions.

pub mod cfunc;
pub mod gamma;
pub mod hyp2f1;
pub mod jacobi;

pub use cfunc::{c_function, inverse_c_growth};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use hyp2f1::gauss_2f1;
pub use jacobi::{jacobi_phi, psi_constant_character, psi_rank1, JacobiParams};
