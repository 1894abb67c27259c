//! Graded Clifford algebras, the supersymmetric oscillator in a truncated
//! Hermite basis, and numerical checks of the analytic steps in real graded
//! Bott periodicity.

// `!(x > 0.0)` style range checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod clifford;
pub mod error;
pub mod funcalc;
pub mod graded;
pub mod linalg;
pub mod manifest;
pub mod oscillator;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
