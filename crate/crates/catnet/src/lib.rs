//! Verification engine for operator-algebraic lattice constructions built
//! from unitary fusion categories.
//!
//! The crate is `no_std` with `alloc`. It covers fusion and module category
//! data, a fusion-tree morphism calculus, fusion spin chains and their
//! commutants, braided categorical nets, the Levin-Wen string-net model with
//! a Pauli toric-code backend, tube algebras with Drinfeld center extraction,
//! and truncated DHR bimodules with their braiding.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod braided;
pub mod category;
pub mod center;
pub mod error;
pub mod homspace;
pub mod levin_wen;
pub mod linalg;
pub mod pauli;
pub mod report;

pub use error::{Error, Result};
pub use linalg::{CMat, SpMat, C64};

/// Crate version, echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
