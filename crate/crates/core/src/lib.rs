//! Computational toolkit for low-degree Milnor K-theory, pre-Bloch and
//! Bloch groups, and third homology of diagonal tori.
//!
//! Everything is instantiated over finite fields `F_q` and over an
//! S-unit truncation of ℚ*, and every chain-level or symbol-level identity
//! is decided exactly (or certified modulo small primes) by integer linear
//! algebra.
//!
//! Module map:
//!
//! * [`intlin`]: exact integer matrices, Hermite/Smith normal forms,
//!   lattice membership and comparison.
//! * [`fields`]: finite field models with discrete logarithms, factored
//!   rationals.
//! * [`abpres`]: finitely presented abelian groups and maps between them.
//! * [`milnor`]: Milnor K-group presentations, the product map and local
//!   symbols on ℚ.
//! * [`bloch`]: pre-Bloch group, λ, Bloch group, exactness checks.
//! * [`barhom`]: normalized bar complexes, cycle classes, homology-class
//!   equality and the identity verifiers.
//! * [`report`] and [`cli`]: deterministic JSON reports and the `k3lab`
//!   command-line driver.

pub mod abpres;
pub mod barhom;
pub mod bloch;
pub mod cli;
mod error;
pub mod fields;
pub mod intlin;
pub mod milnor;
pub mod report;

pub use error::{Error, Result};

/// Printed at the top of every report and summary.
pub const DEFINITIONAL_EXTENSION_NOTICE: &str = "definitional extension: the objects are instantiated over finite fields and S-unit truncations of Q; no statement about infinite fields is claimed";

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
