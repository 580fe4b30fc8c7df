//! Exact integer linear algebra.
//!
//! Dense matrices carry arbitrary-precision entries; sparse matrices carry
//! machine integers (boundary and relation matrices never need more) and are
//! promoted to [`IntMatrix`] whenever a dense normal form is required.

mod dense;
mod echelon;
mod hnf;
mod lattice;
mod snf;
mod solve;
mod sparse;

pub use dense::IntMatrix;
pub use hnf::{hnf, hnf_with};
pub use lattice::{
    column_lattice_basis, coordinates_in_basis, integer_kernel, lattice_equal, lattice_equal_with,
    HermiteBasis, LatticeComparison,
};
pub use snf::{snf, snf_with, SnfResult};
pub use solve::{
    in_image, in_image_with, ExactElimination, MembershipStatus, MembershipVerdict, ModularElimination,
    Obstruction, SolveMode,
};
pub use sparse::SparseIntMatrix;
pub(crate) use solve::modular_verdict;

use num_bigint::BigInt;

/// Resource caps shared by every exact computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Maximum column count for exact image membership.
    pub max_cols: usize,
    /// Maximum bit length of any intermediate integer.
    pub max_bits: u64,
    /// Maximum number of cells (columns) materialized for a bar complex.
    pub max_chain_cells: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_cols: 1 << 17,
            max_bits: 1 << 16,
            max_chain_cells: 1 << 20,
        }
    }
}

/// The fixed prime list used by modular certificates.
pub const DEFAULT_PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

pub(crate) fn check_bits(x: &BigInt, caps: &Caps) -> crate::Result<()> {
    let bits = x.bits();
    if bits > caps.max_bits {
        return Err(crate::Error::ResourceLimit {
            what: "intermediate entry bit length",
            cap: caps.max_bits,
            actual: bits,
        });
    }
    Ok(())
}
