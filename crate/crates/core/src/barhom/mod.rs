//! Normalized bar complexes of finite groups with trivial ℤ coefficients.
//!
//! Cells are tuples of non-identity element indices; boundary matrices index
//! their columns lexicographically. Two cycles are homologous when their
//! difference lies in the image of the next boundary, decided exactly (with a
//! verified witness) or certified modulo small primes. For products of cyclic
//! groups beyond the exact column cap, the modular route runs on the tensor
//! product of the factors' bar complexes via the Alexander–Whitney map.

mod chain;
mod complex;
mod group;
mod solver;
mod torus;
mod verify;

pub use chain::{c_cycle, shuffle_cup, shuffle_product, signed_permutations, BarChain, CycleClass, MAX_CYCLE_ARITY};
pub use complex::{
    bar_boundary, bar_boundary_with, cell_count, chain_vector, check_square_zero, homology_groups, homology_groups_with,
    CellIndex, TensorModel,
};
pub use group::{GroupHom, GroupTable, MatrixGroup, ASSOCIATIVITY_CHECK_CAP};
pub use solver::{HomologySolver, HomologyStatus, HomologyVerdict, Route, SolvePolicy};
pub use torus::{conj_w, inclusion, map_chain, torus_class, torus_class_in, Torus, TorusClassKind};
pub use verify::{
    c_lemma_groups, c_lemma_suite, unit_triples, verify_c_lemma, verify_gl2_steinberg, verify_s1_all, verify_s_torsion,
    verify_theta_identities,
};
