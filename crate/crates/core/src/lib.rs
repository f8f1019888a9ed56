//! Geometric 3-SAT engine.
//!
//! A 3-SAT clause over `N` variables forbids exactly the assignments that
//! falsify all three of its literals: an axis-aligned subcube covering
//! 1/8 of the `N`-dimensional assignment hypercube. An instance is
//! therefore a volume-filling problem. It is unsatisfiable exactly when
//! its clause cubes tile the whole hypercube, and the number of models is
//! the volume left uncovered.
//!
//! The crate is organized around that picture:
//!
//! - [`cube`]: words over `{0, 1, x}` (fixed-low, fixed-high, free) with
//!   overlap, intersection, carving, and merging.
//! - [`trie`]: a canonical binary trie over variable positions that stores
//!   a union of cubes in carved, non-overlapping form.
//! - [`sat`]: literals, clauses, instances, DIMACS text, seeded random
//!   instances, and the brute-force reference oracle.
//! - [`solver`]: clause insertion with ordering strategies, per-step growth
//!   traces, and tree-size statistics.
//! - [`iex`]: an independent exact model counter built on signed
//!   inclusion-exclusion over cube intersections.
//! - [`tiling`]: occupancy lattices, Stirling-number closed forms, and
//!   Monte Carlo tilings that model where the SAT/UNSAT transition falls.
//! - [`transition`]: seeded random-instance sweeps that measure the
//!   empirical transition and compare it with the tiling models.
//!
//! Everything here is deterministic: randomized paths take explicit `u64`
//! seeds and reproduce bit-identical results on every platform. The crate
//! is `no_std`-compatible (with `alloc`); the companion CLI crate carries
//! file IO and output formats.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(missing_docs)]

extern crate alloc;

pub mod cube;
pub mod iex;
pub mod rng;
pub mod sat;
pub mod solver;
pub mod tiling;
pub mod transition;
pub mod trie;

pub use cube::{CubeError, Trit, TritCube};
pub use sat::{Clause, Instance, Literal};
pub use solver::{solve, OrderingStrategy, SolveReport};
pub use trie::SubspaceTrie;

/// Maximum width for counting structures (tries, ledgers, solvers).
///
/// Volumes are tracked exactly in `u128`, so every counting path needs
/// `2^width` to fit comfortably; 120 leaves headroom for signed sums.
/// Plain cube algebra accepts wider words (see [`TritCube::MAX_WIDTH`]).
pub const MAX_COUNT_WIDTH: u32 = 120;
