//! Cache-locality tooling for repeated sparse matrix-vector multiplication.
//!
//! The crate turns a sparse matrix into either a reordered matrix (rows and
//! columns permuted into a singly- or doubly-bordered block form) or a
//! nonzero-disjoint splitting that is multiplied piece by piece. Both routes
//! aim at the same thing: keeping the parts of `x` (and `y`) that a stretch of
//! the multiplication touches small enough to stay resident in cache.
//!
//! The pipeline is:
//!
//! 1. [`sparse`] - matrix containers (triplet, CSR, incremental CSR), Matrix
//!    Market I/O, permutations, block forms, splittings, and the storage-size
//!    model used as the "fits in cache" test.
//! 2. [`hypergraph`] - the column-net, row-net, and row-column-net hypergraph
//!    models of a matrix, plus cutsize/connectivity accounting.
//! 3. [`partitioner`] - multilevel 2-way hypergraph partitioning driven
//!    recursively until every part fits a byte budget.
//! 4. [`reorder`] - the six reordering/splitting methods built on top of the
//!    partitioner (and the BFS/reverse-Cuthill-McKee baselines).
//! 5. [`scheduler`] - orderings for the pieces of a splitting (recursive
//!    bisection order, TSP order) and the analytic miss bounds.
//! 6. [`kernels`] - the SpMxV kernels themselves (CSR, incremental CSR,
//!    zig-zag CSR, and accumulating multiple-piece SpMxV).
//! 7. [`cachesim`] - a trace-driven set-associative LRU cache simulator that
//!    replays exactly the word accesses the kernels make.

pub mod cachesim;
pub mod error;
pub mod hypergraph;
pub mod kernels;
pub mod partitioner;
pub mod reorder;
pub mod scheduler;
pub mod sparse;

pub use error::{Error, Result};
