//! Sparse matrix containers and the byte-exact storage model.
//!
//! Everything downstream works in terms of these types: the canonical
//! [`TripletMatrix`], the compressed forms ([`CsrMatrix`], [`IcsrMatrix`],
//! [`ZigzagMatrix`]), [`Permutation`]s and the decoded [`BlockForm`] /
//! [`Splitting`] artifacts, plus Matrix Market I/O.

mod block;
mod csr;
mod market;
mod perm;
mod storage;
mod triplet;

pub use block::{
    split_by_assignment, validate_block_form, BlockForm, BlockKind, BlockReport, SliceId,
    Splitting,
};
pub use csr::{CsrMatrix, IcsrMatrix, ZigzagMatrix};
pub use market::{read_matrix_market, read_matrix_market_from, write_matrix_market};
pub use perm::Permutation;
pub use storage::{storage_bytes, storage_bytes_counts, Widths};
pub use triplet::TripletMatrix;
