//! Storage-byte fit models handed to the recursive bisection.
//!
//! Each model turns a set of vertices (rows, columns, or nonzeros) into the
//! exact byte footprint of the corresponding submatrix, deduplicating the
//! vector entries and index arrays its nonzeros share. The bisection uses
//! this as the "fits the budget" leaf test.

use crate::partitioner::FitModel;
use crate::sparse::{storage_bytes_counts, TripletMatrix, Widths};

/// Fit model for row-vertex partitions: a part is the row slice holding all
/// nonzeros of its rows.
pub struct RowSliceFit {
    w: Widths,
    n_cols: usize,
    cols_of_row: Vec<Vec<usize>>,
}

impl RowSliceFit {
    pub fn new(a: &TripletMatrix, w: Widths) -> Self {
        let mut cols_of_row = vec![Vec::new(); a.n_rows()];
        for &(r, c, _) in a.entries() {
            cols_of_row[r].push(c);
        }
        RowSliceFit {
            w,
            n_cols: a.n_cols(),
            cols_of_row,
        }
    }
}

impl FitModel for RowSliceFit {
    fn part_bytes(&self, verts: &[usize]) -> u64 {
        let mut nnz = 0u64;
        let mut rows = 0u64;
        let mut col_seen = vec![false; self.n_cols];
        let mut cols = 0u64;
        for &r in verts {
            let adj = &self.cols_of_row[r];
            if adj.is_empty() {
                continue;
            }
            nnz += adj.len() as u64;
            rows += 1;
            for &c in adj {
                if !col_seen[c] {
                    col_seen[c] = true;
                    cols += 1;
                }
            }
        }
        storage_bytes_counts(nnz, rows, cols, self.w)
    }
}

/// Fit model for column-vertex partitions: a part is the column slice
/// holding all nonzeros of its columns, stored and swept columnwise (a
/// pointer per nonempty column, a row index per nonzero). That makes it
/// byte-for-byte the row-slice model of the transpose, so partitioning
/// columns of `a` and rows of `a`ᵀ make identical decisions — and symmetric
/// matrices get identical row and column partitions under one seed.
pub struct ColSliceFit {
    w: Widths,
    n_rows: usize,
    rows_of_col: Vec<Vec<usize>>,
}

impl ColSliceFit {
    pub fn new(a: &TripletMatrix, w: Widths) -> Self {
        let mut rows_of_col = vec![Vec::new(); a.n_cols()];
        for &(r, c, _) in a.entries() {
            rows_of_col[c].push(r);
        }
        ColSliceFit {
            w,
            n_rows: a.n_rows(),
            rows_of_col,
        }
    }
}

impl FitModel for ColSliceFit {
    fn part_bytes(&self, verts: &[usize]) -> u64 {
        let mut nnz = 0u64;
        let mut cols = 0u64;
        let mut row_seen = vec![false; self.n_rows];
        let mut rows = 0u64;
        for &c in verts {
            let adj = &self.rows_of_col[c];
            if adj.is_empty() {
                continue;
            }
            nnz += adj.len() as u64;
            cols += 1;
            for &r in adj {
                if !row_seen[r] {
                    row_seen[r] = true;
                    rows += 1;
                }
            }
        }
        // columnwise storage: the columns play the pointer role
        storage_bytes_counts(nnz, cols, rows, self.w)
    }
}

/// Fit model for nonzero-vertex partitions: a part is an arbitrary subset of
/// nonzeros stored as its own sparse piece.
pub struct NonzeroFit {
    w: Widths,
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize)>,
}

impl NonzeroFit {
    pub fn new(a: &TripletMatrix, w: Widths) -> Self {
        NonzeroFit {
            w,
            n_rows: a.n_rows(),
            n_cols: a.n_cols(),
            entries: a.entries().iter().map(|&(r, c, _)| (r, c)).collect(),
        }
    }
}

impl FitModel for NonzeroFit {
    fn part_bytes(&self, verts: &[usize]) -> u64 {
        let mut row_seen = vec![false; self.n_rows];
        let mut col_seen = vec![false; self.n_cols];
        let mut rows = 0u64;
        let mut cols = 0u64;
        for &e in verts {
            let (r, c) = self.entries[e];
            if !row_seen[r] {
                row_seen[r] = true;
                rows += 1;
            }
            if !col_seen[c] {
                col_seen[c] = true;
                cols += 1;
            }
        }
        storage_bytes_counts(verts.len() as u64, rows, cols, self.w)
    }
}
