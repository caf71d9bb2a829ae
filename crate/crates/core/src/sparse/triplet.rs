use crate::error::{Error, Result};
use crate::sparse::Permutation;

/// Coordinate-format sparse matrix in canonical order.
///
/// Canonical means: entries sorted by `(row, col)` and no duplicate
/// coordinate. The constructor sorts and sums duplicates, so two matrices
/// with the same nonzero structure and values compare equal. Explicit zeros
/// are kept; nothing downstream assumes values are nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletMatrix {
    /// Builds a canonical matrix from arbitrary-order entries. Duplicate
    /// coordinates are summed. Fails if an index is out of bounds.
    pub fn new(n_rows: usize, n_cols: usize, mut entries: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(r, c, _) in &entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::Invalid(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols} matrix"
                )));
            }
        }
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        entries.dedup_by(|later, first| {
            if later.0 == first.0 && later.1 == first.1 {
                first.2 += later.2;
                true
            } else {
                false
            }
        });
        Ok(TripletMatrix {
            n_rows,
            n_cols,
            entries,
        })
    }

    /// Internal constructor for entries already known to be canonical
    /// (sorted, unique, in bounds).
    pub(crate) fn from_canonical(
        n_rows: usize,
        n_cols: usize,
        entries: Vec<(usize, usize, f64)>,
    ) -> Self {
        debug_assert!(entries
            .windows(2)
            .all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        debug_assert!(entries.iter().all(|&(r, c, _)| r < n_rows && c < n_cols));
        TripletMatrix {
            n_rows,
            n_cols,
            entries,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Entries in canonical (row-major) order.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Number of nonzeros in each row.
    pub fn row_nnz(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_rows];
        for &(r, _, _) in &self.entries {
            counts[r] += 1;
        }
        counts
    }

    /// Number of nonzeros in each column.
    pub fn col_nnz(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_cols];
        for &(_, c, _) in &self.entries {
            counts[c] += 1;
        }
        counts
    }

    pub fn transpose(&self) -> TripletMatrix {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        TripletMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            entries,
        }
    }

    /// Applies a row and a column permutation: entry `(i, j, v)` moves to
    /// `(row_perm[i], col_perm[j], v)`.
    pub fn permuted(&self, row_perm: &Permutation, col_perm: &Permutation) -> Result<TripletMatrix> {
        if row_perm.len() != self.n_rows || col_perm.len() != self.n_cols {
            return Err(Error::Dimension(format!(
                "permutation sizes {}x{} do not match matrix {}x{}",
                row_perm.len(),
                col_perm.len(),
                self.n_rows,
                self.n_cols
            )));
        }
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|&(r, c, v)| (row_perm.map(r), col_perm.map(c), v))
            .collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Ok(TripletMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries,
        })
    }
}
