use crate::sparse::TripletMatrix;

/// Byte widths used by the storage-size model. Values (and the vector
/// entries they multiply with) are 8-byte floats; index metadata defaults to
/// 4 bytes but is configurable since real deployments differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Widths {
    pub index: u64,
    pub value: u64,
}

impl Default for Widths {
    fn default() -> Self {
        Widths { index: 4, value: 8 }
    }
}

impl Widths {
    pub fn new(index: u64, value: u64) -> Self {
        Widths { index, value }
    }
}

/// Bytes needed to process a (sub)matrix with the CSR-style kernel: the
/// nonzero values and their column indices, a row pointer per non-empty row
/// plus one, and the slices of `x` and `y` the multiply actually touches
/// (one value-width word per distinct column resp. row).
///
/// This is the "fits in cache" currency used by the partitioner's leaf test
/// and by the miss-bound hypotheses. An empty piece still costs one index
/// word for the row-pointer sentinel.
pub fn storage_bytes(m: &TripletMatrix, w: Widths) -> u64 {
    let mut rows_touched = 0u64;
    let mut cols_touched = 0u64;
    let mut row_seen = vec![false; m.n_rows()];
    let mut col_seen = vec![false; m.n_cols()];
    for &(r, c, _) in m.entries() {
        if !row_seen[r] {
            row_seen[r] = true;
            rows_touched += 1;
        }
        if !col_seen[c] {
            col_seen[c] = true;
            cols_touched += 1;
        }
    }
    storage_bytes_counts(m.nnz() as u64, rows_touched, cols_touched, w)
}

/// Same model from pre-computed counts.
pub fn storage_bytes_counts(nnz: u64, rows_touched: u64, cols_touched: u64, w: Widths) -> u64 {
    w.value * nnz                      // nonzero values
        + w.index * nnz                // column indices
        + w.index * (rows_touched + 1) // row pointers
        + w.value * cols_touched       // x subvector
        + w.value * rows_touched       // y subvector
}
