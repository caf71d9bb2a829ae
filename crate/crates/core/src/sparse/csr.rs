use crate::error::{Error, Result};
use crate::sparse::TripletMatrix;

/// Compressed sparse row storage. `row_start` has `n_rows + 1` entries;
/// column indices are strictly increasing inside each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
    col_index: Vec<usize>,
    row_start: Vec<usize>,
}

impl CsrMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn col_index(&self) -> &[usize] {
        &self.col_index
    }

    pub fn row_start(&self) -> &[usize] {
        &self.row_start
    }

    /// Index range of row `i` into `values` / `col_index`.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_start[i]..self.row_start[i + 1]
    }

    pub fn to_triplet(&self) -> TripletMatrix {
        let mut entries = Vec::with_capacity(self.nnz());
        for i in 0..self.n_rows {
            for k in self.row_range(i) {
                entries.push((i, self.col_index[k], self.values[k]));
            }
        }
        TripletMatrix::from_canonical(self.n_rows, self.n_cols, entries)
    }

    /// Converts to the incremental form: `col_diff` holds the first column
    /// followed by column increments (bumped by `n_cols` whenever the walk
    /// crosses into a new non-empty row) and one final sentinel increment of
    /// `n_cols` that flushes the last row. `row_jump` holds the index of the
    /// first non-empty row followed by the gaps between consecutive non-empty
    /// rows. A matrix with no nonzeros converts to all-empty sequences.
    pub fn to_icsr(&self) -> IcsrMatrix {
        let nnz = self.nnz();
        let mut col_diff = Vec::with_capacity(nnz + 1);
        let mut row_jump = Vec::new();
        if nnz == 0 {
            return IcsrMatrix {
                n_rows: self.n_rows,
                n_cols: self.n_cols,
                values: Vec::new(),
                col_diff,
                row_jump,
            };
        }
        let mut prev_row: Option<usize> = None;
        let mut prev_col = 0usize;
        for i in 0..self.n_rows {
            let range = self.row_range(i);
            if range.is_empty() {
                continue;
            }
            match prev_row {
                None => row_jump.push(i),
                Some(p) => row_jump.push(i - p),
            }
            for k in range {
                let c = self.col_index[k];
                match prev_row {
                    None => col_diff.push(c),
                    // Crossing a row boundary adds one overflow of n_cols; the
                    // row gap itself is carried by row_jump.
                    Some(p) if p != i && k == self.row_start[i] => {
                        col_diff.push(c + self.n_cols - prev_col)
                    }
                    Some(_) => col_diff.push(c - prev_col),
                }
                prev_row = Some(i);
                prev_col = c;
            }
        }
        col_diff.push(self.n_cols);
        IcsrMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            values: self.values.clone(),
            col_diff,
            row_jump,
        }
    }
}

impl TripletMatrix {
    /// Compresses to CSR. Entries are already canonical, so this is a single
    /// scan plus a prefix sum over row counts.
    pub fn to_csr(&self) -> CsrMatrix {
        let mut row_start = vec![0usize; self.n_rows() + 1];
        for &(r, _, _) in self.entries() {
            row_start[r + 1] += 1;
        }
        for i in 0..self.n_rows() {
            row_start[i + 1] += row_start[i];
        }
        let mut values = Vec::with_capacity(self.nnz());
        let mut col_index = Vec::with_capacity(self.nnz());
        for &(_, c, v) in self.entries() {
            values.push(v);
            col_index.push(c);
        }
        CsrMatrix {
            n_rows: self.n_rows(),
            n_cols: self.n_cols(),
            values,
            col_index,
            row_start,
        }
    }
}

/// Incremental CSR: columns are stored as increments so the multiply kernel
/// carries a single running column index, and row bookkeeping happens only
/// when an increment overflows past `n_cols`. Rows with no nonzeros never
/// appear; `row_jump` gaps skip over them.
#[derive(Debug, Clone, PartialEq)]
pub struct IcsrMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
    col_diff: Vec<usize>,
    row_jump: Vec<usize>,
}

impl IcsrMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// First column, then one increment per remaining nonzero, then the
    /// sentinel; length `nnz + 1` (empty when `nnz == 0`).
    pub fn col_diff(&self) -> &[usize] {
        &self.col_diff
    }

    /// One entry per non-empty row: absolute index of the first, then gaps.
    pub fn row_jump(&self) -> &[usize] {
        &self.row_jump
    }
}

/// CSR with the nonzeros of every odd-numbered row stored in decreasing
/// column order, so a multiply sweeps columns left-to-right and then
/// right-to-left on alternating rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ZigzagMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
    col_index: Vec<usize>,
    row_start: Vec<usize>,
}

impl ZigzagMatrix {
    pub fn from_csr(csr: &CsrMatrix) -> Self {
        let mut values = csr.values().to_vec();
        let mut col_index = csr.col_index().to_vec();
        for i in (1..csr.n_rows()).step_by(2) {
            let r = csr.row_range(i);
            values[r.clone()].reverse();
            col_index[r].reverse();
        }
        ZigzagMatrix {
            n_rows: csr.n_rows(),
            n_cols: csr.n_cols(),
            values,
            col_index,
            row_start: csr.row_start().to_vec(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn col_index(&self) -> &[usize] {
        &self.col_index
    }

    pub fn row_start(&self) -> &[usize] {
        &self.row_start
    }

    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_start[i]..self.row_start[i + 1]
    }
}

impl CsrMatrix {
    /// Validating constructor for externally assembled CSR data.
    pub fn from_parts(
        n_rows: usize,
        n_cols: usize,
        values: Vec<f64>,
        col_index: Vec<usize>,
        row_start: Vec<usize>,
    ) -> Result<Self> {
        if row_start.len() != n_rows + 1 {
            return Err(Error::Invalid(format!(
                "row_start length {} != n_rows + 1 = {}",
                row_start.len(),
                n_rows + 1
            )));
        }
        if values.len() != col_index.len() {
            return Err(Error::Invalid(
                "values and col_index lengths differ".into(),
            ));
        }
        if row_start[0] != 0 || *row_start.last().unwrap() != values.len() {
            return Err(Error::Invalid("row_start endpoints are wrong".into()));
        }
        for i in 0..n_rows {
            if row_start[i] > row_start[i + 1] {
                return Err(Error::Invalid(format!("row_start decreases at row {i}")));
            }
            let row = &col_index[row_start[i]..row_start[i + 1]];
            for w in row.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Invalid(format!(
                        "columns not strictly increasing in row {i}"
                    )));
                }
            }
            if let Some(&last) = row.last() {
                if last >= n_cols {
                    return Err(Error::Invalid(format!("column out of range in row {i}")));
                }
            }
        }
        Ok(CsrMatrix {
            n_rows,
            n_cols,
            values,
            col_index,
            row_start,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_three() -> TripletMatrix {
        TripletMatrix::new(2, 3, vec![(0, 0, 5.0), (0, 2, 1.0), (1, 1, 2.0)]).unwrap()
    }

    #[test]
    fn csr_layout() {
        let csr = two_by_three().to_csr();
        assert_eq!(csr.row_start(), &[0, 2, 3]);
        assert_eq!(csr.col_index(), &[0, 2, 1]);
        assert_eq!(csr.values(), &[5.0, 1.0, 2.0]);
    }

    #[test]
    fn csr_triplet_round_trip() {
        let m = two_by_three();
        assert_eq!(m.to_csr().to_triplet(), m);
    }

    #[test]
    fn icsr_of_small_matrix() {
        let icsr = two_by_three().to_csr().to_icsr();
        assert_eq!(icsr.col_diff(), &[0, 2, 2, 3]);
        assert_eq!(icsr.row_jump(), &[0, 1]);
        assert_eq!(icsr.values(), &[5.0, 1.0, 2.0]);
    }

    #[test]
    fn icsr_skips_empty_rows() {
        // Rows 1 and 2 empty: row_jump gap of 3 from row 0 to row 3.
        let m = TripletMatrix::new(4, 2, vec![(0, 1, 1.0), (3, 0, 2.0)]).unwrap();
        let icsr = m.to_csr().to_icsr();
        assert_eq!(icsr.row_jump(), &[0, 3]);
        // (0,1) -> (3,0): increment 0 - 1 + n_cols = 1, then sentinel 2.
        assert_eq!(icsr.col_diff(), &[1, 1, 2]);
    }

    #[test]
    fn icsr_of_empty_matrix() {
        let m = TripletMatrix::new(3, 3, vec![]).unwrap();
        let icsr = m.to_csr().to_icsr();
        assert!(icsr.values().is_empty());
        assert!(icsr.col_diff().is_empty());
        assert!(icsr.row_jump().is_empty());
    }

    #[test]
    fn zigzag_reverses_odd_rows() {
        let m = TripletMatrix::new(
            2,
            3,
            vec![(0, 0, 1.0), (0, 2, 2.0), (1, 0, 3.0), (1, 1, 4.0), (1, 2, 5.0)],
        )
        .unwrap();
        let zz = ZigzagMatrix::from_csr(&m.to_csr());
        assert_eq!(zz.col_index(), &[0, 2, 2, 1, 0]);
        assert_eq!(zz.values(), &[1.0, 2.0, 5.0, 4.0, 3.0]);
    }

    #[test]
    fn from_parts_validates() {
        assert!(CsrMatrix::from_parts(2, 2, vec![1.0], vec![0], vec![0, 1, 1]).is_ok());
        // non-increasing columns in a row
        assert!(
            CsrMatrix::from_parts(1, 3, vec![1.0, 2.0], vec![2, 1], vec![0, 2]).is_err()
        );
        assert!(CsrMatrix::from_parts(1, 1, vec![1.0], vec![0], vec![0]).is_err());
    }
}
