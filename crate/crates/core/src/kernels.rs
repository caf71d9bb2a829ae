//! Sparse matrix-vector multiply kernels (`y <- A x`).
//!
//! Four variants: plain CSR, incremental CSR (single running column index
//! with overflow-driven row bookkeeping), zig-zag CSR (alternating column
//! sweep direction), and the accumulating multiple-piece multiply that runs a
//! sequence of incremental-CSR pieces against one shared `y`.

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, IcsrMatrix, ZigzagMatrix};

fn check_dims(n_rows: usize, n_cols: usize, x: &[f64]) -> Result<()> {
    if x.len() != n_cols {
        return Err(Error::Dimension(format!(
            "x has length {} but matrix is {}x{}",
            x.len(),
            n_rows,
            n_cols
        )));
    }
    Ok(())
}

/// Row-by-row CSR multiply. Every row gets written, so empty rows produce
/// an explicit 0.0.
pub fn spmv_csr(a: &CsrMatrix, x: &[f64]) -> Result<Vec<f64>> {
    check_dims(a.n_rows(), a.n_cols(), x)?;
    let mut y = vec![0.0; a.n_rows()];
    let values = a.values();
    let cols = a.col_index();
    for (i, yi) in y.iter_mut().enumerate() {
        let mut sum = 0.0;
        for k in a.row_range(i) {
            sum += values[k] * x[cols[k]];
        }
        *yi = sum;
    }
    Ok(y)
}

/// Incremental-CSR multiply: walks the increment stream, and whenever the
/// running column index overflows past `n_cols` finishes the current row and
/// jumps ahead by the next `row_jump` gap. Rows with no nonzeros are never
/// visited and keep their initial 0.0.
pub fn spmv_icsr(a: &IcsrMatrix, x: &[f64]) -> Result<Vec<f64>> {
    check_dims(a.n_rows(), a.n_cols(), x)?;
    let mut y = vec![0.0; a.n_rows()];
    spmv_icsr_acc(a, x, &mut y)?;
    Ok(y)
}

/// Incremental-CSR multiply that adds each finished row sum into an existing
/// `y` instead of overwriting it. This is the building block of the
/// multiple-piece multiply.
pub fn spmv_icsr_acc(a: &IcsrMatrix, x: &[f64], y: &mut [f64]) -> Result<()> {
    check_dims(a.n_rows(), a.n_cols(), x)?;
    if y.len() != a.n_rows() {
        return Err(Error::Dimension(format!(
            "y has length {} but matrix has {} rows",
            y.len(),
            a.n_rows()
        )));
    }
    if a.nnz() == 0 {
        return Ok(());
    }
    let values = a.values();
    let col_diff = a.col_diff();
    let row_jump = a.row_jump();
    let n = a.n_cols();
    let mut i = row_jump[0];
    let mut r = 1usize;
    let mut j = col_diff[0];
    let mut sum = 0.0;
    for (k, &v) in values.iter().enumerate() {
        sum += v * x[j];
        j += col_diff[k + 1];
        if j >= n {
            y[i] += sum;
            sum = 0.0;
            j -= n;
            if r < row_jump.len() {
                i += row_jump[r];
                r += 1;
            }
        }
    }
    Ok(())
}

/// Zig-zag CSR multiply; identical row sums, but odd rows accumulate their
/// products in reverse column order.
pub fn spmv_zigzag(a: &ZigzagMatrix, x: &[f64]) -> Result<Vec<f64>> {
    check_dims(a.n_rows(), a.n_cols(), x)?;
    let mut y = vec![0.0; a.n_rows()];
    let values = a.values();
    let cols = a.col_index();
    for (i, yi) in y.iter_mut().enumerate() {
        let mut sum = 0.0;
        for k in a.row_range(i) {
            sum += values[k] * x[cols[k]];
        }
        *yi = sum;
    }
    Ok(y)
}

/// Multiple-piece multiply: zeroes one shared `y`, then accumulates
/// `y <- y + A_p x` for every piece in the given sequence. All pieces must
/// share the same shape. No per-piece temporaries are used.
pub fn spmv_multi(pieces: &[IcsrMatrix], x: &[f64]) -> Result<Vec<f64>> {
    let first = pieces
        .first()
        .ok_or_else(|| Error::Invalid("multiple-piece multiply needs at least one piece".into()))?;
    let (m, n) = (first.n_rows(), first.n_cols());
    for p in pieces {
        if p.n_rows() != m || p.n_cols() != n {
            return Err(Error::Dimension(
                "pieces of a splitting must share one shape".into(),
            ));
        }
    }
    check_dims(m, n, x)?;
    let mut y = vec![0.0; m];
    for p in pieces {
        spmv_icsr_acc(p, x, &mut y)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::{split_by_assignment, TripletMatrix};

    fn dense_matvec(m: &TripletMatrix, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; m.n_rows()];
        for &(r, c, v) in m.entries() {
            y[r] += v * x[c];
        }
        y
    }

    fn assert_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (u, v) in a.iter().zip(b) {
            let scale = u.abs().max(v.abs()).max(1.0);
            assert!((u - v).abs() <= 1e-12 * scale, "{u} vs {v}");
        }
    }

    fn sample() -> TripletMatrix {
        TripletMatrix::new(
            4,
            5,
            vec![
                (0, 0, 2.0),
                (0, 4, -1.0),
                (1, 1, 3.0),
                (1, 2, 0.5),
                (1, 3, 1.0),
                (3, 0, -2.5),
                (3, 4, 4.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn kernels_match_dense_oracle() {
        let m = sample();
        let x = vec![1.0, -2.0, 4.0, 0.5, 3.0];
        let want = dense_matvec(&m, &x);
        let csr = m.to_csr();
        assert_close(&spmv_csr(&csr, &x).unwrap(), &want);
        assert_close(&spmv_icsr(&csr.to_icsr(), &x).unwrap(), &want);
        assert_close(
            &spmv_zigzag(&ZigzagMatrix::from_csr(&csr), &x).unwrap(),
            &want,
        );
    }

    #[test]
    fn empty_rows_stay_zero() {
        let m = sample(); // row 2 empty
        let x = vec![1.0; 5];
        assert_eq!(spmv_csr(&m.to_csr(), &x).unwrap()[2], 0.0);
        assert_eq!(spmv_icsr(&m.to_csr().to_icsr(), &x).unwrap()[2], 0.0);
    }

    #[test]
    fn multi_accumulates_like_unsplit() {
        let m = sample();
        let x = vec![0.25, 1.0, -1.0, 2.0, 1.5];
        let want = dense_matvec(&m, &x);
        let assign = vec![0, 1, 2, 0, 1, 2, 0];
        let s = split_by_assignment(&m, &assign, 3).unwrap();
        for order in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            let pieces: Vec<_> = order.iter().map(|&p| s.piece(p).to_csr().to_icsr()).collect();
            assert_close(&spmv_multi(&pieces, &x).unwrap(), &want);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let m = sample().to_csr();
        assert!(spmv_csr(&m, &[1.0; 4]).is_err());
        assert!(spmv_icsr(&m.to_icsr(), &[1.0; 6]).is_err());
        assert!(spmv_multi(&[], &[]).is_err());
    }

    #[test]
    fn zero_matrix_multiplies_to_zero() {
        let m = TripletMatrix::new(3, 3, vec![]).unwrap();
        let x = vec![7.0; 3];
        assert_eq!(spmv_csr(&m.to_csr(), &x).unwrap(), vec![0.0; 3]);
        assert_eq!(spmv_icsr(&m.to_csr().to_icsr(), &x).unwrap(), vec![0.0; 3]);
    }
}
