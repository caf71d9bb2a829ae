//! Helpers shared by the integration suites: seeded random matrices and
//! order-independent multiply oracles.

use rand::Rng;
use spmv_locality::sparse::TripletMatrix;

/// Uniform random sparse matrix: each position holds a nonzero with
/// probability `density`, values in (-1, 1) excluding exact zero.
pub fn random_matrix(rng: &mut impl Rng, n_rows: usize, n_cols: usize, density: f64) -> TripletMatrix {
    let mut entries = Vec::new();
    for i in 0..n_rows {
        for j in 0..n_cols {
            if rng.gen_bool(density) {
                let v: f64 = rng.gen_range(0.1..1.0);
                entries.push((i, j, if rng.gen_bool(0.5) { v } else { -v }));
            }
        }
    }
    TripletMatrix::new(n_rows, n_cols, entries).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Multiply against a dense copy of the matrix — an oracle that shares no
/// code or iteration order with the sparse kernels.
pub fn dense_matvec(a: &TripletMatrix, x: &[f64]) -> Vec<f64> {
    let mut dense = vec![vec![0.0f64; a.n_cols()]; a.n_rows()];
    for &(i, j, v) in a.entries() {
        dense[i][j] += v;
    }
    dense
        .iter()
        .map(|row| row.iter().zip(x).map(|(aij, xj)| aij * xj).sum())
        .collect()
}

/// Triplet-order multiply plus the per-row sum of |a_ij * x_j|, which scales
/// the rounding tolerance when comparing kernels that sum in another order.
pub fn triplet_matvec(a: &TripletMatrix, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut y = vec![0.0f64; a.n_rows()];
    let mut mag = vec![0.0f64; a.n_rows()];
    for &(i, j, v) in a.entries() {
        y[i] += v * x[j];
        mag[i] += (v * x[j]).abs();
    }
    (y, mag)
}

/// Asserts `got` equals `want` within `1e-12 * (1 + magnitude)` per entry.
pub fn assert_close(got: &[f64], want: &[f64], mag: &[f64], what: &str) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!("{what}: length {} vs {}", got.len(), want.len()));
    }
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        let tol = 1e-12 * (1.0 + mag[i]);
        if (g - w).abs() > tol {
            return Err(format!("{what}: y[{i}] = {g} vs {w} (tol {tol})"));
        }
    }
    Ok(())
}
