use serde::Serialize;

use crate::error::{Error, Result};
use crate::sparse::{storage_bytes, Permutation, TripletMatrix, Widths};

/// Which slice (diagonal block) a row or column belongs to, or the border.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SliceId {
    Slice(usize),
    Border,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BlockKind {
    /// Only columns may sit in the border (column-bordered form).
    SinglyBordered,
    /// Both rows and columns may sit in the border.
    DoublyBordered,
}

/// A bordered block structure: permutations that order rows/columns slice by
/// slice (border last), together with the slice membership of every row and
/// column. Membership vectors are indexed by *original* ids; the permutations
/// place slice 0 first, then slice 1, ..., then the border.
#[derive(Debug, Clone)]
pub struct BlockForm {
    pub kind: BlockKind,
    pub k: usize,
    pub row_perm: Permutation,
    pub col_perm: Permutation,
    pub row_slice_of: Vec<SliceId>,
    pub col_slice_of: Vec<SliceId>,
}

impl BlockForm {
    /// Rows assigned to the border.
    pub fn border_rows(&self) -> usize {
        self.row_slice_of
            .iter()
            .filter(|s| matches!(s, SliceId::Border))
            .count()
    }

    /// Columns assigned to the border.
    pub fn border_cols(&self) -> usize {
        self.col_slice_of
            .iter()
            .filter(|s| matches!(s, SliceId::Border))
            .count()
    }
}

/// Result of checking a matrix against a block form.
#[derive(Debug, Clone)]
pub struct BlockReport {
    /// Nonzeros `(row, col)` that violate the block structure.
    pub violations: Vec<(usize, usize)>,
    /// Per original column: how many distinct non-border row slices touch it.
    pub lambda: Vec<usize>,
}

impl BlockReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Sum of per-column slice connectivities.
    pub fn sum_lambda(&self) -> u64 {
        self.lambda.iter().map(|&l| l as u64) .sum()
    }
}

/// Checks every nonzero of `m` against the block structure and computes the
/// per-column connectivity (number of distinct row slices, border excluded,
/// that the column touches).
///
/// For a singly-bordered form a nonzero `(i, j)` is legal when its column is
/// in the border or in the same slice as its row; rows must not be in the
/// border. A doubly-bordered form additionally legalizes any nonzero whose
/// row is in the border.
pub fn validate_block_form(m: &TripletMatrix, bf: &BlockForm) -> Result<BlockReport> {
    if bf.row_slice_of.len() != m.n_rows() || bf.col_slice_of.len() != m.n_cols() {
        return Err(Error::Dimension(format!(
            "block form covers {}x{} but matrix is {}x{}",
            bf.row_slice_of.len(),
            bf.col_slice_of.len(),
            m.n_rows(),
            m.n_cols()
        )));
    }
    if bf.row_perm.len() != m.n_rows() || bf.col_perm.len() != m.n_cols() {
        return Err(Error::Dimension("permutation sizes do not match matrix".into()));
    }
    for (i, s) in bf.row_slice_of.iter().enumerate() {
        match *s {
            SliceId::Slice(k) if k >= bf.k => {
                return Err(Error::Invalid(format!("row {i} assigned to slice {k} >= K")))
            }
            SliceId::Border if bf.kind == BlockKind::SinglyBordered => {
                return Err(Error::Invalid(format!(
                    "row {i} in border of a singly-bordered form"
                )))
            }
            _ => {}
        }
    }
    for (j, s) in bf.col_slice_of.iter().enumerate() {
        if let SliceId::Slice(k) = *s {
            if k >= bf.k {
                return Err(Error::Invalid(format!(
                    "column {j} assigned to slice {k} >= K"
                )));
            }
        }
    }

    let mut violations = Vec::new();
    let mut touched: Vec<Vec<usize>> = vec![Vec::new(); m.n_cols()];
    for &(i, j, _) in m.entries() {
        let rs = bf.row_slice_of[i];
        let cs = bf.col_slice_of[j];
        let ok = match (rs, cs) {
            (SliceId::Border, _) => true, // only reachable for doubly-bordered
            (_, SliceId::Border) => true,
            (SliceId::Slice(a), SliceId::Slice(b)) => a == b,
        };
        if !ok {
            violations.push((i, j));
        }
        if let SliceId::Slice(a) = rs {
            if !touched[j].contains(&a) {
                touched[j].push(a);
            }
        }
    }
    let lambda = touched.iter().map(Vec::len).collect();
    Ok(BlockReport { violations, lambda })
}

/// A nonzero-disjoint decomposition of a matrix into `k` pieces, each a
/// same-shape matrix holding a subset of the nonzeros. Summing the pieces
/// reproduces the original exactly.
#[derive(Debug, Clone)]
pub struct Splitting {
    k: usize,
    assign: Vec<usize>,
    pieces: Vec<TripletMatrix>,
}

/// Builds a [`Splitting`] from a per-nonzero piece assignment, indexed in the
/// matrix's canonical entry order. Every value must lie in `0..k`.
pub fn split_by_assignment(m: &TripletMatrix, assign: &[usize], k: usize) -> Result<Splitting> {
    if assign.len() != m.nnz() {
        return Err(Error::Dimension(format!(
            "assignment covers {} nonzeros but matrix has {}",
            assign.len(),
            m.nnz()
        )));
    }
    if k == 0 {
        return Err(Error::Invalid("splitting needs at least one piece".into()));
    }
    let mut buckets: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); k];
    for (&(r, c, v), &p) in m.entries().iter().zip(assign) {
        if p >= k {
            return Err(Error::Invalid(format!(
                "assignment value {p} out of range for k = {k}"
            )));
        }
        buckets[p].push((r, c, v));
    }
    let pieces = buckets
        .into_iter()
        .map(|entries| TripletMatrix::from_canonical(m.n_rows(), m.n_cols(), entries))
        .collect();
    Ok(Splitting {
        k,
        assign: assign.to_vec(),
        pieces,
    })
}

impl Splitting {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Piece id of each nonzero, in canonical entry order of the original.
    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn pieces(&self) -> &[TripletMatrix] {
        &self.pieces
    }

    pub fn piece(&self, p: usize) -> &TripletMatrix {
        &self.pieces[p]
    }

    pub fn n_rows(&self) -> usize {
        self.pieces[0].n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.pieces[0].n_cols()
    }

    /// Sorted distinct rows each piece touches.
    pub fn touched_rows(&self, p: usize) -> Vec<usize> {
        let mut rows: Vec<usize> = self.pieces[p].entries().iter().map(|e| e.0).collect();
        rows.dedup(); // canonical order is row-major, so duplicates are adjacent
        rows
    }

    /// Sorted distinct columns each piece touches.
    pub fn touched_cols(&self, p: usize) -> Vec<usize> {
        let mut cols: Vec<usize> = self.pieces[p].entries().iter().map(|e| e.1).collect();
        cols.sort_unstable();
        cols.dedup();
        cols
    }

    /// Storage footprint of each piece under the byte model.
    pub fn piece_storage_bytes(&self, w: Widths) -> Vec<u64> {
        self.pieces.iter().map(|p| storage_bytes(p, w)).collect()
    }
}
