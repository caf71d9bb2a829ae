//! Decoding leaf partitions into bordered block forms.
//!
//! `decode_sb` turns a row partition into a singly-bordered form: rows
//! grouped by part, columns touching one part placed with it, columns
//! touching several parts pushed into the column border. `decode_db` turns
//! a nonzero partition with removed row nets into a doubly-bordered form:
//! the removed rows become the row border and columns are classified after
//! the fact from the final row assignment.

use crate::hypergraph::{Hypergraph, NetTag};
use crate::partitioner::RbTree;
use crate::sparse::{BlockForm, BlockKind, Permutation, SliceId, TripletMatrix};

/// Orders ids by their slice: slice 0 first, border last, ascending
/// original id inside each group.
pub(super) fn order_by_slice(slice_of: &[SliceId], k: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(slice_of.len());
    for target in 0..k {
        order.extend(
            slice_of
                .iter()
                .enumerate()
                .filter(|(_, s)| **s == SliceId::Slice(target))
                .map(|(i, _)| i),
        );
    }
    order.extend(
        slice_of
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == SliceId::Border)
            .map(|(i, _)| i),
    );
    order
}

/// Singly-bordered decoding of a row partition: `parts[i]` is the final part
/// of row `i`. Columns whose nonzeros all lie in one part join it; columns
/// spanning several parts — and empty columns — go to the border.
pub fn decode_sb(a: &TripletMatrix, parts: &[usize], k: usize) -> BlockForm {
    debug_assert_eq!(parts.len(), a.n_rows());
    let row_slice_of: Vec<SliceId> = parts.iter().map(|&p| SliceId::Slice(p)).collect();

    let mut col_slice_of = vec![SliceId::Border; a.n_cols()];
    let mut col_part = vec![usize::MAX; a.n_cols()]; // MAX: untouched, k: several
    for &(r, c, _) in a.entries() {
        let p = parts[r];
        if col_part[c] == usize::MAX {
            col_part[c] = p;
        } else if col_part[c] != p {
            col_part[c] = k;
        }
    }
    for (c, &p) in col_part.iter().enumerate() {
        if p < k {
            col_slice_of[c] = SliceId::Slice(p);
        }
    }

    let row_order = order_by_slice(&row_slice_of, k);
    let col_order = order_by_slice(&col_slice_of, k);
    BlockForm {
        kind: BlockKind::SinglyBordered,
        k,
        row_perm: Permutation::from_order(&row_order).expect("orders cover all rows"),
        col_perm: Permutation::from_order(&col_order).expect("orders cover all columns"),
        row_slice_of,
        col_slice_of,
    }
}

/// Doubly-bordered decoding of a nonzero partition produced with removed cut
/// row nets. Rows of removed nets form the row border; every other non-empty
/// row inherits the part its nonzeros ended in (they share one, since the
/// row's net survived uncut). Columns are classified from the final row
/// assignment: nonzeros confined to one slice plus the border join that
/// slice, anything wider — or touching only border rows — joins the column
/// border. Empty rows and columns are appended to the borders.
pub fn decode_db(a: &TripletMatrix, h: &Hypergraph, tree: &RbTree) -> BlockForm {
    let k = tree.k;
    let vparts = tree.vertex_parts();

    let mut row_slice_of = vec![SliceId::Border; a.n_rows()];
    let mut row_known = vec![false; a.n_rows()];
    for rn in &tree.removed_row_nets {
        if let NetTag::Row(i) = h.net_tag(rn.net) {
            row_known[i] = true; // border row
        }
    }
    for (v, &(r, _, _)) in a.entries().iter().enumerate() {
        if row_known[r] {
            continue;
        }
        let p = vparts[v].expect("surviving nonzeros always reach a leaf");
        row_slice_of[r] = SliceId::Slice(p);
        row_known[r] = true;
    }
    debug_assert!(row_consistent(a, &vparts, &row_slice_of));

    let mut col_slice_of = vec![SliceId::Border; a.n_cols()];
    let mut col_part = vec![usize::MAX; a.n_cols()];
    for &(r, c, _) in a.entries() {
        let SliceId::Slice(p) = row_slice_of[r] else {
            continue; // border rows constrain nothing
        };
        if col_part[c] == usize::MAX {
            col_part[c] = p;
        } else if col_part[c] != p {
            col_part[c] = k;
        }
    }
    for (c, &p) in col_part.iter().enumerate() {
        if p < k {
            col_slice_of[c] = SliceId::Slice(p);
        }
    }

    let row_order = order_by_slice(&row_slice_of, k);
    let col_order = order_by_slice(&col_slice_of, k);
    BlockForm {
        kind: BlockKind::DoublyBordered,
        k,
        row_perm: Permutation::from_order(&row_order).expect("orders cover all rows"),
        col_perm: Permutation::from_order(&col_order).expect("orders cover all columns"),
        row_slice_of,
        col_slice_of,
    }
}

/// Every non-border row's nonzeros landed in the single part the row joined.
fn row_consistent(a: &TripletMatrix, vparts: &[Option<usize>], rows: &[SliceId]) -> bool {
    a.entries().iter().enumerate().all(|(v, &(r, _, _))| match rows[r] {
        SliceId::Border => vparts[v].is_none(),
        SliceId::Slice(p) => vparts[v] == Some(p),
    })
}
