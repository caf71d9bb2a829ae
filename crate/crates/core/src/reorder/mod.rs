//! Matrix reordering and splitting methods.
//!
//! Two graph-traversal baselines ([`sbfs_order`], [`srcm_order`]) and four
//! hypergraph-partitioning methods: [`shp_cn`] and [`shp_rn`] produce
//! singly-bordered block orders (column border resp. row border), [`shp_ercn`]
//! a doubly-bordered form, and [`mhp_rcn`] a nonzero-disjoint splitting whose
//! pieces each fit the configured byte budget.

mod decode;
mod fit;
mod graph;

pub use decode::{decode_db, decode_sb};
use decode::order_by_slice;
pub use fit::{ColSliceFit, NonzeroFit, RowSliceFit};
pub use graph::{sbfs_order, srcm_order};

use crate::error::Result;
use crate::hypergraph::{build_column_net, build_row_net, build_row_column_net, NetTag};
use crate::partitioner::{recursive_bisect, NetHandling, PartitionConfig, RbTree};
use crate::sparse::{
    split_by_assignment, BlockForm, Permutation, SliceId, Splitting, TripletMatrix, Widths,
};

/// Orders rows into slices whose submatrices each fit `cfg.w_max` bytes,
/// pushing columns shared between slices into a column border. Partitions
/// the column-net model of `a` (vertices are rows) with cut-net splitting.
pub fn shp_cn(a: &TripletMatrix, cfg: &PartitionConfig, w: Widths) -> Result<BlockForm> {
    let h = build_column_net(a);
    let cfg = PartitionConfig {
        net_handling: NetHandling::Split,
        ..cfg.clone()
    };
    let fit = RowSliceFit::new(a, w);
    let tree = recursive_bisect(&h, &cfg, &fit)?;
    let parts: Vec<usize> = tree
        .vertex_parts()
        .into_iter()
        .map(|p| p.expect("cut-net splitting keeps every vertex"))
        .collect();
    Ok(decode_sb(a, &parts, tree.k))
}

/// Column-slice dual of [`shp_cn`]: partitions the row-net model (vertices
/// are columns), groups columns by part, and orders rows with each part when
/// confined to it, or last when they span several parts (the row border).
pub fn shp_rn(
    a: &TripletMatrix,
    cfg: &PartitionConfig,
    w: Widths,
) -> Result<(Permutation, Permutation)> {
    let h = build_row_net(a);
    let cfg = PartitionConfig {
        net_handling: NetHandling::Split,
        ..cfg.clone()
    };
    let fit = ColSliceFit::new(a, w);
    let tree = recursive_bisect(&h, &cfg, &fit)?;
    let col_parts: Vec<usize> = tree
        .vertex_parts()
        .into_iter()
        .map(|p| p.expect("cut-net splitting keeps every vertex"))
        .collect();

    // transposed singly-bordered decoding: border rows instead of columns
    let col_slice_of: Vec<SliceId> = col_parts.iter().map(|&p| SliceId::Slice(p)).collect();
    let mut row_part = vec![usize::MAX; a.n_rows()];
    for &(r, c, _) in a.entries() {
        let p = col_parts[c];
        if row_part[r] == usize::MAX {
            row_part[r] = p;
        } else if row_part[r] != p {
            row_part[r] = tree.k;
        }
    }
    let row_slice_of: Vec<SliceId> = row_part
        .iter()
        .map(|&p| {
            if p < tree.k {
                SliceId::Slice(p)
            } else {
                SliceId::Border
            }
        })
        .collect();
    let row_order = order_by_slice(&row_slice_of, tree.k);
    let col_order = order_by_slice(&col_slice_of, tree.k);
    Ok((
        Permutation::from_order(&row_order).expect("orders cover all rows"),
        Permutation::from_order(&col_order).expect("orders cover all columns"),
    ))
}

/// Doubly-bordered reordering. Partitions the row-column-net model (vertices
/// are nonzeros) with row nets costed by their nonzero count; cut row nets
/// are removed together with their vertices and become the row border, and
/// columns are classified from the final row assignment.
pub fn shp_ercn(a: &TripletMatrix, cfg: &PartitionConfig, w: Widths) -> Result<BlockForm> {
    let mut h = build_row_column_net(a);
    let row_nnz = a.row_nnz();
    for n in 0..h.n_nets() {
        if let NetTag::Row(i) = h.net_tag(n) {
            h.set_net_cost(n, row_nnz[i] as u64);
        }
    }
    let cfg = PartitionConfig {
        net_handling: NetHandling::EnhancedRowRemove,
        ..cfg.clone()
    };
    let fit = NonzeroFit::new(a, w);
    let tree = recursive_bisect(&h, &cfg, &fit)?;
    Ok(decode_db(a, &h, &tree))
}

/// Splits `a` into nonzero-disjoint pieces, each fitting `cfg.w_max` bytes.
/// Partitions the row-column-net model with unit costs and cut-net
/// splitting; each leaf's vertices (nonzeros) form one piece.
pub fn mhp_rcn(
    a: &TripletMatrix,
    cfg: &PartitionConfig,
    w: Widths,
) -> Result<(Splitting, RbTree)> {
    let h = build_row_column_net(a);
    let cfg = PartitionConfig {
        net_handling: NetHandling::Split,
        ..cfg.clone()
    };
    let fit = NonzeroFit::new(a, w);
    let tree = recursive_bisect(&h, &cfg, &fit)?;
    let assign: Vec<usize> = tree
        .vertex_parts()
        .into_iter()
        .map(|p| p.expect("cut-net splitting keeps every nonzero"))
        .collect();
    let splitting = split_by_assignment(a, &assign, tree.k)?;
    Ok((splitting, tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::spmv_csr;
    use crate::sparse::{storage_bytes, validate_block_form, BlockKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn running_example() -> TripletMatrix {
        // Two row groups {0,1} and {2,3}; column 2 is touched by both.
        TripletMatrix::new(
            4,
            4,
            vec![
                (0, 0, 1.0),
                (0, 1, 1.0),
                (1, 0, 1.0),
                (1, 1, 1.0),
                (1, 2, 1.0),
                (2, 2, 1.0),
                (2, 3, 1.0),
                (3, 2, 1.0),
                (3, 3, 1.0),
            ],
        )
        .unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, nr: usize, nc: usize, density: f64) -> TripletMatrix {
        let mut entries = Vec::new();
        for r in 0..nr {
            for c in 0..nc {
                if rng.gen_bool(density) {
                    entries.push((r, c, rng.gen_range(-2.0..2.0)));
                }
            }
        }
        TripletMatrix::new(nr, nc, entries).unwrap()
    }

    fn cfg_with(w_max: u64) -> PartitionConfig {
        PartitionConfig {
            w_max,
            ..Default::default()
        }
    }

    #[test]
    fn shp_cn_puts_the_shared_column_in_the_border() {
        let a = running_example();
        let bf = shp_cn(&a, &cfg_with(120), Widths::default()).unwrap();
        assert_eq!(bf.k, 2);
        assert_eq!(bf.kind, BlockKind::SinglyBordered);
        assert_eq!(bf.col_slice_of[2], SliceId::Border);
        assert_eq!(bf.border_cols(), 1);
        let report = validate_block_form(&a, &bf).unwrap();
        assert!(report.is_valid());
        assert_eq!(report.sum_lambda(), 5);
    }

    #[test]
    fn shp_cn_with_roomy_budget_is_one_slice() {
        let a = running_example();
        let w = Widths::default();
        let bf = shp_cn(&a, &cfg_with(storage_bytes(&a, w)), w).unwrap();
        assert_eq!(bf.k, 1);
        assert_eq!(bf.border_cols(), 0);
    }

    /// Every decoded row slice of an shp_cn form fits the byte budget.
    #[test]
    fn shp_cn_row_slices_fit_the_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = Widths::default();
        for trial in 0..10 {
            let a = random_matrix(&mut rng, 30, 30, 0.12);
            let full = storage_bytes(&a, w);
            let cfg = PartitionConfig {
                w_max: (full / 3).max(200),
                seed: trial,
                ..Default::default()
            };
            let bf = shp_cn(&a, &cfg, w).unwrap();
            assert!(validate_block_form(&a, &bf).unwrap().is_valid());
            for part in 0..bf.k {
                let rows: Vec<usize> = (0..a.n_rows())
                    .filter(|&i| bf.row_slice_of[i] == SliceId::Slice(part))
                    .collect();
                let fitm = RowSliceFit::new(&a, w);
                use crate::partitioner::FitModel;
                assert!(
                    fitm.part_bytes(&rows) <= cfg.w_max,
                    "trial {trial}: slice {part} exceeds the budget"
                );
            }
        }
    }

    #[test]
    fn shp_rn_mirrors_shp_cn_on_the_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 20, 14, 0.15);
            let w = Widths::default();
            let cfg = cfg_with(storage_bytes(&a, w) / 2);
            // partitioning columns of `a` sees the same hypergraph, weights,
            // and byte model as partitioning rows of the transpose, so the
            // bisection tree and both orders coincide exactly
            let bf = shp_cn(&a.transpose(), &cfg, w).unwrap();
            let (row_perm, col_perm) = shp_rn(&a, &cfg, w).unwrap();
            assert_eq!(col_perm, bf.row_perm);
            assert_eq!(row_perm, bf.col_perm);
        }
    }

    #[test]
    fn shp_rn_matches_shp_cn_on_symmetric_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let mut entries = Vec::new();
            for i in 0..20 {
                entries.push((i, i, 1.0));
                for j in 0..i {
                    if rng.gen_bool(0.15) {
                        let v = rng.gen_range(-1.0..1.0);
                        entries.push((i, j, v));
                        entries.push((j, i, v));
                    }
                }
            }
            let a = TripletMatrix::new(20, 20, entries).unwrap();
            let w = Widths::default();
            let cfg = cfg_with(storage_bytes(&a, w) / 2);
            let bf = shp_cn(&a, &cfg, w).unwrap();
            let (_, col_perm) = shp_rn(&a, &cfg, w).unwrap();
            // same hypergraph, same seed: identical vertex partition, so the
            // column grouping mirrors the row grouping exactly
            assert_eq!(col_perm, bf.row_perm);
        }
    }

    #[test]
    fn shp_rn_on_block_diagonal_has_empty_border() {
        let mut entries = Vec::new();
        for b in 0..2 {
            for i in 0..4 {
                for j in 0..4 {
                    entries.push((4 * b + i, 4 * b + j, 1.0));
                }
            }
        }
        let a = TripletMatrix::new(8, 8, entries).unwrap();
        let w = Widths::default();
        let block = TripletMatrix::new(
            8,
            8,
            a.entries().iter().filter(|e| e.0 < 4).copied().collect(),
        )
        .unwrap();
        let cfg = cfg_with(storage_bytes(&block, w) + 32);
        let (row_perm, col_perm) = shp_rn(&a, &cfg, w).unwrap();
        // rows and columns stay grouped by block: positions 0..4 hold one
        // block, 4..8 the other, with no straggler rows at the end
        for base in [0, 4] {
            let block_of = |i: usize| i / 4;
            let rows: Vec<usize> = (base..base + 4)
                .map(|pos| row_perm.order()[pos])
                .collect();
            assert!(rows.iter().all(|&r| block_of(r) == block_of(rows[0])));
            let cols: Vec<usize> = (base..base + 4)
                .map(|pos| col_perm.order()[pos])
                .collect();
            assert!(cols.iter().all(|&c| block_of(c) == block_of(cols[0])));
        }
    }

    #[test]
    fn shp_ercn_sends_the_coupling_row_to_the_border() {
        // two dense blocks bridged by one extra row; zero imbalance
        // tolerance makes keeping the bridging row on one side infeasible,
        // and splitting a block instead costs more than the bridge's four
        // nonzeros, so its net is cut and the row removed into the border
        let mut entries = Vec::new();
        for b in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    entries.push((3 * b + i, 3 * b + j, 1.0));
                }
            }
        }
        for j in 1..5 {
            entries.push((6, j, 1.0));
        }
        let a = TripletMatrix::new(7, 6, entries).unwrap();
        let cfg = PartitionConfig {
            w_max: 200,
            epsilon: 0.0,
            ..Default::default()
        };
        let bf = shp_ercn(&a, &cfg, Widths::default()).unwrap();
        assert_eq!(bf.kind, BlockKind::DoublyBordered);
        assert_eq!(bf.k, 2);
        assert_eq!(bf.row_slice_of[6], SliceId::Border);
        // the columns the bridge touched have all their remaining nonzeros
        // in a single slice, so they rejoin it instead of becoming border
        assert_eq!(bf.border_cols(), 0);
        assert!(validate_block_form(&a, &bf).unwrap().is_valid());
    }

    #[test]
    fn shp_ercn_is_structurally_valid_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let w = Widths::default();
        for trial in 0..10 {
            let a = random_matrix(&mut rng, 25, 20, 0.15);
            let cfg = PartitionConfig {
                w_max: (storage_bytes(&a, w) / 3).max(200),
                seed: 100 + trial,
                ..Default::default()
            };
            let bf = shp_ercn(&a, &cfg, w).unwrap();
            let report = validate_block_form(&a, &bf).unwrap();
            assert!(report.is_valid(), "trial {trial}: {:?}", report.violations);
        }
    }

    #[test]
    fn mhp_rcn_pieces_are_disjoint_and_fit() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let w = Widths::default();
        for trial in 0..5 {
            let a = random_matrix(&mut rng, 25, 25, 0.12);
            let cfg = PartitionConfig {
                w_max: (storage_bytes(&a, w) / 3).max(250),
                seed: 40 + trial,
                ..Default::default()
            };
            let (s, tree) = mhp_rcn(&a, &cfg, w).unwrap();
            assert_eq!(s.k(), tree.k);
            let total_nnz: usize = s.pieces().iter().map(TripletMatrix::nnz).sum();
            assert_eq!(total_nnz, a.nnz());
            for (p, &bytes) in s.piece_storage_bytes(w).iter().enumerate() {
                assert!(bytes <= cfg.w_max, "trial {trial}: piece {p} too big");
            }
            // pieces sum to the original
            let x: Vec<f64> = (0..a.n_cols()).map(|j| 0.3 + j as f64).collect();
            let y = spmv_csr(&a.to_csr(), &x).unwrap();
            let mut y_sum = vec![0.0; a.n_rows()];
            for piece in s.pieces() {
                let yp = spmv_csr(&piece.to_csr(), &x).unwrap();
                for (acc, b) in y_sum.iter_mut().zip(&yp) {
                    *acc += b;
                }
            }
            for (u, v) in y.iter().zip(&y_sum) {
                assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0));
            }
        }
    }

    #[test]
    fn reordered_spmv_matches_the_original() {
        // permutation semantics: y'[rp(i)] == y[i] when x'[cp(j)] = x[j]
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_matrix(&mut rng, 18, 14, 0.2);
        let w = Widths::default();
        let cfg = cfg_with((storage_bytes(&a, w) / 2).max(200));
        let x: Vec<f64> = (0..a.n_cols()).map(|j| 1.0 / (j + 1) as f64).collect();
        let y = spmv_csr(&a.to_csr(), &x).unwrap();

        let bf = shp_cn(&a, &cfg, w).unwrap();
        let perms = [
            (bf.row_perm.clone(), bf.col_perm.clone()),
            shp_rn(&a, &cfg, w).unwrap(),
            sbfs_order(&a),
            srcm_order(&a),
        ];
        for (rp, cp) in &perms {
            let pa = a.permuted(rp, cp).unwrap();
            let mut px = vec![0.0; a.n_cols()];
            for j in 0..a.n_cols() {
                px[cp.map(j)] = x[j];
            }
            let py = spmv_csr(&pa.to_csr(), &px).unwrap();
            for i in 0..a.n_rows() {
                let d = (py[rp.map(i)] - y[i]).abs();
                assert!(d <= 1e-12 * y[i].abs().max(1.0));
            }
        }
    }
}
