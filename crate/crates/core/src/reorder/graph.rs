//! Breadth-first and reverse Cuthill-McKee baseline orderings on the
//! bipartite row/column graph of a matrix.

use std::collections::VecDeque;

use crate::hypergraph::{build_bipartite, BipartiteGraph};
use crate::sparse::{Permutation, TripletMatrix};

/// Splits a combined-id visit order into (row order, column order).
fn split_order(g: &BipartiteGraph, combined: &[usize]) -> (Permutation, Permutation) {
    let mut rows = Vec::with_capacity(g.n_rows());
    let mut cols = Vec::with_capacity(g.n_cols());
    for &v in combined {
        if v < g.n_rows() {
            rows.push(v);
        } else {
            cols.push(v - g.n_rows());
        }
    }
    (
        Permutation::from_order(&rows).expect("visit order covers each row once"),
        Permutation::from_order(&cols).expect("visit order covers each column once"),
    )
}

/// Breadth-first ordering. BFS restarts from the lowest-id unvisited row
/// vertex per connected component and expands neighbors in ascending id
/// order; the visit order of row vertices becomes the row permutation and
/// likewise for columns. Columns unreachable from any row (empty columns)
/// are appended in id order.
pub fn sbfs_order(a: &TripletMatrix) -> (Permutation, Permutation) {
    let g = build_bipartite(a);
    let n = g.n_vertices();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for seed in 0..g.n_rows() {
        if visited[seed] {
            continue;
        }
        visited[seed] = true;
        queue.push_back(seed);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for u in g.neighbors(v) {
                if !visited[u] {
                    visited[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order.extend((g.n_rows()..n).filter(|&v| !visited[v]));
    split_order(&g, &order)
}

/// Reverse Cuthill-McKee ordering. Each connected component is traversed
/// Cuthill-McKee style — started at its minimum-degree vertex, neighbors
/// expanded in ascending (degree, id) order — then reversed; components are
/// concatenated in the order their lowest-id vertex is found. Degree-zero
/// vertices are singleton components and keep their relative id order.
pub fn srcm_order(a: &TripletMatrix) -> (Permutation, Permutation) {
    let g = build_bipartite(a);
    let n = g.n_vertices();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for first in 0..n {
        if visited[first] {
            continue;
        }
        // find the minimum-degree vertex of this component
        let mut component = vec![first];
        let mut seen_here = vec![first];
        visited[first] = true;
        let mut i = 0;
        while i < component.len() {
            for u in g.neighbors(component[i]) {
                if !visited[u] {
                    visited[u] = true;
                    component.push(u);
                    seen_here.push(u);
                }
            }
            i += 1;
        }
        let &start = component
            .iter()
            .min_by_key(|&&v| (g.degree(v), v))
            .expect("component is non-empty");

        // Cuthill-McKee from `start`, then reverse this component's span
        for &v in &seen_here {
            visited[v] = false;
        }
        let begin = order.len();
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = g
                .neighbors(v)
                .into_iter()
                .filter(|&u| !visited[u])
                .collect();
            next.sort_by_key(|&u| (g.degree(u), u));
            for u in next {
                visited[u] = true;
                queue.push_back(u);
            }
        }
        order[begin..].reverse();
    }
    split_order(&g, &order)
}
