//! Boundary Fiduccia–Mattheyses refinement for 2-way partitions.
//!
//! Each pass moves free boundary vertices one at a time, highest gain first
//! (ties broken toward the lowest vertex id), locking each mover, and finally
//! rolls back to the best prefix seen. Moves may temporarily worsen the cut;
//! the prefix rollback keeps the hill-climbing sound.
//!
//! Two weight limits are in play. `cap` is the balance constraint a final
//! partition should satisfy; `admit` (= cap plus one maximum vertex weight)
//! is the looser limit a single move may reach. Without that slack a
//! perfectly balanced start would freeze: every move overshoots the cap
//! before the compensating move can happen. The rollback picks the best
//! prefix by (feasible-under-cap, cut, max side weight), so transient
//! overweight states never survive when a feasible prefix exists.

use std::collections::{BTreeMap, BTreeSet};

use crate::partitioner::work::WorkHg;

/// State of a 2-way partition after refinement.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RefineOutcome {
    pub cut: u64,
    pub weights: [u64; 2],
}

/// Cut-net cutsize (each cut net counted once) of the current parts.
pub(crate) fn cut_cost(w: &WorkHg, parts: &[u8]) -> u64 {
    let mut cut = 0;
    for (n, net) in w.pins.iter().enumerate() {
        let first = parts[net[0]];
        if net.iter().any(|&v| parts[v] != first) {
            cut += w.net_cost[n];
        }
    }
    cut
}

fn side_weights(w: &WorkHg, parts: &[u8]) -> [u64; 2] {
    let mut ws = [0u64; 2];
    for (v, &p) in parts.iter().enumerate() {
        ws[p as usize] += w.vwt[v];
    }
    ws
}

/// Lexicographic "better" for (feasible, cut, max side weight).
pub(crate) fn better(a: (bool, u64, u64), b: (bool, u64, u64)) -> bool {
    (!b.0 && a.0) || (a.0 == b.0 && (a.1 < b.1 || (a.1 == b.1 && a.2 < b.2)))
}

pub(crate) fn refine(
    w: &WorkHg,
    vnets: &[Vec<usize>],
    parts: &mut [u8],
    cap: u64,
    admit: u64,
    max_passes: usize,
) -> RefineOutcome {
    let nv = w.n_vertices();
    let mut weights = side_weights(w, parts);
    let mut cut = cut_cost(w, parts);
    if nv < 2 {
        return RefineOutcome { cut, weights };
    }
    let mut side_count = [0usize; 2];
    for &p in parts.iter() {
        side_count[p as usize] += 1;
    }

    for _ in 0..max_passes {
        let pass_start = (feasible(weights, cap), cut, weights[0].max(weights[1]));

        // Pin counts per net and initial gains.
        let mut cnt: Vec<[usize; 2]> = w
            .pins
            .iter()
            .map(|net| {
                let ones = net.iter().filter(|&&v| parts[v] == 1).count();
                [net.len() - ones, ones]
            })
            .collect();
        let mut gain = vec![0i64; nv];
        for v in 0..nv {
            let from = parts[v] as usize;
            for &n in &vnets[v] {
                let c = w.net_cost[n] as i64;
                if cnt[n][from] == 1 {
                    gain[v] += c;
                }
                if cnt[n][1 - from] == 0 {
                    gain[v] -= c;
                }
            }
        }

        // Gain buckets over boundary vertices.
        let mut buckets: BTreeMap<i64, BTreeSet<usize>> = BTreeMap::new();
        let mut queued = vec![false; nv];
        let mut locked = vec![false; nv];
        let boundary = |v: usize, cnt: &Vec<[usize; 2]>, vnets: &[Vec<usize>]| {
            vnets[v].iter().any(|&n| cnt[n][0] > 0 && cnt[n][1] > 0)
        };
        for v in 0..nv {
            if boundary(v, &cnt, vnets) {
                buckets.entry(gain[v]).or_default().insert(v);
                queued[v] = true;
            }
        }

        let mut moves: Vec<usize> = Vec::new();
        let mut best_len = 0usize;
        let mut best_state = pass_start;

        loop {
            // Highest-gain movable vertex, lowest id on ties.
            let mut chosen = None;
            'search: for (_, set) in buckets.iter().rev() {
                for &v in set {
                    let from = parts[v] as usize;
                    if side_count[from] <= 1 {
                        continue;
                    }
                    let to = 1 - from;
                    let wv = w.vwt[v];
                    let new_to = weights[to] + wv;
                    let within_admit = new_to <= admit;
                    let shrinks_heavier =
                        new_to.max(weights[from] - wv) < weights[0].max(weights[1]);
                    if within_admit || shrinks_heavier {
                        chosen = Some(v);
                        break 'search;
                    }
                }
            }
            let Some(v) = chosen else { break };

            let from = parts[v] as usize;
            let to = 1 - from;
            buckets.get_mut(&gain[v]).unwrap().remove(&v);
            if buckets[&gain[v]].is_empty() {
                buckets.remove(&gain[v]);
            }
            queued[v] = false;
            locked[v] = true;

            let mut requeue = Vec::new();
            let adjust = |u: usize,
                              delta: i64,
                              gain: &mut Vec<i64>,
                              buckets: &mut BTreeMap<i64, BTreeSet<usize>>,
                              queued: &mut Vec<bool>| {
                if queued[u] {
                    let set = buckets.get_mut(&gain[u]).unwrap();
                    set.remove(&u);
                    if set.is_empty() {
                        buckets.remove(&gain[u]);
                    }
                }
                gain[u] += delta;
                if queued[u] {
                    buckets.entry(gain[u]).or_default().insert(u);
                }
            };

            for &n in &vnets[v] {
                let c = w.net_cost[n] as i64;
                let ct = cnt[n][to];
                if ct == 0 {
                    cut += w.net_cost[n];
                    for &u in &w.pins[n] {
                        if u != v && !locked[u] {
                            adjust(u, c, &mut gain, &mut buckets, &mut queued);
                            if !queued[u] {
                                requeue.push(u);
                            }
                        }
                    }
                } else if ct == 1 {
                    for &u in &w.pins[n] {
                        if u != v && !locked[u] && parts[u] as usize == to {
                            adjust(u, -c, &mut gain, &mut buckets, &mut queued);
                        }
                    }
                }
                cnt[n][from] -= 1;
                cnt[n][to] += 1;
                let cf = cnt[n][from];
                if cf == 0 {
                    cut -= w.net_cost[n];
                    for &u in &w.pins[n] {
                        if u != v && !locked[u] {
                            adjust(u, -c, &mut gain, &mut buckets, &mut queued);
                        }
                    }
                } else if cf == 1 {
                    for &u in &w.pins[n] {
                        if u != v && !locked[u] && parts[u] as usize == from {
                            adjust(u, c, &mut gain, &mut buckets, &mut queued);
                        }
                    }
                }
            }
            for u in requeue {
                if !locked[u] && !queued[u] {
                    buckets.entry(gain[u]).or_default().insert(u);
                    queued[u] = true;
                }
            }

            parts[v] = to as u8;
            weights[from] -= w.vwt[v];
            weights[to] += w.vwt[v];
            side_count[from] -= 1;
            side_count[to] += 1;
            moves.push(v);

            let cur = (feasible(weights, cap), cut, weights[0].max(weights[1]));
            if better(cur, best_state) {
                best_state = cur;
                best_len = moves.len();
            }
        }

        // Roll back to the best prefix.
        for &v in moves[best_len..].iter().rev() {
            let from = parts[v] as usize;
            let to = 1 - from;
            parts[v] = to as u8;
            weights[from] -= w.vwt[v];
            weights[to] += w.vwt[v];
            side_count[from] -= 1;
            side_count[to] += 1;
        }
        cut = best_state.1;
        debug_assert_eq!(cut, cut_cost(w, parts));
        debug_assert_eq!(weights, side_weights(w, parts));

        if !better(best_state, pass_start) {
            break; // pass brought no strict improvement
        }
    }
    RefineOutcome { cut, weights }
}

fn feasible(weights: [u64; 2], cap: u64) -> bool {
    weights[0] <= cap && weights[1] <= cap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::build_column_net;
    use crate::sparse::TripletMatrix;

    #[test]
    fn refine_finds_the_obvious_split() {
        // Two dense 3x3 blocks sharing nothing; a mixed start must untangle.
        let mut entries = Vec::new();
        for b in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    entries.push((3 * b + i, 3 * b + j, 1.0));
                }
            }
        }
        let m = TripletMatrix::new(6, 6, entries).unwrap();
        let h = build_column_net(&m);
        let w = WorkHg::from_hypergraph(&h, h.vertex_weights().to_vec());
        let vnets = w.vertex_nets();
        let mut parts = vec![0, 1, 0, 1, 0, 1];
        let total = w.total_weight();
        let cap = (total as f64 / 2.0 * 1.1) as u64;
        let max_vwt = w.vwt.iter().copied().max().unwrap();
        let out = refine(&w, &vnets, &mut parts, cap, cap + max_vwt, 8);
        assert_eq!(out.cut, 0);
        assert_eq!(parts[0], parts[1]);
        assert_eq!(parts[0], parts[2]);
        assert_eq!(parts[3], parts[4]);
        assert_ne!(parts[0], parts[3]);
    }

    #[test]
    fn refinement_never_empties_a_side() {
        let m = TripletMatrix::new(
            3,
            1,
            vec![(0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0)],
        )
        .unwrap();
        let h = build_column_net(&m);
        let w = WorkHg::from_hypergraph(&h, h.vertex_weights().to_vec());
        let vnets = w.vertex_nets();
        // one cut net whatever happens; FM would love to empty a side
        let mut parts = vec![0, 1, 1];
        refine(&w, &vnets, &mut parts, u64::MAX, u64::MAX, 4);
        assert!(parts.contains(&0));
        assert!(parts.contains(&1));
    }
}
