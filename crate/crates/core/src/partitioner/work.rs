//! Mutable working form of a (sub)hypergraph used during partitioning.
//!
//! Local vertex/net ids are dense `0..n`; `vert_orig` / `net_orig` trace each
//! back to the hypergraph the recursion started from. Only nets with at least
//! two pins are carried, since single-pin nets can never be cut.

use crate::hypergraph::Hypergraph;
use crate::partitioner::NetHandling;

#[derive(Debug, Clone)]
pub(crate) struct WorkHg {
    /// Balance weight per local vertex (storage bytes or model weight).
    pub vwt: Vec<u64>,
    pub net_cost: Vec<u64>,
    /// Original net id each local net descends from (fragments keep it).
    pub net_orig: Vec<usize>,
    /// Pins per net: local vertex ids, ascending.
    pub pins: Vec<Vec<usize>>,
    /// Local vertex id -> original vertex id, ascending. Empty on coarsened
    /// levels, whose vertices cover several originals each.
    pub vert_orig: Vec<usize>,
}

impl WorkHg {
    pub fn n_vertices(&self) -> usize {
        self.vwt.len()
    }

    pub fn n_nets(&self) -> usize {
        self.pins.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.vwt.iter().sum()
    }

    /// Per-vertex incidence lists (net ids ascending).
    pub fn vertex_nets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_vertices()];
        for (n, net) in self.pins.iter().enumerate() {
            for &v in net {
                out[v].push(n);
            }
        }
        out
    }

    /// Root working copy over all vertices of `h`, with the given balance
    /// weights (callers choose raw hypergraph weights or storage bytes).
    pub fn from_hypergraph(h: &Hypergraph, weights: Vec<u64>) -> Self {
        let mut net_cost = Vec::new();
        let mut net_orig = Vec::new();
        let mut pins = Vec::new();
        for n in 0..h.n_nets() {
            if h.pins(n).len() >= 2 {
                net_cost.push(h.net_cost(n));
                net_orig.push(n);
                pins.push(h.pins(n).to_vec());
            }
        }
        WorkHg {
            vwt: weights,
            net_cost,
            net_orig,
            pins,
            vert_orig: (0..h.n_vertices()).collect(),
        }
    }
}

/// Result of deriving the two child sub-hypergraphs after a bisection.
pub(crate) struct Children {
    pub side: [WorkHg; 2],
    /// Cost of the nets cut by this bisection (each counted once).
    pub cut_cost: u64,
    /// Original ids of the nets cut by this bisection.
    pub cut_origs: Vec<usize>,
    /// Row nets removed under [`NetHandling::EnhancedRowRemove`], as
    /// `(original net id, original vertex ids of its pins)`.
    pub removed: Vec<(usize, Vec<usize>)>,
}

/// Splits `w` according to a bipartition, applying the configured treatment
/// of cut nets: `Split` keeps each cut net's per-side fragment, `Remove`
/// drops cut nets entirely, and `EnhancedRowRemove` drops cut *row* nets
/// together with all their vertices and then splits cut column nets. In all
/// modes fragments with fewer than two pins are discarded.
pub(crate) fn derive_children(
    w: &WorkHg,
    parts: &[u8],
    handling: NetHandling,
    is_row_net: &dyn Fn(usize) -> bool,
) -> Children {
    let nv = w.n_vertices();
    let mut removed_flag = vec![false; nv];
    let mut removed = Vec::new();
    let mut cut_cost = 0u64;
    let mut cut_origs = Vec::new();

    let is_cut: Vec<bool> = w
        .pins
        .iter()
        .map(|net| {
            let first = parts[net[0]];
            net.iter().any(|&v| parts[v] != first)
        })
        .collect();
    for (n, &cut) in is_cut.iter().enumerate() {
        if cut {
            cut_cost += w.net_cost[n];
            cut_origs.push(w.net_orig[n]);
            if handling == NetHandling::EnhancedRowRemove && is_row_net(w.net_orig[n]) {
                for &v in &w.pins[n] {
                    removed_flag[v] = true;
                }
                removed.push((
                    w.net_orig[n],
                    w.pins[n].iter().map(|&v| w.vert_orig[v]).collect(),
                ));
            }
        }
    }
    cut_origs.sort_unstable();
    cut_origs.dedup();

    // Vertex maps for each side (removed vertices join neither child).
    let mut local_to_child = vec![usize::MAX; nv];
    let mut side_verts: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for v in 0..nv {
        if removed_flag[v] {
            continue;
        }
        let s = parts[v] as usize;
        local_to_child[v] = side_verts[s].len();
        side_verts[s].push(v);
    }

    let mut side = side_verts.map(|verts| WorkHg {
        vwt: verts.iter().map(|&v| w.vwt[v]).collect(),
        net_cost: Vec::new(),
        net_orig: Vec::new(),
        pins: Vec::new(),
        vert_orig: verts.iter().map(|&v| w.vert_orig[v]).collect(),
    });

    for (n, net) in w.pins.iter().enumerate() {
        if is_cut[n] {
            match handling {
                NetHandling::Remove => continue,
                NetHandling::EnhancedRowRemove if is_row_net(w.net_orig[n]) => continue,
                _ => {}
            }
        }
        let mut frag: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for &v in net {
            if removed_flag[v] {
                continue;
            }
            frag[parts[v] as usize].push(local_to_child[v]);
        }
        for (s, pins) in frag.into_iter().enumerate() {
            if pins.len() >= 2 {
                side[s].net_cost.push(w.net_cost[n]);
                side[s].net_orig.push(w.net_orig[n]);
                side[s].pins.push(pins);
            }
        }
    }

    Children {
        side,
        cut_cost,
        cut_origs,
        removed,
    }
}
